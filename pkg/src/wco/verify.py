"""Agreement suites between the pointwise formulas and the matrix oracle.

Vectors are compared in oracle coordinates ``c = sqrt(mass) * f``.  Each
suite returns the largest deviation it saw; errors of operator actions are
normalized by ``1 + |reference|`` so that one tolerance covers spaces whose
entries span several orders of magnitude.
"""

from __future__ import annotations

import numpy as np

from . import calculus, oracle, properties


def _sqrt_mass(space) -> np.ndarray:
    return np.sqrt(np.array([float(space.mass_of(x)) for x in space.points]))


def _random_vectors(rng, dim: int, count: int) -> list[np.ndarray]:
    return [rng.normal(size=dim) + 1j * rng.normal(size=dim) for _ in range(count)]


def _action_error(reference: np.ndarray, candidate: np.ndarray) -> float:
    return float(np.linalg.norm(reference - candidate) / (1 + np.linalg.norm(reference)))


def aluthge_agreement(space, alphas=(0.25, 0.5, 0.75, 1.0)) -> float:
    """max over alpha of |Delta_alpha(A) - matrix(w_alpha)|_F / (1 + |A|_F)."""
    a = oracle.matrix_of(space)
    scale = 1 + np.linalg.norm(a)
    worst = 0.0
    for alpha in alphas:
        direct = oracle.aluthge_matrix(a, alpha)
        closed = oracle.matrix_of(calculus.aluthge_space(space, alpha))
        worst = max(worst, float(np.linalg.norm(direct - closed) / scale))
    return worst


def polar_agreement(space, rng, vectors: int = 10) -> dict:
    """U against the partial-isometry weight, M against multiplication by h^(1/2)."""
    a = oracle.matrix_of(space)
    u, m = oracle.polar(a)
    tilde = oracle.matrix_of(calculus.reweight(space, calculus.partial_isometry_weight(space)))
    root_h = np.sqrt([float(v) for v in calculus.radon_nikodym(space).values()])
    modulus = 0.0
    for c in _random_vectors(rng, space.dim, vectors):
        modulus = max(modulus, _action_error(root_h * c, m @ c))
    return {"partial_isometry": float(np.abs(u - tilde).max()), "modulus": modulus,
            "reconstruction": float(np.linalg.norm(a - u @ m) / max(np.linalg.norm(a), 1e-300))}


def adjoint_agreement(space, rng, vectors: int = 10) -> float:
    a = oracle.matrix_of(space)
    s = _sqrt_mass(space)
    worst = 0.0
    for c in _random_vectors(rng, space.dim, vectors):
        formula = s * calculus.apply_adjoint(space, c / s)
        worst = max(worst, _action_error(a.conj().T @ c, formula))
    return worst


def adjoint_modulus_agreement(space, rng, powers=(0.5, 1.0, 2.0), vectors: int = 10) -> float:
    a = oracle.matrix_of(space)
    eig = oracle.sym_eig(a @ a.conj().T)
    s = _sqrt_mass(space)
    worst = 0.0
    for p in powers:
        mat = oracle.matrix_power_psd(None, p / 2, eig)
        for c in _random_vectors(rng, space.dim, vectors):
            formula = s * calculus.apply_adjoint_modulus_power(space, p, c / s)
            worst = max(worst, _action_error(mat @ c, formula))
    return worst


def projection_agreement(space) -> dict:
    a = oracle.matrix_of(space)
    u, _ = oracle.polar(a)
    p = calculus.action_matrix(space, calculus.projection)
    return {"range_projection": float(np.abs(u @ u.conj().T - p).max()),
            "idempotent": float(np.abs(p @ p - p).max()),
            "selfadjoint": float(np.abs(p.conj().T - p).max())}


def hyponormality_agreement(space, powers=(0.25, 0.5, 1.0, 2.0)) -> list[dict]:
    """Criterion verdict against the PSD-order verdict; returns disagreements."""
    a = oracle.matrix_of(space)
    out = []
    for p in powers:
        criterion = properties.is_p_hyponormal(space, p)
        matrix = oracle.hyponormality_test(a, p)
        if criterion.holds != matrix.holds:
            out.append({"p": p, "criterion": criterion.status.value, "oracle": matrix.status.value,
                        "min_eigenvalue": matrix.values["min_eigenvalue"]})
    return out


def fixed_point_agreement(space, alphas=(0.25, 0.5, 0.75, 1.0)) -> list[dict]:
    quasi = properties.is_quasinormal(space)
    out = []
    for alpha in alphas:
        fixed = properties.aluthge_fixed_point(space, alpha)
        if fixed.holds != quasi.holds:
            out.append({"alpha": alpha, "fixed_point": fixed.status.value,
                        "quasinormal": quasi.status.value})
    return out


def run_all(space, rng, alphas=(0.25, 0.5, 0.75, 1.0), powers=(0.25, 0.5, 1.0, 2.0)) -> dict:
    """Every suite on one finite space."""
    return {
        "aluthge": aluthge_agreement(space, alphas),
        "polar": polar_agreement(space, rng),
        "adjoint": adjoint_agreement(space, rng),
        "adjoint_modulus": adjoint_modulus_agreement(space, rng),
        "projection": projection_agreement(space),
        "hyponormality_disagreements": hyponormality_agreement(space, powers),
        "fixed_point_disagreements": fixed_point_agreement(space, alphas),
    }
