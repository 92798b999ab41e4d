"""Brute-force matrix oracle for finite spaces.

The operator is realized as a dense matrix in the orthonormal basis
``e_x = chi_{x} / sqrt(mass(x))``; fractional powers and the polar
decomposition come from a cyclic complex Jacobi eigensolver written here
rather than from LAPACK, so that the oracle shares no code path with the
pointwise formulas it is meant to check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .properties import Status, Verdict
from .space import SpaceError

HERMITIAN_TOL = 1e-12
RANK_CUTOFF = 1e-10
NEGATIVE_FLOOR = 1e-10
MAX_SWEEPS = 100


class NotHermitian(ValueError):
    pass


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray  # ascending, real
    vectors: np.ndarray  # orthonormal columns

    def reconstruct(self) -> np.ndarray:
        v = self.vectors
        return (v * self.eigenvalues) @ v.conj().T


def matrix_of(space) -> np.ndarray:
    """A[x, y] = w(x) sqrt(mass(x) / mass(y)) when phi(x) = y."""
    if getattr(space, "is_lazy", False):
        raise SpaceError("matrix_of needs a finite space")
    n = len(space.points)
    a = np.zeros((n, n), dtype=complex)
    for i, x in enumerate(space.points):
        y = space.phi_of(x)
        j = space.index[y]
        a[i, j] = complex(space.weight_of(x)) * np.sqrt(float(space.mass_of(x)) / float(space.mass_of(y)))
    return a


def _check_hermitian(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise NotHermitian("matrix has non-finite entries")
    scale = max(np.abs(s).max(initial=0.0), 1.0)
    if np.abs(s - s.conj().T).max(initial=0.0) > HERMITIAN_TOL * scale:
        raise NotHermitian("matrix is not Hermitian")
    return (s + s.conj().T) / 2


def sym_eig(s, hermitian: bool = True) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations."""
    a = _check_hermitian(s)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    norm = np.linalg.norm(a)
    if norm == 0 or n == 1:
        return EigenDecomposition(np.real(np.diag(a)).copy(), v)
    target = 1e-15 * norm
    for _ in range(MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300 or mag < 1e-18 * norm:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1 / np.sqrt(1 + t * t)
                s_ = t * c
                g = np.array([[c, s_], [-s_ * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0
                v[:, idx] = v[:, idx] @ g
    vals = np.real(np.diag(a))
    order = np.argsort(vals, kind="stable")
    return EigenDecomposition(vals[order], v[:, order])


def matrix_power_psd(s, t: float, eig: EigenDecomposition | None = None) -> np.ndarray:
    """S^t for positive semidefinite S.

    Eigenvalues at or below ``RANK_CUTOFF * lambda_max`` are treated as exact
    zeros (fractional powers would otherwise magnify roundoff); eigenvalues
    below ``-NEGATIVE_FLOOR * max(1, lambda_max)`` are an error.  ``0 ** 0``
    is taken as 1, so ``S^0`` is the identity.
    """
    if eig is None:
        eig = sym_eig(s)
    vals = eig.eigenvalues
    top = max(vals.max(initial=0.0), 0.0)
    if vals.size and vals.min() < -NEGATIVE_FLOOR * max(1.0, top):
        raise ValueError(f"matrix is not positive semidefinite (eigenvalue {vals.min():.3e})")
    kept = vals > RANK_CUTOFF * top
    powered = np.where(kept, np.where(kept, vals, 1.0) ** t, 1.0 if t == 0 else 0.0)
    return (eig.vectors * powered) @ eig.vectors.conj().T


def _pseudo_inverse_root(eig: EigenDecomposition) -> np.ndarray:
    vals = eig.eigenvalues
    top = max(vals.max(initial=0.0), 0.0)
    kept = vals > RANK_CUTOFF * top
    inv = np.where(kept, 1 / np.sqrt(np.where(kept, vals, 1.0)), 0.0)
    return (eig.vectors * inv) @ eig.vectors.conj().T


def polar(a) -> tuple[np.ndarray, np.ndarray]:
    """Polar decomposition A = U M with M = (A*A)^(1/2) and ker U = ker A."""
    a = np.asarray(a, dtype=complex)
    eig = sym_eig(a.conj().T @ a)
    m = matrix_power_psd(None, 0.5, eig)
    u = a @ _pseudo_inverse_root(eig)
    return u, m


def aluthge_matrix(a, alpha: float) -> np.ndarray:
    """Delta_alpha(A) = |A|^alpha U |A|^(1 - alpha)."""
    a = np.asarray(a, dtype=complex)
    eig = sym_eig(a.conj().T @ a)
    u = a @ _pseudo_inverse_root(eig)
    left = matrix_power_psd(None, alpha / 2, eig)
    right = matrix_power_psd(None, (1 - alpha) / 2, eig)
    return left @ u @ right


def psd_order_test(s, t, tol: float) -> Verdict:
    """Holds iff T - S is positive semidefinite up to ``-tol``."""
    s = _check_hermitian(s)
    t = _check_hermitian(t)
    eig = sym_eig(t - s)
    lowest = float(eig.eigenvalues[0]) if eig.eigenvalues.size else 0.0
    values = {"min_eigenvalue": lowest, "tol": tol}
    if lowest >= -tol:
        return Verdict(Status.HOLDS, values=values)
    witness = {"eigenvector": [[float(z.real), float(z.imag)] for z in eig.vectors[:, 0]]}
    return Verdict(Status.FAILS, witness=witness, values=values)


def hyponormality_test(a, p: float, tol_scale: float = 1e-9) -> Verdict:
    """|A|^(2p) >= |A*|^(2p) with floor tol_scale * ||A||_2^(2p)."""
    a = np.asarray(a, dtype=complex)
    big = matrix_power_psd(a.conj().T @ a, p)
    small = matrix_power_psd(a @ a.conj().T, p)
    spectral = np.sqrt(max(sym_eig(a.conj().T @ a).eigenvalues.max(initial=0.0), 0.0))
    return psd_order_test(small, big, tol_scale * spectral ** (2 * p))
