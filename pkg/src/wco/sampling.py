"""Seeded random finite spaces for oracle cross-checks."""

from __future__ import annotations

import numpy as np

from .space import PointSpace, build_space


def random_space(rng: np.random.Generator, min_dim: int = 2, max_dim: int = 12,
                 zero_weight_prob: float = 0.2) -> PointSpace:
    """Random space: log-uniform masses in [0.1, 10], a uniform self-map, complex weights.

    Weight moduli are log-uniform in [0.1, 10] with uniform phase; each weight
    is exactly zero with probability ``zero_weight_prob``.
    """
    n = int(rng.integers(min_dim, max_dim + 1))
    points = [str(i) for i in range(n)]
    masses = np.exp(rng.uniform(np.log(0.1), np.log(10.0), size=n))
    targets = rng.integers(0, n, size=n)
    moduli = np.exp(rng.uniform(np.log(0.1), np.log(10.0), size=n))
    phases = rng.uniform(0.0, 2 * np.pi, size=n)
    weights = moduli * np.exp(1j * phases)
    weights[rng.random(n) < zero_weight_prob] = 0
    return build_space(points, [float(m) for m in masses], [points[t] for t in targets],
                       [complex(w) for w in weights], name="random")


def random_corpus(seed: int, count: int, max_dim: int = 12) -> list[PointSpace]:
    rng = np.random.default_rng(seed)
    return [random_space(rng, max_dim=max_dim) for _ in range(count)]


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    b = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (b + b.conj().T) / 2
