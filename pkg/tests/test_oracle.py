import math

import numpy as np
import pytest

from wco import calculus
from wco.calculus import aluthge_weight, partial_isometry_weight
from wco.oracle import (NotHermitian, aluthge_matrix, hyponormality_test, matrix_of,
                        matrix_power_psd, polar, psd_order_test, sym_eig)
from wco.properties import Status
from wco.sampling import random_corpus, random_hermitian
from wco.space import build_space

from conftest import complex_vector, identity_space

R2 = 1 / math.sqrt(2)


def test_matrix_of_examples(s2, c3):
    np.testing.assert_array_equal(matrix_of(s2), [[1, 0], [1, 0]])
    a = matrix_of(c3)
    assert a[0, 1] == 1 and a[1, 2] == 2 and a[2, 0] == 4
    assert np.count_nonzero(a) == 3
    masses = build_space([0, 1], [1, 4], [0, 0], [1, 1])
    assert matrix_of(masses)[1, 0] == 2


def test_sym_eig_examples():
    eig = sym_eig(np.diag([2.0, 0.0]))
    np.testing.assert_array_equal(eig.eigenvalues, [0, 2])
    np.testing.assert_allclose(np.abs(eig.vectors), [[0, 1], [1, 0]])
    eig = sym_eig(np.ones((2, 2)))
    np.testing.assert_allclose(eig.eigenvalues, [0, 2], atol=1e-15)


def test_sym_eig_random_invariants():
    rng = np.random.default_rng(8)
    for dim in (1, 2, 5, 8, 17, 32):
        s = random_hermitian(rng, dim)
        eig = sym_eig(s)
        norm = np.linalg.norm(s)
        assert np.linalg.norm(eig.reconstruct() - s) <= 1e-10 * norm
        v = eig.vectors
        np.testing.assert_allclose(v.conj().T @ v, np.eye(dim), atol=1e-10)
        for lam, vec in zip(eig.eigenvalues, v.T):
            assert np.linalg.norm(s @ vec - lam * vec) <= 1e-10 * norm
        assert np.all(np.diff(eig.eigenvalues) >= 0)
        np.testing.assert_allclose(eig.eigenvalues, np.linalg.eigvalsh(s), atol=1e-10 * norm)


def test_sym_eig_is_deterministic():
    s = random_hermitian(np.random.default_rng(1), 9)
    a, b = sym_eig(s), sym_eig(s)
    np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
    np.testing.assert_array_equal(a.vectors, b.vectors)


@pytest.mark.parametrize("bad", [np.array([[1, 2], [0, 1]]), np.ones((2, 3)), np.array([[np.nan]])])
def test_sym_eig_rejects_non_hermitian(bad):
    with pytest.raises(NotHermitian):
        sym_eig(bad)


def test_matrix_power_psd_examples(s2):
    np.testing.assert_allclose(matrix_power_psd(np.diag([4.0, 0.0]), 0.5), np.diag([2, 0]), atol=1e-15)
    a = matrix_of(s2)
    np.testing.assert_allclose(matrix_power_psd(a.conj().T @ a, 0.5), np.diag([math.sqrt(2), 0]), atol=1e-15)
    p = np.full((2, 2), 0.5)
    for t in (0.1, 0.5, 1, 3):
        np.testing.assert_allclose(matrix_power_psd(p, t), p, atol=1e-14)


def test_matrix_power_psd_rejects_negative():
    with pytest.raises(ValueError, match="positive semidefinite"):
        matrix_power_psd(np.diag([1.0, -0.1]), 0.5)
    np.testing.assert_allclose(matrix_power_psd(np.diag([1.0, -1e-14]), 0.5), np.diag([1, 0]))


def test_polar_examples(s2):
    u, m = polar(matrix_of(s2))
    np.testing.assert_allclose(m, np.diag([math.sqrt(2), 0]), atol=1e-15)
    np.testing.assert_allclose(u, [[R2, 0], [R2, 0]], atol=1e-15)
    rot = np.array([[0, 1j], [1, 0]])
    u, m = polar(rot)
    np.testing.assert_allclose(m, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(u, rot, atol=1e-14)


def test_polar_matches_partial_isometry_weight():
    rng = np.random.default_rng(0)
    for space in random_corpus(21, 100):
        a = matrix_of(space)
        u, m = polar(a)
        assert np.linalg.norm(a - u @ m) <= 1e-9 * max(np.linalg.norm(a), 1e-300)
        assert np.abs(u - matrix_of(space.reweighted(partial_isometry_weight(space)))).max() <= 1e-9
        h = np.array([float(v) for v in calculus.radon_nikodym(space).values()])
        for _ in range(3):
            f = complex_vector(rng, space.dim)
            np.testing.assert_allclose(m @ f, np.sqrt(h) * f, atol=1e-10 * (1 + np.abs(f).max() * np.sqrt(h.max())))


def test_aluthge_matrix_examples(s2):
    np.testing.assert_allclose(aluthge_matrix(matrix_of(s2), 0.5), [[1, 0], [0, 0]], atol=1e-15)
    d = np.diag(np.exp(1j * np.array([0.3, 1.7, -2.0])))
    for alpha in (0.25, 0.5, 1):
        np.testing.assert_allclose(aluthge_matrix(d, alpha), d, atol=1e-14)


def test_aluthge_matrix_matches_transformed_weight():
    for space in random_corpus(22, 100):
        a = matrix_of(space)
        for alpha in (0.25, 0.5, 0.75, 1.0):
            ref = aluthge_matrix(a, alpha)
            got = matrix_of(space.reweighted(aluthge_weight(space, alpha)))
            assert np.linalg.norm(ref - got) <= 1e-8 * (1 + np.linalg.norm(a))


def test_psd_order_examples(s2):
    s = random_hermitian(np.random.default_rng(2), 4)
    assert psd_order_test(s, s, 1e-12).status is Status.HOLDS
    a = matrix_of(s2)
    verdict = psd_order_test(a @ a.conj().T, a.conj().T @ a, 1e-9)
    assert verdict.status is Status.FAILS
    assert verdict.values["min_eigenvalue"] == pytest.approx(-math.sqrt(2), abs=1e-14)
    assert len(verdict.witness["eigenvector"]) == 2
    with pytest.raises(NotHermitian):
        psd_order_test(np.array([[0, 1], [0, 0]]), np.eye(2), 1e-9)


def test_hyponormality_of_normal_matrices():
    a = matrix_of(identity_space([2, 3j, 0.5, 0]))
    for p in (0.25, 0.5, 1, 2):
        assert hyponormality_test(a, p).status is Status.HOLDS


def test_uu_star_is_projection_action():
    for space in random_corpus(23, 30):
        u, _ = polar(matrix_of(space))
        p = calculus.action_matrix(space, calculus.projection)
        np.testing.assert_allclose(u @ u.conj().T, p, atol=1e-9)
