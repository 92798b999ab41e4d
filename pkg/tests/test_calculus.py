import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wco import calculus
from wco.calculus import (NotDenselyDefined, aluthge_rn, aluthge_weight, apply_adjoint,
                          apply_adjoint_modulus_power, apply_modulus_power, apply_operator,
                          calculus_of, cond_exp, cond_exp_pullback, partial_isometry_weight,
                          projection, radon_nikodym)
from wco.gallery import fan_family, grid_tree_family, swap_family
from wco.oracle import matrix_of
from wco.sampling import random_corpus
from wco.space import build_space

from conftest import complex_vector, exact_spaces, identity_space, nonnegative_fields

ALPHAS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1)


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(1, abs(a), abs(b))


# -- examples ------------------------------------------------------------------

def test_radon_nikodym_examples(s2, c3):
    assert dict(radon_nikodym(s2)) == {"0": 2, "1": 0}
    assert dict(radon_nikodym(c3)) == {0: 16, 1: 1, 2: 4}


def test_radon_nikodym_swap_and_grid():
    fam = swap_family(lambda n: Fraction(n, 3), window=10)
    h = radon_nikodym(fam)
    assert all(h[n] == Fraction(fam.phi_of(n), 3) ** 2 for n in fam.points)
    grid = grid_tree_family(window=4)
    h = radon_nikodym(grid)
    assert h[(1, 1)] == Fraction(3, 2)
    assert all(h[(n, 1)] == Fraction(2, (n + 1) ** 2) for n in range(2, 5))
    assert all(h[(n, m)] == 1 for n in range(1, 5) for m in range(2, 5))


def test_cond_exp_examples(s2, c3):
    f = {"0": Fraction(3), "1": Fraction(5)}
    assert dict(cond_exp(s2, f)) == {"0": 4, "1": 4}
    g = {0: Fraction(7), 1: Fraction(1, 2), 2: 3}
    assert dict(cond_exp(c3, g)) == g
    assert dict(cond_exp(c3, lambda x: 5)) == {0: 5, 1: 5, 2: 5}


def test_cond_exp_vanishes_on_null_fibers():
    space = build_space([0, 1], [1, 1], [0, 0], [0, 0], exact=True)
    assert dict(cond_exp(space, {0: 1, 1: 2})) == {0: 0, 1: 0}


def test_pullback_examples(s2, c3):
    assert dict(cond_exp_pullback(s2, radon_nikodym(s2))) == {"0": 1, "1": 0}
    f = {0: 10, 1: 20, 2: 30}
    assert dict(cond_exp_pullback(c3, f)) == {0: 30, 1: 10, 2: 20}


def test_pullback_grid_row_value():
    grid = grid_tree_family(window=5)
    calc = calculus_of(grid)
    for alpha in ALPHAS:
        for n in range(2, 5):
            a = Fraction(1, n + 2)
            expected = (1 + 2 ** float(alpha) * float(a) ** (2 * float(alpha))) / 2
            assert close(calc.pullback_h_power(alpha, (n, 1)), expected)


def test_aluthge_weight_examples(s2, c3):
    for alpha in ALPHAS:
        assert dict(aluthge_weight(s2, alpha)) == {"0": 1, "1": 0}
    assert dict(aluthge_weight(c3, 1)) == {0: 4, 1: 1, 2: 2}
    ident = identity_space([2, 3j, 0.5])
    assert dict(aluthge_weight(ident, 0.3)) == dict(ident.weight)


def test_aluthge_weight_rejects_infinite_h():
    with pytest.raises(NotDenselyDefined):
        aluthge_weight(fan_family(window=3), 0.5)


def test_aluthge_rn_examples(s2, c3):
    rn = aluthge_rn(s2, Fraction(1, 2))
    assert close(rn["0"], 1) and rn["1"] == 0
    assert dict(aluthge_rn(c3, 1)) == {0: 4, 1: 16, 2: 1}
    assert dict(radon_nikodym(c3.reweighted(aluthge_weight(c3, 1)))) == {0: 4, 1: 16, 2: 1}


def test_partial_isometry_weight_examples(s2, c3):
    tilde = partial_isometry_weight(s2)
    assert close(tilde["0"], 1 / math.sqrt(2)) and close(tilde["1"], 1 / math.sqrt(2))
    assert dict(partial_isometry_weight(c3)) == {0: 1, 1: 1, 2: 1}
    ident = identity_space([2, 3, 0])
    assert [abs(v) for v in partial_isometry_weight(ident).values()] == [1, 1, 0]


def test_adjoint_modulus_example(s2):
    out = apply_adjoint_modulus_power(s2, 1, [1, 0])
    np.testing.assert_allclose(out, [math.sqrt(2) / 2] * 2, atol=1e-12)


def test_projection_examples(s2, c3):
    np.testing.assert_allclose(calculus.action_matrix(s2, projection), np.full((2, 2), 0.5), atol=1e-15)
    np.testing.assert_allclose(calculus.action_matrix(c3, projection), np.eye(3), atol=1e-15)


def test_zero_vector_maps_to_zero(c3_float):
    zero = np.zeros(3)
    for action in (apply_operator, apply_adjoint, projection):
        np.testing.assert_array_equal(action(c3_float, zero), 0)


# -- identities on exact random spaces ------------------------------------------

@given(st.data())
@settings(max_examples=80, deadline=None)
def test_change_of_variables(data):
    space = data.draw(exact_spaces())
    f = data.draw(nonnegative_fields(space))
    h = radon_nikodym(space)
    left = sum(f[space.phi_of(y)] * abs(space.weight_of(y)) ** 2 * space.mass_of(y) for y in space.points)
    right = sum(f[x] * h[x] * space.mass_of(x) for x in space.points)
    assert left == right


@given(st.data())
@settings(max_examples=80, deadline=None)
def test_averaging_identities(data):
    space = data.draw(exact_spaces())
    f = data.draw(nonnegative_fields(space))
    g = data.draw(nonnegative_fields(space))
    ef = cond_exp(space, f)
    mu_w = {x: abs(space.weight_of(x)) ** 2 * space.mass_of(x) for x in space.points}
    gphi = {x: g[space.phi_of(x)] for x in space.points}
    assert sum(gphi[x] * f[x] * mu_w[x] for x in space.points) == \
        sum(gphi[x] * ef[x] * mu_w[x] for x in space.points)
    product = cond_exp(space, {x: gphi[x] * f[x] for x in space.points})
    for x in space.points:
        if space.weight_of(x) != 0:
            assert product[x] == gphi[x] * ef[x]


@given(st.data())
@settings(max_examples=80, deadline=None)
def test_pullback_composed_with_phi_is_cond_exp(data):
    space = data.draw(exact_spaces())
    f = data.draw(nonnegative_fields(space))
    pulled = cond_exp_pullback(space, f)
    ef = cond_exp(space, f)
    for x in space.points:
        if space.weight_of(x) != 0:
            assert pulled[space.phi_of(x)] == ef[x]


@given(exact_spaces(), st.sampled_from(ALPHAS))
@settings(max_examples=80, deadline=None)
def test_transformed_rn_matches_reweighted_space(space, alpha):
    direct = radon_nikodym(space.reweighted(aluthge_weight(space, alpha)))
    formula = aluthge_rn(space, alpha)
    for x in space.points:
        assert close(direct[x], formula[x])


@given(st.data(), st.sampled_from(ALPHAS))
@settings(max_examples=60, deadline=None)
def test_transformed_cond_exp_relation(data, alpha):
    space = data.draw(exact_spaces())
    f = data.draw(nonnegative_fields(space))
    transformed = space.reweighted(aluthge_weight(space, alpha))
    h = radon_nikodym(space)
    h_alpha = {x: float(h[x]) ** float(alpha) for x in space.points}
    left = cond_exp(transformed, f)
    mid = cond_exp(space, h_alpha)
    right = cond_exp(space, {x: f[x] * h_alpha[x] for x in space.points})
    for x in space.points:
        if transformed.weight_of(x) != 0:
            assert close(left[x] * mid[x], right[x])


@given(exact_spaces())
@settings(max_examples=80, deadline=None)
def test_partial_isometry_weight_gives_support_indicator(space):
    h = radon_nikodym(space)
    tilde_h = radon_nikodym(space.reweighted(partial_isometry_weight(space)))
    for x in space.points:
        assert close(tilde_h[x], 1 if h[x] > 0 else 0)


# -- actions against the matrix ---------------------------------------------------

def _coords(space):
    return np.sqrt([float(space.mass_of(x)) for x in space.points])


def test_actions_agree_with_matrix():
    rng = np.random.default_rng(11)
    for space in random_corpus(5, 25):
        a = matrix_of(space)
        s = _coords(space)
        for _ in range(20):
            c = complex_vector(rng, space.dim)
            np.testing.assert_allclose(s * apply_operator(space, c / s), a @ c, rtol=1e-12, atol=1e-12)
            ref = a.conj().T @ c
            got = s * apply_adjoint(space, c / s)
            assert np.linalg.norm(ref - got) <= 1e-12 * (1 + np.linalg.norm(ref))


def test_modulus_squared_is_adjoint_of_operator():
    rng = np.random.default_rng(3)
    for space in random_corpus(8, 20):
        f = complex_vector(rng, space.dim)
        ref = apply_adjoint(space, apply_operator(space, f))
        got = apply_modulus_power(space, 2, f)
        assert np.linalg.norm(ref - got) <= 1e-12 * (1 + np.linalg.norm(ref))


def test_projection_fixes_range_of_operator():
    rng = np.random.default_rng(4)
    for space in random_corpus(9, 20):
        cf = apply_operator(space, complex_vector(rng, space.dim))
        np.testing.assert_allclose(projection(space, cf), cf, atol=1e-12 * (1 + np.abs(cf).max()))


def test_action_rejects_lazy_family():
    with pytest.raises(Exception, match="finite"):
        apply_operator(swap_family(), [1, 2])
