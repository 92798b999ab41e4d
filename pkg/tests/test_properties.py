from fractions import Fraction

import numpy as np
import pytest

from wco import properties as pr
from wco.calculus import NotDenselyDefined, aluthge_weight
from wco.gallery import (bilateral_shift_family, buda_family, fan_family, grid_tree_family,
                         linear_gaussian_family, swap_family)
from wco.oracle import hyponormality_test, matrix_of
from wco.properties import PreconditionError, Status, Verdict
from wco.sampling import random_corpus
from wco.space import build_space

from conftest import identity_space

HOLDS, FAILS, INCONCLUSIVE = Status.HOLDS, Status.FAILS, Status.INCONCLUSIVE
POWERS = (Fraction(1, 4), Fraction(1, 2), 1, 2)


@pytest.fixture(scope="module")
def corpus():
    return random_corpus(2024, 200)


def test_verdict_requires_witness_on_fail():
    with pytest.raises(ValueError):
        Verdict(FAILS)
    doc = Verdict(HOLDS, constant=Fraction(1, 2)).to_json()
    assert doc["status"] == "holds" and doc["constant"] == 0.5


# -- dense definiteness and boundedness -------------------------------------------

def test_densely_defined(c3):
    assert pr.is_densely_defined(c3).status is HOLDS
    assert pr.is_densely_defined(buda_family()).status is HOLDS
    fan = pr.is_densely_defined(fan_family())
    assert fan.status is FAILS and fan.witness["point"] == 0


def test_bounded(c3, s2):
    v = pr.is_bounded(c3)
    assert v.status is HOLDS and v.constant == 16
    assert pr.is_bounded(s2).constant == 2
    assert pr.is_bounded(swap_family("linear")).status is FAILS
    assert pr.is_bounded(swap_family("constant", value=3)).status is HOLDS


def test_bounded_linear_family():
    assert pr.is_bounded(linear_gaussian_family(theta=Fraction(1, 2))).status is FAILS
    assert pr.is_bounded(linear_gaussian_family(theta=2)).status is HOLDS


def test_checks_require_dense_definiteness():
    with pytest.raises(NotDenselyDefined):
        pr.is_p_hyponormal(fan_family(), 1)


# -- transform domain -----------------------------------------------------------

def test_perp_examples(c3):
    assert pr.aluthge_domain_perp(c3, 1) == ()
    assert pr.aluthge_domain_perp(buda_family(), 1) == (0,)
    assert pr.aluthge_domain_perp(buda_family(), Fraction(1, 2)) == ()


def test_closed_criterion(corpus):
    for space in corpus[:50]:
        assert pr.aluthge_closed_criterion(space, Fraction(1, 2)).status is HOLDS
    v = pr.aluthge_closed_criterion(identity_space([2, 1, 0.5]), Fraction(1, 2))
    assert v.status is HOLDS
    assert v.constant == pytest.approx(max(h ** 0.5 / (1 + h) for h in (4, 1, 0.25)))
    inv = linear_gaussian_family(theta=2, involutive=True)
    assert pr.aluthge_closed_criterion(inv, Fraction(1, 2)).status is FAILS


# -- serwis conditions ------------------------------------------------------------

def test_serwis_swap_example():
    verdicts = pr.serwis_conditions(swap_family("serwis"), Fraction(1, 2))
    assert verdicts["iii"].status is FAILS
    assert verdicts["iv"].status is HOLDS
    assert pr.serwis_chain_violations(verdicts) == []


def test_serwis_grid_example():
    verdicts = pr.serwis_conditions(grid_tree_family(), Fraction(1, 2))
    assert verdicts["i"].status is FAILS
    assert verdicts["ii"].status is HOLDS and verdicts["ii"].constant == Fraction(1, 2)


def test_serwis_zero_weight():
    space = build_space([0, 1, 2], [1, 1, 1], [1, 2, 0], [0, 0, 0], exact=True)
    verdicts = pr.serwis_conditions(space, Fraction(1, 2))
    assert verdicts["i"].status is FAILS
    assert verdicts["ii"].status is HOLDS


def test_serwis_chain_on_corpus(corpus):
    for space in corpus:
        for alpha in (Fraction(1, 4), 1):
            verdicts = pr.serwis_conditions(space, alpha)
            assert pr.serwis_chain_violations(verdicts) == []
            assert verdicts["iv"].status is HOLDS


# -- hyponormality and its relatives ----------------------------------------------

def test_p_hyponormal_examples(c3, s2):
    v = pr.is_p_hyponormal(c3, 1)
    assert v.status is FAILS and v.witness["point"] == 1
    assert pr.is_p_hyponormal(s2, 1).witness["point"] == "1"
    for p in POWERS:
        assert pr.is_p_hyponormal(identity_space([3, 1j, 0]), p).status is HOLDS
        assert pr.is_p_hyponormal(bilateral_shift_family(), p).status is HOLDS


def test_p_hyponormal_matches_oracle(corpus):
    for space in corpus:
        a = matrix_of(space)
        for p in POWERS:
            assert pr.is_p_hyponormal(space, p).status == hyponormality_test(a, float(p)).status


def test_class_q_examples(s2):
    assert pr.in_class_Q(s2, 1).status is FAILS
    assert pr.in_class_Q(identity_space([2, 5]), Fraction(1, 2)).status is HOLDS
    for q in (Fraction(1, 4), Fraction(1, 2), 1, 2, 4):
        assert pr.in_class_Q(bilateral_shift_family(), q).status is HOLDS


def test_class_q_consequence_on_corpus(corpus):
    for space in corpus:
        for p in POWERS:
            v = pr.class_q_consequence(space, p)
            assert v.status is not FAILS, v.witness


def test_quasinormal_examples(c3):
    assert pr.is_quasinormal(identity_space([1, 2, 3])).status is HOLDS
    c = build_space([0, 1, 2], [1, 1, 1], [1, 2, 0], [3, 3, 3], exact=True)
    assert pr.is_quasinormal(c).status is HOLDS
    assert pr.is_quasinormal(c3).status is FAILS
    assert pr.is_quasinormal(bilateral_shift_family()).status is FAILS


def test_fixed_point_examples(c3):
    space = identity_space([2, 3j])
    assert pr.aluthge_fixed_point(space, Fraction(1, 2)).status is HOLDS
    assert dict(aluthge_weight(space, Fraction(1, 2))) == dict(space.weight)
    v = pr.aluthge_fixed_point(c3, 1)
    assert v.status is FAILS


def test_fixed_point_matches_quasinormal(corpus):
    for space in corpus:
        quasi = pr.is_quasinormal(space).status
        for alpha in (Fraction(1, 4), 1):
            assert pr.aluthge_fixed_point(space, alpha).status == quasi


def test_finite_p_hyponormal_implies_quasinormal(corpus):
    for space in corpus:
        if pr.is_p_hyponormal(space, 1).status is HOLDS:
            assert pr.is_quasinormal(space).status is HOLDS


# -- improvement theorems -----------------------------------------------------------

def test_improvement_bilateral():
    v = pr.improvement_report(bilateral_shift_family(), Fraction(1, 4), Fraction(1, 2))
    assert v.status is HOLDS
    assert not v.details.get("theorem_violation")


def test_improvement_identity():
    assert pr.improvement_report(identity_space([2, 1]), Fraction(1, 2), Fraction(1, 2)).status is HOLDS


def test_improvement_preconditions(c3):
    with pytest.raises(PreconditionError, match="hyponormal"):
        pr.improvement_report(c3, Fraction(1, 2), Fraction(1, 4))
    with pytest.raises(PreconditionError):
        pr.improvement_report(bilateral_shift_family(), Fraction(1, 2), Fraction(3, 4))


def test_improvement_on_hyponormal_corpus_members(corpus):
    seen = 0
    for space in corpus:
        for p in (Fraction(1, 4), Fraction(1, 2)):
            if pr.is_p_hyponormal(space, p).status is HOLDS:
                seen += 1
                assert pr.improvement_report(space, p, 1 - p).status is HOLDS
    assert seen > 0


def test_ups_examples():
    assert pr.ups_inequality(bilateral_shift_family(), Fraction(1, 2), Fraction(1, 2)).status is HOLDS
    v = pr.ups_inequality(identity_space([2, 3]), Fraction(1, 2), Fraction(1, 2))
    assert v.status is HOLDS
    c = build_space([0, 1, 2], [1, 1, 1], [1, 2, 0], [3, 3, 3], exact=True)
    assert pr.ups_inequality(c, Fraction(1, 4), Fraction(1, 2)).status is HOLDS


def test_pq_monotonicity(c3, corpus):
    assert pr.pq_monotonicity(bilateral_shift_family(), 2, Fraction(1, 2)).status is HOLDS
    assert pr.pq_monotonicity(c3, 1, Fraction(1, 2)).status is HOLDS
    for space in corpus[:100]:
        for p, q in ((1, Fraction(1, 2)), (2, 1)):
            assert pr.pq_monotonicity(space, p, q).status is HOLDS


# -- linear family ------------------------------------------------------------------

def test_stages_examples():
    for k in range(1, 10):
        assert pr.stages_feasible(Fraction(1, 2), Fraction(k, 10)) == (True, True)
    assert pr.stages_feasible(Fraction(3, 5), Fraction(1, 2))[0] is False


def test_stages_interval_shape():
    for k in range(1, 10):
        theta = Fraction(k, 10)
        grid = [Fraction(j, 100) for j in range(1, 101)]
        ok = [a for a in grid if all(pr.stages_feasible(a, theta))]
        assert ok[-1] == Fraction(1, 2)
        assert ok == grid[grid.index(ok[0]): grid.index(ok[-1]) + 1]


def test_rn_linear_gaussian():
    assert pr.rn_linear_gaussian(np.eye(2), "exp", (0.3, -1.2)) == pytest.approx(1)
    theta = 0.5
    phi = np.array([[0, theta], [1, 0]])
    x = (0.7, -0.4)
    expected = np.exp(x[0] ** 2 * (1 / theta ** 2 - 1)) / theta
    assert pr.rn_linear_gaussian(phi, "exp", x) == pytest.approx(expected, rel=1e-12)
    with pytest.raises(ValueError):
        pr.rn_linear_gaussian(np.zeros((2, 2)), "exp", x)


def test_linear_transform_matches_stages():
    for theta in (Fraction(1, 2), Fraction(3, 10)):
        fam = linear_gaussian_family(theta=theta)
        for alpha in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 5)):
            v = fam.transform_hyponormal(alpha)
            assert (v.status is HOLDS) == all(pr.stages_feasible(alpha, theta))
