import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pacert.bounds import (
    FAIL, INCONCLUSIVE, PASS, empirical_threshold, entropy_budget, path_count_bound,
    lift_bound, lift_puncture_count, psi_bound, psi_membership, theorem_bound,
    verify_main_inequality,
)
from pacert.intervals import Interval, log_enclosure
from pacert.spine import DomainError, TransitionMatrix, f3_matrix
from pacert.twist import TwistWord, local_block, splice


def test_path_count_bound_value():
    b = path_count_bound(13, 2)
    # log 52 = 3.9512437185814275...
    assert b.lo <= Fraction(3.9512437185814275) <= b.hi + Fraction(1, 10**15)
    assert b.width < Fraction(1, 10**30)


@pytest.mark.parametrize("n,N", [(12, 2), (13, 1)])
def test_path_count_bound_domain(n, N):
    with pytest.raises(DomainError):
        path_count_bound(n, N)


@pytest.mark.parametrize("n,value", [(1, 18.714973875118524), (13, 6.426394412480751)])
def test_theorem_bound_values(n, value):
    b = theorem_bound(n)
    assert abs(float(b.lo) - value) < 1e-14
    assert b.width < Fraction(1, 10**30)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 10**6))
def test_theorem_bound_encloses_float(n):
    x = 2 * n + 2
    b = theorem_bound(n)
    v = 54 * math.log(x) / x
    assert float(b.lo) - 1e-12 <= v <= float(b.hi) + 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 10**5))
def test_theorem_bound_decreasing(n):
    assert theorem_bound(n + 1).certainly_lt(theorem_bound(n))


def test_entropy_chain_holds_for_large_n():
    b = entropy_budget(5000, 2)
    assert b.holds
    assert [s[2] for s in b.steps] == [True, True]


def test_entropy_chain_links_fail_for_small_n():
    # log(2nN) < 2 log(2n+2) needs N < 2n+2 roughly; here N is huge
    b = entropy_budget(13, 10**9)
    assert not b.holds


def test_main_inequality_on_base_matrix():
    r = verify_main_inequality(f3_matrix(30, 30), 30)
    assert r.verdict == PASS and r.margin > 0


def test_main_inequality_spliced():
    cm = splice(f3_matrix(60, 60), 60, local_block(TwistWord.standard(2)))
    r = verify_main_inequality(cm, 60)
    assert r.passed
    assert r.log_lambda_hi <= r.bound.lo


def test_main_inequality_fail_verdict():
    # log(10^9) is far above 54 log 4 / 4
    T = TransitionMatrix.from_dense([[10**9]])
    assert verify_main_inequality(T, 1).verdict == FAIL


def test_main_inequality_reducible_is_inconclusive():
    T = TransitionMatrix.from_dense([[1, 1], [0, 1]])
    assert verify_main_inequality(T, 1).verdict == INCONCLUSIVE


def test_empirical_threshold():
    assert empirical_threshold([(30, PASS), (33, FAIL), (36, PASS), (39, PASS)]) == 36
    assert empirical_threshold([(30, PASS), (33, PASS)]) == 30
    assert empirical_threshold([(30, PASS), (33, FAIL)]) is None
    assert empirical_threshold([]) is None


@pytest.mark.parametrize("g", [2, 3, 4])
@pytest.mark.parametrize("n", [100, 200])
def test_lift_chain(g, n):
    lp = lift_bound(g, n, n)
    assert lp.s == (2 * g + 1) * (2 * n + 1) + 1
    assert lp.L == 162 * g
    assert lp.first_holds and lp.second_holds


def test_lift_puncture_count():
    assert lift_puncture_count(2, 100, 100) == 1006
    with pytest.raises(DomainError):
        lift_bound(1, 100, 100)


def test_psi_membership():
    assert psi_membership(2, 0, 5, 0)
    assert not psi_membership(2, 1, 5, 1)
    bound = psi_bound(324, 1006)
    assert psi_membership(2, 324, 1006, bound)
    assert psi_membership(2, 324, 1006, Fraction(1, 100))
    with pytest.raises(DomainError):
        psi_membership(2, 1, 2, 0)


def test_log_enclosure_exact_endpoints():
    iv = log_enclosure(2)
    assert isinstance(iv, Interval)
    assert iv.lo < Fraction(math.log(2)) + Fraction(1, 10**15)
    assert iv.lo <= iv.hi
