import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pacert.spine import DomainError
from pacert.twist import ALPHA, BETA, GAMMA, TwistWord
from pacert.volume import (
    V8_REFERENCE, block_volume, boundary_indexing, drilled_lower_bound, drilling_locus,
    fiber_equivalence, filled_lower_bound, filling_norm_monotone, gromov_norm,
    indexing_mismatch, ledger_json, lifted_lower_bound, lobachevsky,
    octahedron_constant, surgery_correspondence, tetrahedron_constant, word_from_slopes,
)


def clausen_oracle(theta, terms=200000):
    """Lobachevsky function via its Fourier series sum sin(2 j x) / j^2 / 2 (slow, loose)."""
    x = theta * math.pi
    return 0.5 * math.fsum(math.sin(2 * j * x) / (j * j) for j in range(1, terms))


def test_octahedron_constant():
    v8 = octahedron_constant()
    assert V8_REFERENCE.contains_interval(v8)
    assert v8.width <= Fraction(1, 10**12)
    assert abs(float(v8.lo) - 8 * clausen_oracle(0.25)) < 1e-4


def test_tetrahedron_constant():
    v3 = tetrahedron_constant()
    assert abs(float(v3.lo) - 1.0149416064096536) < 1e-12
    assert abs(float(v3.lo) - 3 * clausen_oracle(1 / 3)) < 1e-4


def test_precision_refines():
    a, b = octahedron_constant(40), octahedron_constant(80)
    assert a.contains_interval(b)
    assert b.width < a.width


def test_lobachevsky_domain():
    with pytest.raises(ValueError):
        lobachevsky(Fraction(1, 2))


@pytest.mark.parametrize("k", [1, 2, 7, 100])
def test_coefficients(k):
    assert block_volume(k).coeff == 4 * k
    assert drilled_lower_bound(k).coeff == 4 * k
    f = filled_lower_bound(k)
    assert f.coeff == 3 * k and f.conditional
    assert f.coeff + k == drilled_lower_bound(k).coeff
    for deg in (1, 2, 5):
        assert lifted_lower_bound(k, deg).coeff == 3 * k * deg


def test_bad_k():
    with pytest.raises(DomainError):
        block_volume(0)
    with pytest.raises(DomainError):
        lifted_lower_bound(1, 0)


def test_gromov_norm_monotone():
    filled = gromov_norm(filled_lower_bound(3))
    unfilled = gromov_norm(drilled_lower_bound(3))
    assert filling_norm_monotone(filled, unfilled)
    assert not filling_norm_monotone(unfilled, filled)


def test_locus_counts():
    for k in (1, 2, 5):
        L = drilling_locus(k)
        assert L.count(ALPHA) == k + 1 and L.count(GAMMA) == k - 1 and L.count(BETA) == 1
        assert L.count() == 2 * k + 1


def test_boundary_indexing_gap():
    info = indexing_mismatch(3)
    assert info["labels"] == 8 and info["components"] == 7
    assert info["unassigned"] == [7]
    labels = boundary_indexing(2)
    assert [b.curve for b in labels] == [BETA, ALPHA, GAMMA, ALPHA, None, ALPHA]


def test_slope_order():
    sa = surgery_correspondence(TwistWord.parse("a^3 b^5"))
    assert sa.slopes == (Fraction(1, 5), Fraction(1, 3))
    sa = surgery_correspondence(TwistWord.from_exponents([2, 4], [3, 5]))
    # (1/v_k, 1/u_k, ..., 1/v_1, 1/u_1)
    assert sa.slopes == tuple(Fraction(1, e) for e in (5, 4, 3, 2))


def test_round_trip_random_words():
    rng = random.Random(11)
    for _ in range(1000):
        k = rng.randint(1, 6)
        w = TwistWord.from_exponents([rng.randint(1, 50) for _ in range(k)],
                                     [rng.randint(1, 50) for _ in range(k)])
        assert word_from_slopes(surgery_correspondence(w)) == w


@settings(max_examples=50)
@given(st.integers(4, 500), st.integers(4, 500))
def test_fiber_equivalence(n, m):
    a = fiber_equivalence(n, m)
    assert a == fiber_equivalence(n + 3, m) == fiber_equivalence(n, m + 3)
    assert all(4 <= x <= 6 for x in a)


def test_ledger_json_deterministic():
    assert ledger_json(3) == ledger_json(3)
