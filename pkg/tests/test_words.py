import random

import pytest
from hypothesis import given, settings, strategies as st

from pacert.spine import DomainError
from pacert.words import (
    Generator, MCGWord, commute_if_disjoint, conjugate_by_p, cycle_string, cycles,
    disjoint, fixed_points, legal_conjugations, puncture_action, verify_conjugation,
)


def test_parse_and_print():
    w = MCGWord.parse("q p^-1 h@5 f^3")
    assert str(w) == "q p^-1 h@5 f^3"
    assert len(w) == 4


def test_supports():
    h = Generator("h", base=5)
    assert h.support(12, 12) == {"V5", "V6", "V7"}
    assert "V1" in Generator("q").support(12, 12)
    assert disjoint(Generator("q"), h, 12, 12)
    assert not disjoint(Generator("q"), Generator("h", base=1), 12, 12)
    with pytest.raises(DomainError):
        Generator("h", base=11).support(12, 12)


def test_conjugation_shifts_support():
    h = Generator("h", base=3)
    assert conjugate_by_p(h, 4).support(20, 20) == {"V7", "V8", "V9"}


def test_f_cubed_action():
    perm = puncture_action(MCGWord.parse("f^3"), 12, 12)
    long = [c for c in cycles(perm) if len(c) > 1]
    assert len(long) == 1 and len(long[0]) == 23
    assert fixed_points(perm) == ["x", "y", "z"]


def test_cycle_string_identity():
    assert cycle_string(puncture_action(MCGWord(()), 8, 8)) == "()"


def test_replay_example():
    r = verify_conjugation(20, 20, 5, 3)
    assert r.passed
    assert r.steps == 6
    assert str(r.final) == "(p^3 h@5 p^-3) f^3"


@pytest.mark.parametrize("args", [(12, 12, 1, 1), (12, 12, 8, 1), (12, 12, 2, 8), (6, 12, 2, 1)])
def test_replay_out_of_range(args):
    with pytest.raises(DomainError):
        verify_conjugation(*args)


def test_all_legal_conjugations_small():
    pairs = legal_conjugations(12)
    assert (2, 7) in pairs and (2, 8) not in pairs and (8, 1) not in pairs
    assert all(verify_conjugation(12, 12, i, k).passed for i, k in pairs)


letter = st.one_of(
    st.sampled_from(["p", "q", "f", "p^-1", "q^2", "f^3"]),
    st.integers(1, 10).map(lambda i: f"h@{i}"),
)


@settings(max_examples=80, deadline=None)
@given(st.lists(letter, max_size=10), st.integers(0, 2**32))
def test_commutation_confluent_and_action_preserving(letters, seed):
    w = MCGWord.parse(" ".join(letters)) if letters else MCGWord(())
    n = m = 12
    a = commute_if_disjoint(w, n, m)
    b = commute_if_disjoint(w, n, m, random.Random(seed))
    assert a == b
    assert puncture_action(a, n, m) == puncture_action(w, n, m)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(0, 8))
def test_support_shift_law(i, t):
    n = 20
    h = Generator("h", base=i)
    shifted = conjugate_by_p(h, t)
    assert shifted.support(n, n) == {f"V{j + t}" for j in range(i, i + 3)}
