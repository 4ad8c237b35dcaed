import pytest
from hypothesis import given, strategies as st

from pacert.spine import DomainError, f3_matrix
from pacert.twist import (
    LocalBlock, TwistWord, WordShapeError, local_block, relocate_support,
    splice, syllable_ceiling,
)
from pacert.spine import directed_graph
from pacert.spectral import matrix_power


def test_identity_word():
    blk = local_block(TwistWord(()))
    assert blk.is_identity() and blk.E == 1


def test_single_alpha_syllable():
    blk = local_block(TwistWord.parse("a^1", free=True))
    assert blk.H == ((2, 1, 0), (1, 2, 0), (0, 0, 1))


def test_alpha2_beta3_matches_direct_product():
    # (I + 2 a a^T)(I + 3 b b^T) multiplied out by hand
    blk = local_block(TwistWord.parse("a^2 b^3"))
    assert blk.H == ((18, 17, 15), (17, 18, 15), (3, 3, 4))
    assert blk.E == 18
    assert blk.is_primitive()


@pytest.mark.parametrize("text", ["b^2 a^1", "a^1 g^1", "a^1 b^0", "a^1"])
def test_bad_shapes(text):
    with pytest.raises(WordShapeError):
        TwistWord.parse(text)


def test_string_form():
    w = TwistWord.parse("a^2 g^3 a^1 b^4")
    assert str(w) == "a^2 g^3 a^1 b^4"
    assert w.k == 2 and w.u(2) == 1 and w.v(2) == 4


words = st.integers(1, 3).flatmap(
    lambda k: st.tuples(st.lists(st.integers(1, 6), min_size=k, max_size=k),
                        st.lists(st.integers(1, 6), min_size=k, max_size=k)))


@given(words, st.integers(0, 5), st.integers(1, 4))
def test_entries_monotone_in_exponents(uv, pos, bump):
    us, vs = uv
    w = TwistWord.from_exponents(us, vs)
    exps = us + vs
    pos %= len(exps)
    exps[pos] += bump
    k = len(us)
    w2 = TwistWord.from_exponents(exps[:k], exps[k:])
    H1, H2 = local_block(w).H, local_block(w2).H
    assert all(H2[i][j] >= H1[i][j] for i in range(3) for j in range(3))


@given(words)
def test_entry_ceiling_and_primitivity(uv):
    w = TwistWord.from_exponents(*uv)
    blk = local_block(w)
    assert blk.E <= syllable_ceiling(w)
    assert blk.is_primitive()


def test_identity_splice_is_base():
    base = f3_matrix(20, 20)
    cm = splice(base, 20, LocalBlock.identity())
    assert cm.T_k.entries == base.entries


def test_splice_changes_exactly_three_rows():
    base = f3_matrix(20, 20)
    H = LocalBlock.from_rows([[5, 1, 0], [2, 5, 3], [0, 4, 5]])
    cm = splice(base, 20, H)
    changed = [i for i in range(base.dim) if base.row(i) != cm.T_k.row(i)]
    assert changed == cm.spliced_rows()
    assert [cm.T_k.labels[i] for i in changed] == ["e6", "e7", "e8"]
    assert max(c for i in changed for _, c in cm.T_k.row(i)) == 5


def test_spliced_arcs_form_bipartite_block():
    cm = splice(f3_matrix(20, 20), 20, local_block(TwistWord.standard(2)))
    g = directed_graph(cm.T_k)
    left = {"e6", "e7", "e8"}
    right = {"e9", "e10", "e11"}
    for u in left:
        assert set(g.successors(u)) == right


def test_splice_preconditions():
    with pytest.raises(DomainError):
        splice(f3_matrix(10, 10), 10, LocalBlock.identity())  # j = 4
    with pytest.raises(DomainError):
        splice(f3_matrix(12, 13), 12, LocalBlock.identity())


def test_relocate_support():
    assert relocate_support(2, 3, 12) == 5
    assert relocate_support(4, 1, 20) == 5
    with pytest.raises(DomainError):
        relocate_support(2, 8, 12)
    with pytest.raises(DomainError):
        relocate_support(1, 1, 12)


def _traces(T):
    out = []
    for l in range(1, T.dim + 1):
        P = matrix_power(T, l)
        out.append(sum(P[i].get(i, 0) for i in range(T.dim)))
    return out


@pytest.mark.parametrize("n", [12, 20])
def test_relocated_splices_are_isospectral(n):
    # equal traces of T^l for l <= dim give equal characteristic polynomials
    H = local_block(TwistWord.standard(2))
    base = f3_matrix(n, n)
    spectra = {tuple(_traces(splice(base, n, H, j=j).T_k)) for j in range(5, n - 4)}
    assert len(spectra) == 1
