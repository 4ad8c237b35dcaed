"""Twist words supported in the three-puncture subsurface and their splice into the f^3 matrix.

The local block ``H`` records how the twist acts on the three edges passing
through the subsurface.  The default model multiplies positive-twist
matrices ``I + t * c c^T`` with fixed intersection vectors; any other
nonnegative 3x3 block can be supplied directly.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Sequence

from .spine import DomainError, TransitionMatrix, e

ALPHA, GAMMA, BETA = "alpha", "gamma", "beta"

INTERSECTION = {
    ALPHA: (1, 1, 0),
    GAMMA: (0, 1, 1),
    BETA: (1, 1, 1),
}

_SHORT = {"a": ALPHA, "g": GAMMA, "b": BETA}
_LONG = {v: k for k, v in _SHORT.items()}


class WordShapeError(ValueError):
    pass


@dataclass(frozen=True)
class TwistWord:
    """``T_a^{u_1} T_g^{v_1} ... T_a^{u_k} T_b^{v_k}`` as a list of syllables.

    The empty word (k = 0) stands for the identity.  Use ``free=True`` to
    skip the shape check, e.g. for a single syllable.
    """

    syllables: tuple[tuple[str, int], ...]
    free: bool = False

    def __post_init__(self):
        for gen, exp in self.syllables:
            if gen not in INTERSECTION:
                raise WordShapeError(f"unknown generator {gen!r}")
            if not isinstance(exp, int) or exp < 1:
                raise WordShapeError(f"exponent must be a positive integer, got {exp!r}")
        if not self.free:
            check_shape(self.syllables)

    @property
    def k(self) -> int:
        return len(self.syllables) // 2

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(exp for _, exp in self.syllables)

    def u(self, i: int) -> int:
        """Exponent of the i-th alpha syllable (1-based)."""
        return self.syllables[2 * (i - 1)][1]

    def v(self, i: int) -> int:
        """Exponent of the i-th gamma syllable, or of beta for ``i = k``."""
        return self.syllables[2 * (i - 1) + 1][1]

    @classmethod
    def standard(cls, k: int, exponent: int = 10) -> "TwistWord":
        return cls.from_exponents([exponent] * k, [exponent] * k)

    @classmethod
    def from_exponents(cls, us: Sequence[int], vs: Sequence[int]) -> "TwistWord":
        if len(us) != len(vs):
            raise WordShapeError("need as many u's as v's")
        k = len(us)
        syl = []
        for i in range(k):
            syl.append((ALPHA, us[i]))
            syl.append((GAMMA if i < k - 1 else BETA, vs[i]))
        return cls(tuple(syl))

    @classmethod
    def parse(cls, text: str, free: bool = False) -> "TwistWord":
        syl = []
        for tok in text.split():
            m = re.fullmatch(r"([agb])(?:\^(-?\d+))?", tok)
            if not m:
                raise WordShapeError(f"bad syllable {tok!r}")
            syl.append((_SHORT[m.group(1)], int(m.group(2) or 1)))
        return cls(tuple(syl), free=free)

    def __str__(self):
        return " ".join(f"{_LONG[g]}^{t}" for g, t in self.syllables)


def check_shape(syllables) -> None:
    if len(syllables) % 2:
        raise WordShapeError("twist word must have an even number of syllables")
    k = len(syllables) // 2
    for i in range(k):
        want = (ALPHA, GAMMA if i < k - 1 else BETA)
        got = (syllables[2 * i][0], syllables[2 * i + 1][0])
        if got != want:
            raise WordShapeError(f"syllable pair {i + 1} is {got}, expected {want}")


def _matmul3(a, b):
    return [[sum(a[i][t] * b[t][j] for t in range(3)) for j in range(3)] for i in range(3)]


def twist_matrix(gen: str, t: int) -> list[list[int]]:
    c = INTERSECTION[gen]
    return [[(1 if x == y else 0) + t * c[x] * c[y] for y in range(3)] for x in range(3)]


@dataclass(frozen=True)
class LocalBlock:
    H: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.H) != 3 or any(len(r) != 3 for r in self.H):
            raise ValueError("local block must be 3x3")
        if any(not isinstance(x, int) or x < 0 for r in self.H for x in r):
            raise ValueError("local block entries must be nonnegative integers")

    @property
    def E(self) -> int:
        return max(max(r) for r in self.H)

    @property
    def N(self) -> int:
        """``max(2, E)``, the per-pair path ceiling used in the entropy estimate."""
        return max(2, self.E)

    @classmethod
    def from_rows(cls, rows) -> "LocalBlock":
        return cls(tuple(tuple(int(x) for x in r) for r in rows))

    @classmethod
    def identity(cls) -> "LocalBlock":
        return cls.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    def is_identity(self) -> bool:
        return self == LocalBlock.identity()

    def to_json(self) -> str:
        return json.dumps([list(r) for r in self.H])

    @classmethod
    def from_json(cls, text: str) -> "LocalBlock":
        return cls.from_rows(json.loads(text))

    def is_primitive(self) -> bool:
        m = [[1 if x else 0 for x in r] for r in self.H]
        p = m
        for _ in range(8):  # Wielandt bound (d-1)^2 + 1 = 5 for d = 3
            if all(all(r) for r in p):
                return True
            p = [[min(1, x) for x in r] for r in _matmul3(p, m)]
        return False


def local_block(word: TwistWord) -> LocalBlock:
    H = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for gen, t in word.syllables:
        H = _matmul3(H, twist_matrix(gen, t))
    return LocalBlock.from_rows(H)


def syllable_ceiling(word: TwistWord) -> int:
    out = 1
    for _, t in word.syllables:
        out *= 1 + 3 * t
    return out


def default_splice_index(n: int) -> int:
    return n // 2 - 1


def relocate_support(i: int, k: int, n: int) -> int:
    """Support position after conjugating by ``p_n^k``."""
    if not 2 <= i <= n - 5:
        raise DomainError(f"support position i={i} outside 2..{n - 5}")
    if not 1 <= k <= n - (i + 3):
        raise DomainError(f"shift k={k} outside 1..{n - (i + 3)}")
    return i + k


@dataclass(frozen=True)
class ComposedMatrix:
    base: TransitionMatrix
    j: int
    H: LocalBlock
    T_k: TransitionMatrix

    @property
    def n(self) -> int:
        return self.base.n

    def spliced_rows(self) -> list[int]:
        return [self.base.index(e(self.j - 3 + r)) for r in range(3)]

    def spliced_cols(self) -> list[int]:
        return [self.base.index(e(self.j + c)) for c in range(3)]


def splice(base: TransitionMatrix, n: int, H: LocalBlock, j: int | None = None) -> ComposedMatrix:
    """Replace rows ``e_{j-3}, e_{j-2}, e_{j-1}`` by the rows of ``H`` on columns ``e_j..e_{j+2}``."""
    if base.n != n or base.m != n:
        raise DomainError("splice needs the f^3 matrix with n = m")
    if j is None:
        j = default_splice_index(n)
    if not 5 <= j <= n - 5:
        raise DomainError(f"splice index j={j} outside 5..{n - 5}")
    rows = [base.index(e(j - 3 + r)) for r in range(3)]
    cols = [base.index(e(j + c)) for c in range(3)]
    for r, i in enumerate(rows):
        if base.row(i) != ((cols[r], 1),):
            raise DomainError(f"row {base.labels[i]} is not the plain shift to {base.labels[cols[r]]}")
    repl = {rows[r]: {cols[c]: H.H[r][c] for c in range(3)} for r in range(3)}
    return ComposedMatrix(base, j, H, base.with_rows(repl))
