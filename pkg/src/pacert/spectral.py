"""Exact path counting and certified Perron root brackets for nonnegative integer matrices.

All claims are decided with Python integers and fractions.  The bracket in
:func:`certified_radius` is the Collatz–Wielandt pair
``min_i (T x)_i / x_i <= lambda <= max_i (T x)_i / x_i`` evaluated on the
row-sum vectors ``x = T^l 1``; at ``l = 0`` this is the plain row-sum bound.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .intervals import ceil_dyadic, floor_dyadic, fraction_str, Interval
from .spine import DomainError, TransitionMatrix, is_strongly_connected, special_row_indices
from .twist import ComposedMatrix

DEFAULT_MAX_DOUBLINGS = 20
DEFAULT_BUDGET = 2 * 10**8
BRACKET_BITS = 96


class ReducibleMatrixError(ValueError):
    """The matrix is not irreducible; only :func:`pf_upper_bound` applies."""


def _to_rows(T: TransitionMatrix) -> list[dict[int, int]]:
    return [dict(r) for r in T.rows()]


def _matmul(A: list[dict[int, int]], B: list[dict[int, int]]) -> list[dict[int, int]]:
    out = []
    for row in A:
        acc: dict[int, int] = {}
        for t, a in row.items():
            for j, b in B[t].items():
                acc[j] = acc.get(j, 0) + a * b
        out.append(acc)
    return out


def matrix_power(T: TransitionMatrix, l: int) -> list[dict[int, int]]:
    """``T^l`` by repeated squaring, as sparse rows of big integers."""
    if l < 0:
        raise ValueError("negative power")
    result = [{i: 1} for i in range(T.dim)]
    base = _to_rows(T)
    while l:
        if l & 1:
            result = _matmul(result, base)
        l >>= 1
        if l:
            base = _matmul(base, base)
    return result


@dataclass(frozen=True)
class PathCountTable:
    l: int
    labels: tuple[str, ...]
    counts: tuple[int, ...]

    def __getitem__(self, label: str) -> int:
        return self.counts[self.labels.index(label)]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.labels, self.counts))

    @property
    def max_count(self) -> int:
        return max(self.counts, default=0)

    @property
    def min_count(self) -> int:
        return min(self.counts, default=0)

    @property
    def max_vertex(self) -> str:
        """Lexicographically least label among the vertices attaining the max."""
        top = self.max_count
        return min(lab for lab, c in zip(self.labels, self.counts) if c == top)


def path_counts(T: TransitionMatrix, l: int) -> PathCountTable:
    """Number of length-``l`` paths leaving each vertex, i.e. row sums of ``T^l``."""
    if l < 1:
        raise DomainError("path length must be >= 1")
    P = matrix_power(T, l)
    return PathCountTable(l, T.labels, tuple(sum(r.values()) for r in P))


def iroot_ceil(x: int, k: int) -> int:
    """Smallest integer r >= 0 with r**k >= x."""
    if x < 0 or k < 1:
        raise ValueError("iroot_ceil needs x >= 0, k >= 1")
    if x < 2:
        return x
    r = 1 << -(-x.bit_length() // k)  # r**k >= x
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r**k < x:
        r += 1
    while r > 0 and (r - 1) ** k >= x:
        r -= 1
    return r


def rational_root_up(x: int, l: int, bits: int = 64) -> Fraction:
    """A dyadic rational ``q`` with ``q**l >= x`` and ``q - x**(1/l) < 2**-bits``."""
    return Fraction(iroot_ceil(x << (bits * l), l), 1 << bits)


def rational_root_down(x: int, l: int, bits: int = 64) -> Fraction:
    scaled = x << (bits * l)
    r = iroot_ceil(scaled, l)
    if r**l > scaled:
        r -= 1
    return Fraction(r, 1 << bits)


def pf_upper_bound(T: TransitionMatrix, l: int, bits: int = 64) -> Fraction:
    """``(max_i N(V_i, l))**(1/l)`` rounded up to a dyadic rational."""
    return rational_root_up(path_counts(T, l).max_count, l, bits)


def period(T: TransitionMatrix) -> int:
    """Period of an irreducible matrix (gcd of cycle lengths)."""
    rows = T.rows()
    level = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for v, _ in rows[u]:
                if v not in level:
                    level[v] = level[u] + 1
                    nxt.append(v)
        frontier = nxt
    g = 0
    for u in level:
        for v, _ in rows[u]:
            g = math.gcd(g, level[u] + 1 - level[v])
    return g


@dataclass(frozen=True)
class CertifiedRadius:
    lo: Fraction
    hi: Fraction
    l_used: int
    converged: bool = True
    capped: bool = False
    history: tuple[tuple[int, Fraction, Fraction], ...] = field(default=(), repr=False)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    def __contains__(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi


def _cw_bracket(rows, x: list[int]) -> tuple[Fraction, Fraction, list[int]]:
    y = [sum(c * x[j] for j, c in r) for r in rows]
    ratios = [Fraction(yi, xi) for yi, xi in zip(y, x)]
    return min(ratios), max(ratios), y


def _truncate(x: list[int], keep_bits: int) -> list[int]:
    top = max(v.bit_length() for v in x)
    if top <= 2 * keep_bits:
        return x
    s = top - keep_bits
    return [-((-v) >> s) for v in x]


def certified_radius(
    T: TransitionMatrix,
    tol=Fraction(1, 10**9),
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
    budget: int = DEFAULT_BUDGET,
    keep_bits: int = 128,
    until_hi_below: Fraction | None = None,
) -> CertifiedRadius:
    """Bracket the Perron root of an irreducible ``T`` to width ``<= tol``.

    Brackets are taken at ``l = 0, 1, 2, 4, ...`` and intersected with the
    previous one, so they are nested.  The iterate is rescaled by a common
    power of two (rounding up) once it grows past ``2 * keep_bits`` bits;
    any positive vector gives a valid bracket, and the rescaling commutes
    with relabelling the rows.  ``until_hi_below`` stops early once the
    upper end drops to that threshold.

    Imprimitive inputs are iterated with ``T + I``.  If the budget or the
    doubling cap is hit first, the widest-so-far bracket is returned with
    ``capped=True``.
    """
    tol = Fraction(tol)
    if not is_strongly_connected(T):
        raise ReducibleMatrixError("matrix is reducible; analyse its strongly connected blocks")
    rows = T.rows()
    shift = 1 if T.dim > 1 and period(T) > 1 else 0
    cost = max(1, len(T.entries) + T.dim)

    x = [1] * T.dim
    lo, hi = Fraction(0), None
    history = []
    l = 0
    next_check = 0
    doublings = 0
    work = 0
    while True:
        if l == next_check:
            b_lo, b_hi, _ = _cw_bracket(rows, x)
            b_lo = floor_dyadic(b_lo, BRACKET_BITS)
            b_hi = ceil_dyadic(b_hi, BRACKET_BITS)
            lo = max(lo, b_lo)
            hi = b_hi if hi is None else min(hi, b_hi)
            history.append((l, lo, hi))
            if hi - lo <= tol or (until_hi_below is not None and hi <= until_hi_below):
                return CertifiedRadius(lo, hi, l, True, False, tuple(history))
            if doublings >= max_doublings or work >= budget:
                return CertifiedRadius(lo, hi, l, False, True, tuple(history))
            next_check = 1 if l == 0 else 2 * l
            doublings += l > 0
        y = [sum(c * x[j] for j, c in r) for r in rows]
        if shift:
            y = [a + b for a, b in zip(y, x)]
        x = _truncate(y, keep_bits)
        l += 1
        work += cost


@dataclass
class PFCheck:
    l: int
    max_vertex: str
    max_count: int
    bound: Fraction
    lo_ok: bool
    certified: bool
    equality: bool = False

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "max_vertex": self.max_vertex,
            "max_count": str(self.max_count),
            "bound": fraction_str(self.bound),
        }


@dataclass
class PFReport:
    radius: CertifiedRadius
    checks: list[PFCheck]

    @property
    def violations(self) -> list[PFCheck]:
        return [c for c in self.checks if not c.lo_ok]

    @property
    def status(self) -> str:
        if self.violations:
            return "violation"
        return "pass" if all(c.certified for c in self.checks) else "inconclusive"

    @property
    def tightest(self) -> PFCheck:
        return min(self.checks, key=lambda c: (c.bound, c.l))

    def to_json(self) -> str:
        return json.dumps([c.to_dict() for c in self.checks], indent=1)


def verify_pf_proposition(T: TransitionMatrix, l_max: int, tol=Fraction(1, 10**9)) -> PFReport:
    """Check ``lambda**l <= max_i N(V_i, l)`` exactly for ``l = 1..l_max``.

    ``certified`` uses the upper end of the bracket (so it proves the
    inequality); ``lo_ok`` failing would refute it.  When ``T^l`` has
    constant row sums the all-ones vector is a positive eigenvector, so
    ``lambda**l`` equals that sum exactly and the check is an equality.
    """
    rad = certified_radius(T, tol)
    checks = []
    P = [{i: 1} for i in range(T.dim)]
    base = _to_rows(T)
    for l in range(1, l_max + 1):
        P = _matmul(P, base)
        sums = [sum(r.values()) for r in P]
        table = PathCountTable(l, T.labels, tuple(sums))
        top = table.max_count
        bound = rational_root_up(top, l)
        equality = table.min_count == top
        checks.append(PFCheck(
            l=l,
            max_vertex=table.max_vertex,
            max_count=top,
            bound=bound,
            lo_ok=rad.lo**l <= top and rad.lo <= bound,
            certified=rad.hi**l <= top or equality,
            equality=equality,
        ))
    return PFReport(rad, checks)


# -- path locality ---------------------------------------------------------

@dataclass
class LocalityReport:
    n: int
    l: int
    E_k: int
    N_k: int
    status: str  # "pass", "fail" or "budget_exceeded"
    paths_enumerated: int = 0
    both_D_and_Dk: int = 0
    max_pair_D: int = 0
    max_pair_Dk: int = 0
    max_pair_any: int = 0
    max_vertex_total: int = 0
    vertex_ceiling: int = 0
    matches_matrix_power: bool = False
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        for key in ("max_vertex_total", "vertex_ceiling"):
            d[key] = str(d[key])
        return d


def path_locality_check(cm: ComposedMatrix, l: int | None = None,
                        budget: int = 5 * 10**6) -> LocalityReport:
    """Enumerate every length-``l`` path of the spliced graph and test the locality claims.

    D is the set of arcs leaving the six long-word rows, D_k the arcs leaving
    the three spliced rows.  Paths are enumerated as vertex sequences carrying
    the product of arc multiplicities.
    """
    n = cm.n
    if l is None:
        l = n // 13
    if l < 1:
        raise DomainError("path length l must be >= 1")
    T = cm.T_k
    rows = T.rows()
    in_D = set(special_row_indices(cm.base))
    in_Dk = set(cm.spliced_rows())
    N_k = cm.H.N
    report = LocalityReport(n=n, l=l, E_k=cm.H.E, N_k=N_k, status="pass",
                            vertex_ceiling=2 * n * N_k)

    pair_D: dict[tuple[int, int], int] = {}
    pair_Dk: dict[tuple[int, int], int] = {}
    pair_all: dict[tuple[int, int], int] = {}
    totals = [0] * T.dim
    count = 0
    for start in range(T.dim):
        # stack items: (vertex, depth, weight, touched D, touched D_k)
        stack = [(start, 0, 1, False, False)]
        while stack:
            v, depth, w, hd, hk = stack.pop()
            if depth == l:
                count += 1
                if count > budget:
                    report.status = "budget_exceeded"
                    report.paths_enumerated = count - 1
                    return report
                key = (start, v)
                pair_all[key] = pair_all.get(key, 0) + w
                totals[start] += w
                if hd:
                    pair_D[key] = pair_D.get(key, 0) + w
                if hk:
                    pair_Dk[key] = pair_Dk.get(key, 0) + w
                if hd and hk:
                    report.both_D_and_Dk += w
                continue
            hd2 = hd or v in in_D
            hk2 = hk or v in in_Dk
            for u, c in rows[v]:
                stack.append((u, depth + 1, w * c, hd2, hk2))

    report.paths_enumerated = count
    report.max_pair_D = max(pair_D.values(), default=0)
    report.max_pair_Dk = max(pair_Dk.values(), default=0)
    report.max_pair_any = max(pair_all.values(), default=0)
    report.max_vertex_total = max(totals, default=0)

    power = matrix_power(T, l)
    report.matches_matrix_power = all(
        totals[i] == sum(power[i].values()) for i in range(T.dim)
    ) and all(pair_all.get((i, j), 0) == c for i in range(T.dim) for j, c in power[i].items())

    if report.both_D_and_Dk:
        report.failures.append("a path meets both D and D_k")
    if report.max_pair_D > 2:
        report.failures.append(f"pair count through D is {report.max_pair_D} > 2")
    if report.max_pair_Dk > cm.H.E:
        report.failures.append(f"pair count through D_k is {report.max_pair_Dk} > E_k")
    if report.max_vertex_total > report.vertex_ceiling:
        report.failures.append("vertex total exceeds 2 n N_k")
    if not report.matches_matrix_power:
        report.failures.append("enumeration disagrees with matrix power")
    if report.failures:
        report.status = "fail"
    return report


def random_irreducible_matrix(rng, max_dim: int = 8, max_entry: int = 5,
                              density: float = 0.4) -> TransitionMatrix:
    """Draw nonnegative integer matrices until one is strongly connected."""
    while True:
        d = rng.randint(1, max_dim)
        rows = [[rng.randint(1, max_entry) if rng.random() < density else 0 for _ in range(d)]
                for _ in range(d)]
        T = TransitionMatrix.from_dense(rows)
        if is_strongly_connected(T):
            return T


def random_corpus(seed: int, count: int = 100, **kw) -> list[TransitionMatrix]:
    import random

    rng = random.Random(seed)
    return [random_irreducible_matrix(rng, **kw) for _ in range(count)]
