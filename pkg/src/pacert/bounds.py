"""Inequality chains for the entropy estimate and the genus lift.

Every transcendental quantity is an :class:`~pacert.intervals.Interval`;
verdicts compare the upper end of the left side with the lower end of the
right side.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .intervals import DEFAULT_PREC, Interval, log_enclosure
from .spectral import CertifiedRadius, ReducibleMatrixError, certified_radius
from .spine import DomainError, TransitionMatrix
from .twist import ComposedMatrix

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


def path_count_bound(n: int, N_k: int, prec: int = DEFAULT_PREC) -> Interval:
    """Enclosure of ``13 log(2 n N_k) / n``; the upper end bounds log of the Perron root."""
    if n < 13:
        raise DomainError("the path-count bound needs n >= 13")
    if N_k < 2:
        raise DomainError("N_k = max(2, E_k) is at least 2")
    return 13 * log_enclosure(2 * n * N_k, prec) / n


lemma5_bound = path_count_bound


def floor_length_bound(n: int, N_k: int, prec: int = DEFAULT_PREC) -> Interval:
    """``log(2 n N_k) / floor(n/13)``: the same estimate with an integer path length."""
    if n < 13:
        raise DomainError("the path-count bound needs n >= 13")
    return log_enclosure(2 * n * N_k, prec) / (n // 13)


def theorem_bound(n: int, prec: int = DEFAULT_PREC) -> Interval:
    """Enclosure of ``54 log(2n+2) / (2n+2)``."""
    if n < 1:
        raise DomainError("n must be positive")
    x = 2 * n + 2
    return 54 * log_enclosure(x, prec) / x


@dataclass
class EntropyBudget:
    n: int
    k: int
    N_k: int
    l: int
    chain: list[tuple[str, Interval]] = field(default_factory=list)
    steps: list[tuple[str, str, bool]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(ok for _, _, ok in self.steps)


def entropy_budget(n: int, N_k: int, k: int = 0, log_lambda: Interval | None = None,
                   prec: int = DEFAULT_PREC) -> EntropyBudget:
    """The chain ending in ``54 log(2n+2)/(2n+2)``, each link decided on intervals.

    The middle links hold only above a threshold depending on ``N_k``; below
    it the corresponding step is simply reported as not holding.
    """
    x = 2 * n + 2
    L = log_enclosure(x, prec)
    chain = []
    if log_lambda is not None:
        chain.append(("log lambda_0", log_lambda))
    chain += [
        ("log(2nN_k)/(n/13)", path_count_bound(n, N_k, prec)),
        ("2log(2n+2)/(2n/26)", 2 * L / Fraction(2 * n, 26)),
        ("2log(2n+2)/((2n+2)/27)", 2 * L / Fraction(x, 27)),
    ]
    budget = EntropyBudget(n, k, N_k, n // 13, chain)
    for (a, ia), (b, ib) in zip(chain, chain[1:]):
        strict = a != "log lambda_0"
        ok = ia.certainly_lt(ib) if strict else ia.certainly_le(ib)
        budget.steps.append((a, b, ok))
    # the last two labels are the same number written two ways
    budget.chain.append(("54log(2n+2)/(2n+2)", theorem_bound(n, prec)))
    return budget


@dataclass
class MainInequalityResult:
    n: int
    verdict: str
    radius: CertifiedRadius | None
    log_lambda_hi: Fraction | None
    bound: Interval
    margin: Fraction | None

    @property
    def passed(self) -> bool:
        return self.verdict == PASS


def verify_main_inequality(T: TransitionMatrix | ComposedMatrix, n: int,
                           tol=Fraction(1, 10**6), prec: int = DEFAULT_PREC,
                           **radius_kw) -> MainInequalityResult:
    """Decide ``log lambda(T_k) <= 54 log(2n+2)/(2n+2)`` from a certified bracket.

    Passes only when the upper end of the log-bracket sits at or below the
    lower end of the bound.  A bracket whose lower end already exceeds the
    bound is a fail; anything else is inconclusive.
    """
    if isinstance(T, ComposedMatrix):
        T = T.T_k
    bound = theorem_bound(n, prec)
    try:
        # stop as soon as the bracket proves the inequality
        exp_lo = _exp_lower_rational(bound.lo)
        rad = certified_radius(T, tol, until_hi_below=exp_lo, **radius_kw)
    except ReducibleMatrixError:
        return MainInequalityResult(n, INCONCLUSIVE, None, None, bound, None)
    if rad.hi <= 0:
        return MainInequalityResult(n, PASS, rad, None, bound, None)
    log_hi = log_enclosure(rad.hi, prec).hi
    margin = bound.lo - log_hi
    if log_hi <= bound.lo:
        verdict = PASS
    elif rad.lo > 0 and log_enclosure(rad.lo, prec).lo > bound.hi:
        verdict = FAIL
    else:
        verdict = INCONCLUSIVE
    return MainInequalityResult(n, verdict, rad, log_hi, bound, margin)


def _exp_lower_rational(y: Fraction) -> Fraction:
    """A rational ``r`` with ``log r <= y`` (used only as an early-stop target)."""
    import math

    r = Fraction(math.exp(float(y))) * Fraction(999999, 1000000)
    while log_enclosure(r).hi > y:
        r *= Fraction(9, 10)
    return r


def empirical_threshold(results: list[tuple[int, str]]) -> int | None:
    """Least tested n from which every tested n passes, or None if the largest fails."""
    threshold = None
    for n, verdict in sorted(results, reverse=True):
        if verdict != PASS:
            break
        threshold = n
    return threshold


@dataclass
class LiftParameters:
    g: int
    n: int
    m: int
    s: int
    L: int
    lhs: Interval
    middle: Interval
    rhs: Interval
    first_holds: bool
    second_holds: bool

    @property
    def holds(self) -> bool:
        return self.first_holds and self.second_holds


def lift_puncture_count(g: int, n: int, m: int) -> int:
    return (2 * g + 1) * (n + m + 1) + 1


def lift_bound(g: int, n: int, m: int, prec: int = DEFAULT_PREC) -> LiftParameters:
    """Evaluate ``54 log(n+m+2)/(n+m+2) < 54 log s/((s-1)/(2g+1)+1) < 162 g log s / s``."""
    if g < 2:
        raise DomainError("genus must be at least 2")
    s = lift_puncture_count(g, n, m)
    log_s = log_enclosure(s, prec)
    lhs = 54 * log_enclosure(n + m + 2, prec) / (n + m + 2)
    middle = 54 * log_s / (Fraction(s - 1, 2 * g + 1) + 1)
    rhs = 162 * g * log_s / s
    return LiftParameters(g, n, m, s, 162 * g, lhs, middle, rhs,
                          lhs.certainly_lt(middle), middle.certainly_lt(rhs))


def psi_bound(L, s: int, prec: int = DEFAULT_PREC) -> Interval:
    return Fraction(L) * log_enclosure(s, prec) / s


def psi_membership(g: int, L, s: int, log_lambda, prec: int = DEFAULT_PREC) -> bool:
    """Whether ``log lambda <= L log(s)/s`` is certified.

    ``log_lambda`` is a number or an enclosing interval.  An enclosure
    identical to the bound's own enclosure is read as equality and accepted.
    """
    if s < 3:
        raise DomainError("need at least three punctures")
    bound = psi_bound(L, s, prec)
    value = log_lambda if isinstance(log_lambda, Interval) else Interval.point(log_lambda)
    if value == bound:
        return True
    return value.certainly_le(bound)
