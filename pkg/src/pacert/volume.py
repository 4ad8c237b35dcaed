"""Exact volume bookkeeping in multiples of the regular ideal octahedron volume V8.

Coefficients are :class:`~fractions.Fraction`; numeric values only appear
through certified enclosures of V8 and v3 built from the Lobachevsky function.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import iv

from .intervals import Interval, from_iv
from .spine import DomainError
from .twist import ALPHA, BETA, GAMMA, TwistWord

DEFAULT_BITS = 60

# V8 = 3.663862376708... to twelve decimals
V8_REFERENCE = Interval(Fraction("3.663862376708"), Fraction("3.663862376709"))


def lobachevsky(theta: Fraction, bits: int = DEFAULT_BITS) -> Interval:
    """Enclosure of the Lobachevsky function at ``theta * pi``, for ``0 < theta < 1/2``.

    Uses ``L(x) = x - x log(2x) + sum_k 2^(2k-1) |B_2k| x^(2k+1) / (k (2k)! (2k+1))``,
    truncated once the geometric tail bound drops below ``2**-bits``.
    """
    theta = Fraction(theta)
    if not 0 < theta < Fraction(1, 2):
        raise ValueError("theta must lie in (0, 1/2)")
    old = iv.prec
    iv.prec = bits + 40
    try:
        x = iv.pi * iv.mpf(theta.numerator) / theta.denominator
        total = x - x * iv.log(2 * x)
        ratio = float(theta) ** 2  # (x/pi)^2
        tol = Fraction(1, 2**bits)
        k = 1
        while True:
            p, q = mpmath.bernfrac(2 * k)
            b = abs(Fraction(int(p), int(q)))
            coeff = Fraction(2 ** (2 * k - 1)) * b / (k * math.factorial(2 * k) * (2 * k + 1))
            total += iv.mpf(coeff.numerator) / coeff.denominator * x ** (2 * k + 1)
            tail = _tail_bound(theta, k)
            if tail <= tol:
                break
            k += 1
        enclosure = from_iv(total)
        return Interval(enclosure.lo, enclosure.hi + tail)
    finally:
        iv.prec = old


def _tail_bound(theta: Fraction, k: int) -> Fraction:
    """Bound on the terms after index ``k`` (all of them are positive).

    ``|B_2j| <= 2 zeta(2) (2j)! / (2 pi)^(2j)`` and ``zeta(2) < 33/20``, so term
    ``j`` is at most ``(33/20) * theta * pi * theta^(2j) / (j (2j+1))``.
    """
    r = theta * theta
    j = k + 1
    first = Fraction(33, 20) * theta * Fraction(22, 7) * r**j / (j * (2 * j + 1))
    return first / (1 - r)


def octahedron_constant(bits: int = DEFAULT_BITS) -> Interval:
    """V8 = 8 L(pi/4)."""
    return 8 * lobachevsky(Fraction(1, 4), bits)


def tetrahedron_constant(bits: int = DEFAULT_BITS) -> Interval:
    """v3 = 3 L(pi/3)."""
    return 3 * lobachevsky(Fraction(1, 3), bits)


@dataclass(frozen=True)
class VolumeExpr:
    coeff: Fraction
    conditional: bool = False
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.coeff < 0:
            raise ValueError("volume coefficient must be nonnegative")

    def numeric(self, bits: int = DEFAULT_BITS) -> Interval:
        return self.coeff * octahedron_constant(bits)

    def __add__(self, other: "VolumeExpr") -> "VolumeExpr":
        return VolumeExpr(self.coeff + other.coeff, self.conditional or other.conditional)

    def scaled(self, factor) -> "VolumeExpr":
        return VolumeExpr(self.coeff * Fraction(factor), self.conditional, self.note)


# the block A0 and its double A
A0_VOLUME = VolumeExpr(2)
A_VOLUME = VolumeExpr(4)

LARGE_EXPONENT_HYPOTHESIS = "u_i, v_i >= B_k"


def block_volume(k: int) -> VolumeExpr:
    """Volume of k copies of the double block glued top to bottom."""
    if k < 1:
        raise DomainError("k must be at least 1")
    return VolumeExpr(4 * k)


def drilled_lower_bound(k: int) -> VolumeExpr:
    if k < 1:
        raise DomainError("k must be at least 1")
    return VolumeExpr(4 * k)


def filled_lower_bound(k: int) -> VolumeExpr:
    """``drilled - k V8``; holds only once every twist exponent is large."""
    d = drilled_lower_bound(k)
    return VolumeExpr(d.coeff - k, conditional=True, note=LARGE_EXPONENT_HYPOTHESIS)


def lifted_lower_bound(k: int, degree: int) -> VolumeExpr:
    if degree < 1:
        raise DomainError("covering degree must be positive")
    return filled_lower_bound(k).scaled(degree)


def gromov_norm(vol: VolumeExpr | Interval, bits: int = DEFAULT_BITS) -> Interval:
    """Enclosure of ``vol / v3``."""
    value = vol.numeric(bits) if isinstance(vol, VolumeExpr) else vol
    if value.hi == 0:
        return Interval.point(0)
    return value / tetrahedron_constant(bits)


def filling_norm_monotone(filled: Interval, unfilled: Interval) -> bool:
    """Certified ``||[M_beta]|| <= ||[M]||`` on enclosures."""
    return filled.certainly_le(unfilled)


# -- drilling locus and slopes -------------------------------------------------

@dataclass(frozen=True)
class DrillingLocus:
    k: int
    components: tuple[tuple[str, Fraction], ...]

    def levels(self, curve: str) -> list[Fraction]:
        return [lvl for c, lvl in self.components if c == curve]

    def count(self, curve: str | None = None) -> int:
        if curve is None:
            return len(self.components)
        return len(self.levels(curve))


def drilling_locus(k: int) -> DrillingLocus:
    """``k+1`` alpha curves at ``2i/4k``, ``k-1`` gamma curves at ``(2i+1)/4k``, one beta at ``1/4k``."""
    if k < 1:
        raise DomainError("k must be at least 1")
    comps = [(BETA, Fraction(1, 4 * k))]
    comps += [(ALPHA, Fraction(2 * i, 4 * k)) for i in range(1, k + 2)]
    comps += [(GAMMA, Fraction(2 * i + 1, 4 * k)) for i in range(1, k)]
    return DrillingLocus(k, tuple(sorted(comps, key=lambda c: (c[1], c[0]))))


@dataclass(frozen=True)
class BoundaryLabel:
    index: int
    curve: str | None
    level: Fraction | None

    def __str__(self):
        if self.curve is None:
            return f"d{self.index}: unassigned"
        return f"d{self.index}: {self.curve} x {{{self.level}}}"


def boundary_indexing(k: int) -> list[BoundaryLabel]:
    """Labels ``1..2k+2``: 1 is beta, ``2i`` alpha (``i <= k+1``), ``2i+1`` gamma (``i <= k-1``).

    Label ``2k+1`` is left without a curve; the index ranges cover only
    ``2k+1`` of the ``2k+2`` labels.
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    out = {1: BoundaryLabel(1, BETA, Fraction(1, 4 * k))}
    for i in range(1, k + 2):
        out[2 * i] = BoundaryLabel(2 * i, ALPHA, Fraction(2 * i, 4 * k))
    for i in range(1, k):
        out[2 * i + 1] = BoundaryLabel(2 * i + 1, GAMMA, Fraction(2 * i + 1, 4 * k))
    return [out.get(j, BoundaryLabel(j, None, None)) for j in range(1, 2 * k + 3)]


def indexing_mismatch(k: int) -> dict:
    locus = drilling_locus(k)
    labels = boundary_indexing(k)
    return {
        "k": k,
        "components": locus.count(),
        "labels": len(labels),
        "unassigned": [b.index for b in labels if b.curve is None],
    }


@dataclass(frozen=True)
class SlopeAssignment:
    """Filling slopes ``1/r`` in boundary order, each with its curve and exponent."""

    k: int
    slopes: tuple[Fraction, ...]
    boundaries: tuple[BoundaryLabel, ...]

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(int(1 / s) for s in self.slopes)


def surgery_correspondence(word: TwistWord) -> SlopeAssignment:
    """Slopes ``(1/v_k, 1/u_k, ..., 1/v_1, 1/u_1)`` for ``h_k``.

    The rightmost syllable acts first, so it is filled on the lowest boundary
    ``d1`` (beta); reading the word right to left walks up the levels.
    """
    if word.k < 1:
        raise DomainError("need a word with k >= 1")
    syl = list(reversed(word.syllables))
    labels = boundary_indexing(word.k)
    slopes, bounds = [], []
    for t, (gen, exp) in enumerate(syl):
        if exp == 0:
            raise DomainError("zero exponent gives slope 1/0")
        b = labels[t]
        if b.curve != gen:
            raise DomainError(f"syllable {gen} lands on boundary {b}")
        slopes.append(Fraction(1, exp))
        bounds.append(b)
    return SlopeAssignment(word.k, tuple(slopes), tuple(bounds))


def word_from_slopes(sa: SlopeAssignment) -> TwistWord:
    syl = []
    for s, b in zip(sa.slopes, sa.boundaries):
        if s.numerator != 1 or s.denominator < 1:
            raise DomainError(f"slope {s} is not of the form 1/r with r >= 1")
        syl.append((b.curve, s.denominator))
    return TwistWord(tuple(reversed(syl)))


def fiber_equivalence(n: int, m: int) -> tuple[int, int]:
    """Canonical pair under ``(n, m) ~ (n+3, m) ~ (n, m+3)`` within ``n, m > 3``."""
    if n <= 3 or m <= 3:
        raise DomainError("need n, m > 3")
    return (4 + (n - 4) % 3, 4 + (m - 4) % 3)


# -- export --------------------------------------------------------------------

def ledger_rows(k_max: int, bits: int = DEFAULT_BITS) -> list[dict]:
    rows = []
    for k in range(1, k_max + 1):
        for kind, vol in (("block", block_volume(k)),
                          ("drilled", drilled_lower_bound(k)),
                          ("filled", filled_lower_bound(k))):
            norm = gromov_norm(vol, bits)
            rows.append({
                "k": k,
                "kind": kind,
                "coeff_V8": f"{vol.coeff.numerator}/{vol.coeff.denominator}",
                "conditional": vol.conditional,
                "gromov_norm": norm.to_pair(16),
            })
    return rows


def constants_table(bits: int = DEFAULT_BITS) -> dict:
    v8, v3 = octahedron_constant(bits), tetrahedron_constant(bits)
    return {
        "precision_bits": bits,
        "V8": v8.to_pair(20),
        "v3": v3.to_pair(20),
        "V8_width": float(v8.width),
        "v3_width": float(v3.width),
    }


def ledger_json(k_max: int, bits: int = DEFAULT_BITS) -> str:
    return json.dumps({"constants": constants_table(bits), "rows": ledger_rows(k_max, bits)},
                      indent=1) + "\n"
