"""Words in the rotations ``p``, ``q`` and a subsurface map ``h``, tracked by support.

Punctures are labelled ``V1..Vn`` (the disk X, counterclockwise, ``V1``
shared with Y), ``W2..Wm`` (the rest of Y, in the direction ``q`` moves
them) and the three fixed centres ``x``, ``y``, ``z``.  ``h`` carries a base
position ``i`` and a conjugation shift ``t``; ``h[i, t]`` stands for
``p^t h p^-t`` with support ``{V_{i+t}, V_{i+t+1}, V_{i+t+2}}``.

Words compose right to left: ``q p`` means ``p`` first.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, replace

from .spine import DomainError

FIXED = ("x", "y", "z")


@dataclass(frozen=True)
class Generator:
    name: str  # "p", "q", "h" or the macro "f" = q p
    power: int = 1
    base: int | None = None
    shift: int = 0

    def __post_init__(self):
        if self.name not in ("p", "q", "h", "f"):
            raise ValueError(f"unknown generator {self.name!r}")
        if self.name == "h":
            if self.base is None:
                raise ValueError("h needs a position")
        elif self.base is not None:
            raise ValueError("only h carries a position")

    @property
    def position(self) -> int | None:
        return None if self.base is None else self.base + self.shift

    def support(self, n: int, m: int) -> frozenset[str]:
        if self.name == "p":
            return frozenset(x_punctures(n))
        if self.name == "q":
            return frozenset(y_punctures(m))
        if self.name == "f":
            return frozenset(x_punctures(n)) | frozenset(y_punctures(m))
        i = self.position
        if i < 1 or i + 2 > n:
            raise DomainError(f"h at V{i} runs off the disk X (n={n})")
        return frozenset(f"V{j}" for j in range(i, i + 3))

    def __str__(self):
        if self.name == "h":
            core = f"h@{self.base}" if not self.shift else f"(p^{self.shift} h@{self.base} p^-{self.shift})"
            return core if self.power == 1 else f"{core}^{self.power}"
        return self.name if self.power == 1 else f"{self.name}^{self.power}"


def x_punctures(n: int) -> list[str]:
    return [f"V{i}" for i in range(1, n + 1)]


def y_punctures(m: int) -> list[str]:
    return ["V1"] + [f"W{i}" for i in range(2, m + 1)]


def all_punctures(n: int, m: int) -> list[str]:
    return x_punctures(n) + y_punctures(m)[1:] + list(FIXED)


@dataclass(frozen=True)
class MCGWord:
    letters: tuple[Generator, ...]

    @classmethod
    def parse(cls, text: str) -> "MCGWord":
        letters = []
        for tok in text.split():
            m = re.fullmatch(r"([pqf])(?:\^(-?\d+))?|h@(\d+)(?:\^(-?\d+))?", tok)
            if not m:
                raise ValueError(f"bad letter {tok!r}")
            if m.group(1):
                power = int(m.group(2) or 1)
                if power:
                    letters.append(Generator(m.group(1), power))
            else:
                letters.append(Generator("h", int(m.group(4) or 1), base=int(m.group(3))))
        return cls(tuple(letters))

    def __str__(self):
        return " ".join(str(g) for g in self.letters) or "1"

    def __len__(self):
        return len(self.letters)


def f_power(a: int) -> tuple[Generator, ...]:
    return (Generator("f", a),) if a else ()


def disjoint(a: Generator, b: Generator, n: int, m: int) -> bool:
    return not (a.support(n, m) & b.support(n, m))


def _swappable(a: Generator, b: Generator, n: int, m: int) -> bool:
    return a.name == "q" and b.name in ("p", "h") and disjoint(a, b, n, m)


def commute_if_disjoint(w: MCGWord, n: int, m: int, rng: random.Random | None = None) -> MCGWord:
    """Move X-supported letters left past ``q`` letters whenever the supports are disjoint.

    With ``rng`` the legal swaps are applied in random order; the result does
    not depend on the order.
    """
    letters = list(w.letters)
    while True:
        spots = [i for i in range(len(letters) - 1) if _swappable(letters[i], letters[i + 1], n, m)]
        if not spots:
            return MCGWord(tuple(letters))
        i = rng.choice(spots) if rng else spots[0]
        letters[i], letters[i + 1] = letters[i + 1], letters[i]


def conjugate_by_p(h: Generator, t: int) -> Generator:
    """``p^t h p^-t``, which shifts the support of ``h`` by ``t``."""
    if h.name != "h":
        raise ValueError("only h is conjugated")
    return replace(h, shift=h.shift + t)


# -- puncture permutations --------------------------------------------------

Perm = dict[str, str]


def _identity(n: int, m: int) -> Perm:
    return {v: v for v in all_punctures(n, m)}


def _cycle(labels: list[str], n: int, m: int) -> Perm:
    perm = _identity(n, m)
    for a, b in zip(labels, labels[1:] + labels[:1]):
        perm[a] = b
    return perm


def _compose(outer: Perm, inner: Perm) -> Perm:
    return {v: outer[inner[v]] for v in inner}


def _inverse(perm: Perm) -> Perm:
    return {b: a for a, b in perm.items()}


def _power(perm: Perm, k: int) -> Perm:
    base = perm if k >= 0 else _inverse(perm)
    out = {v: v for v in perm}
    for _ in range(abs(k)):
        out = _compose(base, out)
    return out


def generator_action(g: Generator, n: int, m: int) -> Perm:
    if g.name == "p":
        return _power(_cycle(x_punctures(n), n, m), g.power)
    if g.name == "q":
        return _power(_cycle(y_punctures(m), n, m), g.power)
    if g.name == "f":
        f = _compose(_cycle(y_punctures(m), n, m), _cycle(x_punctures(n), n, m))
        return _power(f, g.power)
    g.support(n, m)
    return _identity(n, m)


def puncture_action(w: MCGWord, n: int, m: int) -> Perm:
    out = _identity(n, m)
    for g in w.letters:
        out = _compose(out, generator_action(g, n, m))
    return out


def cycles(perm: Perm) -> list[tuple[str, ...]]:
    order = {v: i for i, v in enumerate(perm)}
    seen, out = set(), []
    for v in perm:
        if v in seen:
            continue
        cyc = [v]
        seen.add(v)
        u = perm[v]
        while u != v:
            cyc.append(u)
            seen.add(u)
            u = perm[u]
        out.append(tuple(cyc))
    return sorted(out, key=lambda c: order[c[0]])


def cycle_string(perm: Perm) -> str:
    nontrivial = [c for c in cycles(perm) if len(c) > 1]
    return "".join("(" + " ".join(c) + ")" for c in nontrivial) or "()"


def fixed_points(perm: Perm) -> list[str]:
    return [v for v, u in perm.items() if v == u]


# -- the conjugation replay --------------------------------------------------

@dataclass
class ConjugationResult:
    n: int
    m: int
    i: int
    k: int
    passed: bool
    trace: list[str]
    final: MCGWord
    expected: MCGWord

    @property
    def steps(self) -> int:
        return len(self.trace) - 1

    def trace_text(self) -> str:
        return "\n".join(self.trace) + "\n"


def _check_conjugation_range(n: int, m: int, i: int, k: int) -> None:
    if n < 7 or m < 7:
        raise DomainError("need n, m >= 7")
    if not 2 <= i <= n - 5:
        raise DomainError(f"i={i} outside 2..{n - 5}")
    if not 1 <= k <= n - (i + 3):
        raise DomainError(f"k={k} outside 1..{n - (i + 3)}")


def verify_conjugation(n: int, m: int, i: int, k: int) -> ConjugationResult:
    """Replay ``f^k h f^3 f^-k = (p^k h p^-k) f^3`` one rewrite at a time.

    Each round is two macro-steps: expand ``f = q p`` and pass ``p`` through
    ``h`` (shifting its support), then commute ``q`` past the shifted ``h``
    and fold ``q p`` back into ``f``.
    """
    _check_conjugation_range(n, m, i, k)
    h = Generator("h", base=i)
    start = MCGWord((*f_power(k), h, Generator("f", 3), Generator("f", -k)))
    trace = [f"0. {start}"]
    a, b = k, 3 - k
    ok = True
    step = 0
    for _ in range(k):
        shifted = conjugate_by_p(h, 1)
        q = Generator("q")
        word = MCGWord((*f_power(a - 1), q, shifted, Generator("p"), *f_power(b)))
        step += 1
        trace.append(f"{step}. = {word}    [f = q p; p {h} p^-1 = {shifted}]")
        if not disjoint(q, shifted, n, m):
            ok = False
            trace.append(f"   q and {shifted} share a puncture; cannot commute")
            break
        h, a, b = shifted, a - 1, b + 1
        word = MCGWord((*f_power(a), h, *f_power(b)))
        step += 1
        trace.append(f"{step}. = {word}    [q commutes with {h}; q p = f]")
    final = MCGWord((*f_power(a), h, *f_power(b)))
    expected = MCGWord((conjugate_by_p(Generator("h", base=i), k), Generator("f", 3)))
    ok = ok and final == expected
    ok = ok and puncture_action(start, n, m) == puncture_action(final, n, m)
    return ConjugationResult(n, m, i, k, ok, trace, final, expected)


def legal_conjugations(n: int) -> list[tuple[int, int]]:
    return [(i, k) for i in range(2, n - 4) for k in range(1, n - (i + 3) + 1)]
