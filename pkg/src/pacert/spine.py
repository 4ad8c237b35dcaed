"""Spine graph edge relations for the cubed Hironaka–Kin map and its transition matrix.

Only the contributing edges ``e_1..e_n`` and ``e'_1..e'_m`` are materialized.
The loop and peripheral edges are permuted by the map and live in the
permutation block returned by :func:`block_decomposition`.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import networkx as nx

MIN_PUNCTURES = 7

PLAIN = "plain"
PRIME = "prime"

# Word lengths of the six rows that are not plain shifts.
SPECIAL_WORD_LENGTHS = (13, 11, 9, 7, 5, 3)


class DomainError(ValueError):
    """Raised when parameters fall outside the range a construction is defined on."""


@dataclass(frozen=True, order=True)
class EdgeId:
    family: str
    index: int

    def __post_init__(self):
        if self.family not in (PLAIN, PRIME):
            raise ValueError(f"unknown edge family {self.family!r}")
        if self.index < 1:
            raise ValueError("edge index must be positive")

    @property
    def label(self) -> str:
        return f"e{self.index}" if self.family == PLAIN else f"ep{self.index}"

    @classmethod
    def parse(cls, label: str) -> "EdgeId":
        m = re.fullmatch(r"e(p?)(\d+)", label)
        if not m:
            raise ValueError(f"bad edge label {label!r}")
        return cls(PRIME if m.group(1) else PLAIN, int(m.group(2)))

    def __str__(self):
        return self.label


def e(i: int) -> EdgeId:
    return EdgeId(PLAIN, i)


def ep(i: int) -> EdgeId:
    return EdgeId(PRIME, i)


def _word(spec: str) -> tuple[EdgeId, ...]:
    return tuple(EdgeId.parse(tok) for tok in spec.split())


@dataclass(frozen=True)
class SpineMap:
    n: int
    m: int
    images: Mapping[EdgeId, tuple[EdgeId, ...]]

    def __post_init__(self):
        for edge in self.edges:
            if edge not in self.images:
                raise ValueError(f"edge {edge} has no image")
        if len(self.images) != self.n + self.m:
            raise ValueError("image table has edges outside the spine")
        for src, word in self.images.items():
            for tgt in (src, *word):
                if not self._in_range(tgt):
                    raise ValueError(f"edge {tgt} out of range for n={self.n}, m={self.m}")

    def _in_range(self, edge: EdgeId) -> bool:
        top = self.n if edge.family == PLAIN else self.m
        return 1 <= edge.index <= top

    @property
    def edges(self) -> list[EdgeId]:
        return [e(i) for i in range(1, self.n + 1)] + [ep(i) for i in range(1, self.m + 1)]

    def special_edges(self) -> list[EdgeId]:
        """The six edges whose images are long words, longest first."""
        n, m = self.n, self.m
        return [ep(1), e(n), ep(m), e(n - 1), ep(m - 1), e(n - 2)]

    def image(self, edge: EdgeId) -> tuple[EdgeId, ...]:
        return self.images[edge]


def build_f3_spine_map(n: int, m: int) -> SpineMap:
    """Edge relations of the graph map induced by the cube of ``q_m p_n``.

    The prime shift ``e'_i -> e'_{i+3}`` runs for ``1 < i <= m-2`` and the
    index ``m+1`` it produces at ``i = m-2`` is read as ``e'_1``.
    """
    if n < MIN_PUNCTURES or m < MIN_PUNCTURES:
        raise DomainError(f"need n, m >= {MIN_PUNCTURES}; got n={n}, m={m}")
    images: dict[EdgeId, tuple[EdgeId, ...]] = {}
    for i in range(1, n - 2):
        images[e(i)] = (e(i + 3),)
    for i in range(2, m - 1):
        target = i + 3 if i + 3 <= m else i + 3 - m
        images[ep(i)] = (ep(target),)
    images[ep(1)] = _word("ep4 ep4 ep3 ep3 ep2 ep2 ep1 e1 e2 e2 e3 e3 e4")
    images[e(n)] = _word("e3 e3 e2 e2 e1 ep1 ep2 ep2 ep3 ep3 ep4")
    images[ep(m)] = _word("ep3 ep3 ep2 ep2 ep1 e1 e2 e2 e3")
    images[e(n - 1)] = _word("e2 e2 e1 ep1 ep2 ep2 ep3")
    images[ep(m - 1)] = _word("ep2 ep2 ep1 e1 e2")
    images[e(n - 2)] = _word("e1 ep1 ep2")
    return SpineMap(n, m, images)


@dataclass(frozen=True)
class TransitionMatrix:
    """Sparse nonnegative integer matrix; rows are sources, columns targets.

    ``entries`` maps ``(row, col)`` index pairs to positive counts.
    """

    labels: tuple[str, ...]
    entries: Mapping[tuple[int, int], int]
    n: int | None = None
    m: int | None = None
    _rows: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        dim = len(self.labels)
        rows: list[list[tuple[int, int]]] = [[] for _ in range(dim)]
        for (i, j), c in self.entries.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise ValueError(f"entry ({i}, {j}) outside {dim}x{dim}")
            if not isinstance(c, int) or c < 0:
                raise ValueError("entries must be nonnegative integers")
            if c:
                rows[i].append((j, c))
        object.__setattr__(self, "entries", {k: v for k, v in self.entries.items() if v})
        object.__setattr__(self, "_rows", tuple(tuple(sorted(r)) for r in rows))

    @property
    def dim(self) -> int:
        return len(self.labels)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], labels: Sequence[str] | None = None,
                   **kw) -> "TransitionMatrix":
        dim = len(rows)
        if any(len(r) != dim for r in rows):
            raise ValueError("matrix must be square")
        if labels is None:
            labels = [f"v{i}" for i in range(dim)]
        entries = {(i, j): int(c) for i, r in enumerate(rows) for j, c in enumerate(r) if c}
        return cls(tuple(labels), entries, **kw)

    def row(self, i: int) -> tuple[tuple[int, int], ...]:
        return self._rows[i]

    def rows(self):
        return self._rows

    def get(self, i, j) -> int:
        i = self.index(i) if isinstance(i, (str, EdgeId)) else i
        j = self.index(j) if isinstance(j, (str, EdgeId)) else j
        return self.entries.get((i, j), 0)

    def index(self, label) -> int:
        return self.labels.index(str(label))

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.dim for _ in range(self.dim)]
        for (i, j), c in self.entries.items():
            out[i][j] = c
        return out

    def row_sums(self) -> list[int]:
        return [sum(c for _, c in r) for r in self._rows]

    def total(self) -> int:
        return sum(self.entries.values())

    def max_entry(self) -> int:
        return max(self.entries.values(), default=0)

    def diagonal(self) -> list[int]:
        return [self.entries.get((i, i), 0) for i in range(self.dim)]

    def with_rows(self, replacements: Mapping[int, Mapping[int, int]]) -> "TransitionMatrix":
        entries = {k: v for k, v in self.entries.items() if k[0] not in replacements}
        for i, row in replacements.items():
            for j, c in row.items():
                if c:
                    entries[(i, j)] = c
        return TransitionMatrix(self.labels, entries, self.n, self.m)

    def to_json(self) -> str:
        triples = sorted((self.labels[i], self.labels[j], c) for (i, j), c in self.entries.items())
        payload = {"n": self.n, "m": self.m, "entries": [list(t) for t in triples]}
        if self.n is None:
            payload["labels"] = list(self.labels)
        return json.dumps(payload, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TransitionMatrix":
        payload = json.loads(text)
        n, m = payload["n"], payload["m"]
        if "labels" in payload:
            labels = tuple(payload["labels"])
        else:
            labels = tuple(x.label for x in _edge_order(n, m))
        pos = {lab: i for i, lab in enumerate(labels)}
        entries = {(pos[r], pos[c]): int(v) for r, c, v in payload["entries"]}
        return cls(labels, entries, n, m)


def _edge_order(n: int, m: int) -> list[EdgeId]:
    return [e(i) for i in range(1, n + 1)] + [ep(i) for i in range(1, m + 1)]


def transition_matrix(smap: SpineMap) -> TransitionMatrix:
    """Count occurrences of each target edge in each image word."""
    order = smap.edges
    pos = {edge: k for k, edge in enumerate(order)}
    entries: dict[tuple[int, int], int] = {}
    for src in order:
        for tgt in smap.image(src):
            key = (pos[src], pos[tgt])
            entries[key] = entries.get(key, 0) + 1
    return TransitionMatrix(tuple(x.label for x in order), entries, smap.n, smap.m)


def f3_matrix(n: int, m: int) -> TransitionMatrix:
    return transition_matrix(build_f3_spine_map(n, m))


@dataclass(frozen=True)
class BlockDecomposition:
    """``T = [[A, *], [0, P]]`` with ``A`` a permutation of loop and peripheral edges.

    ``A`` is stored as ``perm[i] = image index`` over ``a_labels``; the ``*``
    block is not reconstructed.
    """

    a_labels: tuple[str, ...]
    perm: tuple[int, ...]
    P: TransitionMatrix

    def a_dense(self) -> list[list[int]]:
        d = len(self.perm)
        out = [[0] * d for _ in range(d)]
        for i, j in enumerate(self.perm):
            out[i][j] = 1
        return out

    def is_permutation(self) -> bool:
        return sorted(self.perm) == list(range(len(self.perm)))


def _cycle_power(labels: list[str], power: int) -> dict[str, str]:
    k = len(labels)
    return {labels[i]: labels[(i + power) % k] for i in range(k)}


def block_decomposition(n: int, m: int) -> BlockDecomposition:
    """Split the transition matrix of the cubed map into its permutation and Perron blocks.

    Loop edges follow the punctures, which the map cycles as one
    ``(n+m-1)``-cycle; peripheral edges are rotated as one ``(n+m)``-cycle.
    Both are cubed.
    """
    P = f3_matrix(n, m)
    loops = [f"a{i}" for i in range(1, n + 1)] + [f"ap{i}" for i in range(2, m + 1)]
    periph = [f"b{i}" for i in range(1, n + 1)] + [f"bp{i}" for i in range(1, m + 1)]
    action = {**_cycle_power(loops, 3), **_cycle_power(periph, 3)}
    a_labels = tuple(loops + periph)
    pos = {lab: i for i, lab in enumerate(a_labels)}
    perm = tuple(pos[action[lab]] for lab in a_labels)
    return BlockDecomposition(a_labels, perm, P)


def directed_graph(T: TransitionMatrix) -> nx.DiGraph:
    """Directed graph with one vertex per row; arc ``i -> j`` carries ``count = T[i, j]``.

    Parallel arcs are collapsed into the ``count`` attribute.
    """
    g = nx.DiGraph()
    g.add_nodes_from(T.labels)
    for (i, j), c in T.entries.items():
        g.add_edge(T.labels[i], T.labels[j], count=c)
    return g


def arc_count(g: nx.DiGraph) -> int:
    return sum(c for _, _, c in g.edges(data="count"))


def is_strongly_connected(T: TransitionMatrix) -> bool:
    if T.dim == 0:
        return False
    return nx.is_strongly_connected(directed_graph(T))


def special_row_indices(T: TransitionMatrix) -> list[int]:
    """Rows of the cubed-map matrix coming from the six long words."""
    if T.n is None or T.m is None:
        raise ValueError("matrix does not carry spine parameters")
    n, m = T.n, T.m
    return [T.index(x) for x in (ep(1), e(n), ep(m), e(n - 1), ep(m - 1), e(n - 2))]


def labels_of(edges: Iterable[EdgeId]) -> list[str]:
    return [x.label for x in edges]
