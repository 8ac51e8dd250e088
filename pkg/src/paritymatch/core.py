"""Colored bipartite graphs, labelings, matchings and violation sets.

Vertices are 0-based internally: left vertex ``u`` is ``u`` and right vertex
``v`` is ``v``.  In a labeling vector the left vertices come first, so right
vertex ``v`` sits at position ``n_left + v``.  File formats are 1-based; the
conversion lives in :mod:`paritymatch.formats`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple


class Color(enum.IntEnum):
    RED = 0
    BLUE = 1

    @property
    def letter(self) -> str:
        return "R" if self is Color.RED else "B"

    @classmethod
    def from_letter(cls, s: str) -> "Color":
        s = s.strip().upper()
        if s in ("R", "RED"):
            return cls.RED
        if s in ("B", "BLUE"):
            return cls.BLUE
        raise ValueError(f"unknown color {s!r}")


RED = Color.RED
BLUE = Color.BLUE


class Parity(str, enum.Enum):
    """Requested parity of the number of red edges in a perfect matching."""

    ODD = "odd"
    EVEN = "even"

    @classmethod
    def of(cls, count: int) -> "Parity":
        return cls.ODD if count % 2 else cls.EVEN

    def flipped(self) -> "Parity":
        return Parity.EVEN if self is Parity.ODD else Parity.ODD


def labeling_parity_ok(ones: int, n: int, target: Parity) -> bool:
    """Whether a labeling with ``ones`` ones belongs to L_all for ``target``.

    For odd-red targets the number of ones must have the parity of ``n``; for
    even-red targets it must have the other parity.
    """
    same = (ones - n) % 2 == 0
    return same if target is Parity.ODD else not same


class Edge(NamedTuple):
    u: int
    v: int
    color: Color

    @property
    def is_red(self) -> bool:
        return self.color is Color.RED

    def __str__(self) -> str:
        return f"(u{self.u + 1},v{self.v + 1},{self.color.letter})"


@dataclass(frozen=True)
class ColoredBipartiteGraph:
    n_left: int
    n_right: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n_left < 0 or self.n_right < 0:
            raise ValueError("vertex counts must be non-negative")
        edges = tuple(Edge(int(e[0]), int(e[1]), Color(e[2])) for e in self.edges)
        seen = set()
        for e in edges:
            if not (0 <= e.u < self.n_left and 0 <= e.v < self.n_right):
                raise ValueError(f"edge {e} references a missing vertex")
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
        object.__setattr__(self, "edges", edges)

    @property
    def n(self) -> int:
        if self.n_left != self.n_right:
            raise ValueError(
                f"graph is not balanced ({self.n_left} left, {self.n_right} right)")
        return self.n_left

    @property
    def is_square(self) -> bool:
        return self.n_left == self.n_right

    @cached_property
    def is_complete_double(self) -> bool:
        """True for G_n: every left/right pair joined by one red and one blue edge."""
        n = self.n_left
        return n >= 1 and self.n_right == n and len(self.edges) == 2 * n * n

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def left_adjacency(self) -> tuple[tuple[Edge, ...], ...]:
        """Edges at each left vertex, sorted by (v, color)."""
        adj: list[list[Edge]] = [[] for _ in range(self.n_left)]
        for e in self.edges:
            adj[e.u].append(e)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def right_adjacency(self) -> tuple[tuple[Edge, ...], ...]:
        adj: list[list[Edge]] = [[] for _ in range(self.n_right)]
        for e in self.edges:
            adj[e.v].append(e)
        return tuple(tuple(sorted(a)) for a in adj)

    def has_edge(self, e: Edge) -> bool:
        return e in self.edge_index

    def pair_colors(self) -> dict[tuple[int, int], tuple[Color, ...]]:
        out: dict[tuple[int, int], list[Color]] = {}
        for e in self.edges:
            out.setdefault((e.u, e.v), []).append(e.color)
        return {k: tuple(sorted(c)) for k, c in sorted(out.items())}

    def with_edges(self, edges: Iterable[Edge]) -> "ColoredBipartiteGraph":
        return ColoredBipartiteGraph(self.n_left, self.n_right, tuple(edges))


def build_complete_double(n: int) -> ColoredBipartiteGraph:
    """G_n: n + n vertices, one red and one blue edge between every pair."""
    if n < 1:
        raise ValueError("n must be at least 1")
    edges = tuple(Edge(u, v, c) for u in range(n) for v in range(n) for c in Color)
    return ColoredBipartiteGraph(n, n, edges)


@dataclass(frozen=True)
class Labeling:
    """0/1 values on all vertices, left side first.

    ``target`` is the declared parity class; when given, the ones-count is
    checked against it.  Labelings without a declared target are plain
    vertex colorings (useful for evaluating E_L on arbitrary inputs).
    """

    values: tuple[int, ...]
    n_left: int
    target: Parity | None = None

    def __post_init__(self):
        vals = tuple(int(x) for x in self.values)
        if any(x not in (0, 1) for x in vals):
            raise ValueError("labels must be 0 or 1")
        if not 0 <= self.n_left <= len(vals):
            raise ValueError("n_left out of range")
        object.__setattr__(self, "values", vals)
        if self.target is not None:
            object.__setattr__(self, "target", Parity(self.target))
            if 2 * self.n_left != len(vals):
                raise ValueError("parity class needs equal sides")
            if not labeling_parity_ok(sum(vals), self.n_left, self.target):
                raise ValueError(
                    f"{sum(vals)} ones is not valid for the {self.target.value}-red class "
                    f"with n={self.n_left}")

    @classmethod
    def from_sides(cls, left: Iterable[int], right: Iterable[int],
                   target: Parity | None = None) -> "Labeling":
        left = tuple(left)
        return cls(left + tuple(right), len(left), target)

    @property
    def n_right(self) -> int:
        return len(self.values) - self.n_left

    @property
    def left(self) -> tuple[int, ...]:
        return self.values[:self.n_left]

    @property
    def right(self) -> tuple[int, ...]:
        return self.values[self.n_left:]

    def of_left(self, u: int) -> int:
        return self.values[u]

    def of_right(self, v: int) -> int:
        return self.values[self.n_left + v]

    @property
    def ones(self) -> int:
        return sum(self.values)

    def is_valid_for(self, target: Parity) -> bool:
        return (self.n_left == self.n_right
                and labeling_parity_ok(self.ones, self.n_left, target))

    def complement(self) -> "Labeling":
        return Labeling(tuple(1 - x for x in self.values), self.n_left, self.target)

    def bitstring(self) -> str:
        return "".join(map(str, self.values))

    @classmethod
    def from_bitstring(cls, s: str, n_left: int | None = None,
                       target: Parity | None = None) -> "Labeling":
        s = s.strip()
        if n_left is None:
            if len(s) % 2:
                raise ValueError("odd-length bitstring needs an explicit n_left")
            n_left = len(s) // 2
        return cls(tuple(int(ch) for ch in s), n_left, target)


def edge_violates(e: Edge, labeling: Labeling) -> bool:
    """Blue edges violate equal endpoint labels, red edges unequal ones."""
    same = labeling.of_left(e.u) == labeling.of_right(e.v)
    return same if e.color is Color.BLUE else not same


@dataclass(frozen=True)
class Matching:
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        edges = frozenset(Edge(int(e[0]), int(e[1]), Color(e[2])) for e in self.edges)
        lefts = [e.u for e in edges]
        rights = [e.v for e in edges]
        if len(set(lefts)) != len(lefts) or len(set(rights)) != len(rights):
            raise ValueError("two matching edges share a vertex")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def of(cls, edges: Iterable[Edge]) -> "Matching":
        return cls(frozenset(edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.sorted_edges())

    def __contains__(self, e) -> bool:
        return e in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    @property
    def red_count(self) -> int:
        return sum(1 for e in self.edges if e.color is Color.RED)

    @property
    def parity(self) -> Parity:
        return Parity.of(self.red_count)

    def mate_of_left(self) -> dict[int, Edge]:
        return {e.u: e for e in self.edges}

    def mate_of_right(self) -> dict[int, Edge]:
        return {e.v: e for e in self.edges}

    def is_perfect(self, g: ColoredBipartiteGraph) -> bool:
        return (g.n_left == g.n_right == len(self.edges)
                and all(g.has_edge(e) for e in self.edges))

    def symmetric_difference(self, other: Iterable[Edge]) -> "Matching":
        return Matching(self.edges.symmetric_difference(frozenset(other)))


def violation_edges(g: ColoredBipartiteGraph, labeling: Labeling) -> frozenset[Edge]:
    """E_L: the edges of ``g`` that violate ``labeling``.

    Parity of the labeling is not checked here.
    """
    _check_sizes(g, labeling)
    return frozenset(e for e in g.edges if edge_violates(e, labeling))


def violation_count(m: Matching, labeling: Labeling, g: ColoredBipartiteGraph) -> int:
    """|M ∩ E_L| for a perfect matching ``m`` of ``g``."""
    _check_sizes(g, labeling)
    if not m.is_perfect(g):
        raise ValueError("violation_count needs a perfect matching of the graph")
    return sum(1 for e in m.edges if edge_violates(e, labeling))


def red_parity_identity(g: ColoredBipartiteGraph, m: Matching,
                        labeling: Labeling) -> tuple[int, int]:
    """Both sides of  #red(M) = n - |U1| - |V1| + 2x  for a consistent pair.

    ``x`` counts matching edges between left and right vertices labeled 1.
    """
    _check_sizes(g, labeling)
    if not m.is_perfect(g):
        raise ValueError("red_parity_identity needs a perfect matching")
    bad = [e for e in m.edges if edge_violates(e, labeling)]
    if bad:
        raise ValueError(f"matching has violating edges {sorted(bad)}")
    n = g.n
    u1 = sum(labeling.left)
    v1 = sum(labeling.right)
    x = sum(1 for e in m.edges if labeling.of_left(e.u) == 1 and labeling.of_right(e.v) == 1)
    return m.red_count, n - u1 - v1 + 2 * x


def _check_sizes(g: ColoredBipartiteGraph, labeling: Labeling) -> None:
    if labeling.n_left != g.n_left or labeling.n_right != g.n_right:
        raise ValueError(
            f"labeling covers {labeling.n_left}+{labeling.n_right} vertices, "
            f"graph has {g.n_left}+{g.n_right}")
