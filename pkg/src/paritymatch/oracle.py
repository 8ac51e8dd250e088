"""Brute-force ground truth at desk scale.

Nothing here is clever on purpose: perfect matchings are enumerated by plain
recursion over left vertices, labelings by counting through bit patterns.
Callers that exceed a cap get :class:`CapExceeded` rather than a silently
truncated answer.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import (
    BLUE,
    RED,
    ColoredBipartiteGraph,
    Edge,
    Labeling,
    Matching,
    Parity,
    labeling_parity_ok,
)

MATCHING_CAP = 8
LABELING_VERTEX_CAP = 24


class CapExceeded(RuntimeError):
    """An enumeration would exceed its configured size limit."""


def _check_matching_cap(g: ColoredBipartiteGraph, cap: int | None) -> None:
    if cap is not None and max(g.n_left, g.n_right) > cap:
        raise CapExceeded(
            f"perfect-matching enumeration capped at n={cap}, graph has "
            f"{g.n_left}+{g.n_right} vertices")


def iter_perfect_matchings(g: ColoredBipartiteGraph,
                           cap: int | None = MATCHING_CAP) -> Iterator[Matching]:
    """Yield perfect matchings in (permutation, colors) lexicographic order.

    The outer recursion assigns distinct right vertices to u1, u2, ...; for each
    complete assignment the available colors per pair are expanded with
    red before blue.
    """
    _check_matching_cap(g, cap)
    if g.n_left != g.n_right:
        return
    n = g.n_left
    colors = g.pair_colors()
    options = [sorted({v for (u, v) in colors if u == left}) for left in range(n)]
    used = [False] * n
    assignment: list[int] = []

    def rec(u: int):
        if u == n:
            yield tuple(assignment)
            return
        for v in options[u]:
            if not used[v]:
                used[v] = True
                assignment.append(v)
                yield from rec(u + 1)
                assignment.pop()
                used[v] = False

    for perm in rec(0):
        per_pair = [colors[(u, v)] for u, v in enumerate(perm)]
        for choice in itertools.product(*per_pair):
            yield Matching.of(Edge(u, v, c) for u, (v, c) in enumerate(zip(perm, choice)))


def enumerate_perfect_matchings(g: ColoredBipartiteGraph,
                                cap: int | None = MATCHING_CAP) -> list[Matching]:
    return list(iter_perfect_matchings(g, cap))


def enumerate_exact_k(g: ColoredBipartiteGraph, k: int,
                      cap: int | None = MATCHING_CAP) -> list[Matching]:
    """Perfect matchings with exactly ``k`` red edges."""
    return [m for m in iter_perfect_matchings(g, cap) if m.red_count == k]


def iter_labelings(n: int, target: Parity,
                   cap: int | None = LABELING_VERTEX_CAP) -> Iterator[Labeling]:
    """All labelings of G_n's 2n vertices in the class of ``target``.

    Order: bitstrings ``u1..un v1..vn`` read as binary numbers, ascending.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if cap is not None and 2 * n > cap:
        raise CapExceeded(f"labeling enumeration capped at {cap} vertices, asked for {2 * n}")
    target = Parity(target)
    width = 2 * n
    for code in range(1 << width):
        ones = code.bit_count()
        if labeling_parity_ok(ones, n, target):
            bits = tuple((code >> (width - 1 - i)) & 1 for i in range(width))
            yield Labeling(bits, n, target)


def enumerate_labelings(n: int, target: Parity,
                        cap: int | None = LABELING_VERTEX_CAP) -> list[Labeling]:
    return list(iter_labelings(n, target, cap))


@functools.lru_cache(maxsize=32)
def labeling_table(n: int, target: Parity,
                   cap: int | None = LABELING_VERTEX_CAP) -> tuple[Labeling, ...]:
    """Cached tuple of :func:`iter_labelings` output (labelings are immutable)."""
    return tuple(iter_labelings(n, Parity(target), cap))


def brute_force_parity_decision(g: ColoredBipartiteGraph, target: Parity,
                                cap: int | None = MATCHING_CAP) -> bool:
    """True iff some perfect matching has the requested red parity."""
    target = Parity(target)
    return any(m.parity is target for m in iter_perfect_matchings(g, cap))


def brute_force_relevant_edges(g: ColoredBipartiteGraph,
                               cap: int | None = MATCHING_CAP) -> frozenset[Edge]:
    """Edges that lie in at least one perfect matching."""
    out: set[Edge] = set()
    for m in iter_perfect_matchings(g, cap):
        out.update(m.edges)
    return frozenset(out)


# -- gadget reduction -------------------------------------------------------

@dataclass(frozen=True)
class PairGadget:
    """New vertices and edges replacing one red/blue parallel pair."""

    u: int
    v: int
    x_red: int      # right side
    y_red: int      # left side
    x_blue: int     # right side
    y_blue: int     # left side

    @property
    def edges(self) -> tuple[Edge, ...]:
        return (
            Edge(self.u, self.x_red, RED),
            Edge(self.y_red, self.x_red, BLUE),
            Edge(self.y_red, self.v, BLUE),
            Edge(self.u, self.x_blue, BLUE),
            Edge(self.y_blue, self.x_blue, BLUE),
            Edge(self.y_blue, self.v, BLUE),
        )

    def image(self, used: Edge | None) -> tuple[Edge, ...]:
        """Gadget edges taken when the pair contributes ``used`` (or nothing)."""
        if used is None:
            return (Edge(self.y_red, self.x_red, BLUE), Edge(self.y_blue, self.x_blue, BLUE))
        if used.color is BLUE:
            return (Edge(self.u, self.x_blue, BLUE), Edge(self.y_blue, self.v, BLUE),
                    Edge(self.y_red, self.x_red, BLUE))
        return (Edge(self.u, self.x_red, RED), Edge(self.y_red, self.v, BLUE),
                Edge(self.y_blue, self.x_blue, BLUE))


@dataclass(frozen=True)
class GadgetMap:
    original: ColoredBipartiteGraph
    simple_graph: ColoredBipartiteGraph
    pair_to_subdivision: dict[tuple[int, int], PairGadget]

    def map_matching(self, m: Matching) -> Matching:
        """Image of a perfect matching of the multigraph in the simple graph."""
        out: list[Edge] = []
        for e in m.edges:
            if (e.u, e.v) not in self.pair_to_subdivision:
                out.append(e)
        by_pair = {(e.u, e.v): e for e in m.edges}
        for pair, gadget in self.pair_to_subdivision.items():
            out.extend(gadget.image(by_pair.get(pair)))
        return Matching.of(out)


def gadget_simple_graph(g: ColoredBipartiteGraph) -> GadgetMap:
    """Subdivide every red/blue parallel pair into two length-three paths.

    The red path u - x_r - y_r - v keeps only (u, x_r) red; the blue path
    u - x_b - y_b - v is all blue.  New left vertices y_r, y_b and new right
    vertices x_r, x_b are numbered after the originals, pair by pair.
    """
    doubled = [pair for pair, cols in g.pair_colors().items() if len(cols) == 2]
    gadgets: dict[tuple[int, int], PairGadget] = {}
    next_left, next_right = g.n_left, g.n_right
    for (u, v) in doubled:
        gadgets[(u, v)] = PairGadget(u, v, x_red=next_right, y_red=next_left,
                                     x_blue=next_right + 1, y_blue=next_left + 1)
        next_left += 2
        next_right += 2
    edges = [e for e in g.edges if (e.u, e.v) not in gadgets]
    for gadget in gadgets.values():
        edges.extend(gadget.edges)
    simple = ColoredBipartiteGraph(next_left, next_right, tuple(edges))
    return GadgetMap(g, simple, gadgets)


def verify_gadget_bijection(gm: GadgetMap, cap: int | None = None) -> bool:
    """Check by enumeration that M -> M' is a red-count preserving bijection."""
    originals = list(iter_perfect_matchings(gm.original, MATCHING_CAP if cap is None else cap))
    simple_pms = set(iter_perfect_matchings(gm.simple_graph, None))
    images = []
    for m in originals:
        img = gm.map_matching(m)
        if img.red_count != m.red_count or img not in simple_pms:
            return False
        images.append(img)
    return len(set(images)) == len(images) == len(simple_pms)


# -- cycle parity -------------------------------------------------------------

def cycle_parity_exceptions(length: int) -> int:
    """Count (coloring, labeling) pairs of an even cycle where red and violation parities differ.

    Vertex i of the cycle is joined to vertex i+1 (mod length) by edge i;
    every 2-coloring of the edges is paired with every 0/1 labeling of the
    vertices.
    """
    if length < 2 or length % 2:
        raise ValueError("cycle length must be even and at least 2")
    if length > 16:
        raise CapExceeded(f"cycle enumeration capped at length 16, asked for {length}")
    codes = np.arange(1 << length, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(length)) & 1          # [code, position]
    red = bits                                                 # 1 = red edge
    labels = bits
    equal = labels == np.roll(labels, -1, axis=1)              # [labeling, edge]
    red_par = red.sum(axis=1) % 2
    bad = 0
    for lab_eq in equal:
        viol = np.where(red == 1, ~lab_eq, lab_eq).sum(axis=1) % 2
        bad += int((viol != red_par).sum())
    return bad
