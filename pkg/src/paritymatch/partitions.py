"""Block partitions of G_n and the canonical matchings/labelings they carry.

Everything is indexed by pair: pair ``i`` is the left vertex u_i together
with the right vertex v_i.  Indices are 0-based in memory and 1-based in
JSON.  With parameters k, m the pair count is n = 4k(2m+1) + 3: m ordered
A-blocks and m ordered B-blocks of 4k pairs each, plus an unordered set C of
4k+3 pairs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import BLUE, RED, Edge, Labeling, Matching, Parity


def partition_size(k: int, m: int) -> int:
    if k < 1 or m < 1:
        raise ValueError("k and m must be positive")
    return 4 * k * (2 * m + 1) + 3


def check_parameters(n: int | None, k: int, m: int) -> int:
    expected = partition_size(k, m)
    if n is not None and n != expected:
        raise ValueError(f"n={n} does not match 4k(2m+1)+3 = {expected} for k={k}, m={m}")
    return expected


def lb_pattern(k: int) -> tuple[int, ...]:
    """Labels of the 4k positions under the canonical B-side labeling."""
    return tuple(1 if (j < k or 2 * k <= j < 3 * k) else 0 for j in range(4 * k))


def cross_position(j: int, k: int) -> int:
    """Right partner position of left position j in the canonical A-side matching."""
    return j + 2 * k if j < 2 * k else j - 2 * k


# -- partial labelings ------------------------------------------------------

class PartialLabeling:
    """Labels for the vertices of some pairs; ``left[i]`` is u_i, ``right[i]`` is v_i."""

    __slots__ = ("left", "right")

    def __init__(self, left: Mapping[int, int], right: Mapping[int, int]):
        self.left = dict(left)
        self.right = dict(right)

    def __eq__(self, other) -> bool:
        return isinstance(other, PartialLabeling) and \
            self.left == other.left and self.right == other.right

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.left.items())), tuple(sorted(self.right.items()))))

    def __repr__(self) -> str:
        return f"PartialLabeling(left={self.left}, right={self.right})"

    @property
    def ones(self) -> int:
        return sum(self.left.values()) + sum(self.right.values())

    def union(self, other: "PartialLabeling") -> "PartialLabeling":
        for side, a, b in (("u", self.left, other.left), ("v", self.right, other.right)):
            clash = [i for i in a.keys() & b.keys() if a[i] != b[i]]
            if clash:
                raise ValueError(f"labelings disagree on {side}{clash[0] + 1}")
        return PartialLabeling({**self.left, **other.left}, {**self.right, **other.right})

    def restrict(self, pairs: Iterable[int]) -> "PartialLabeling":
        ps = set(pairs)
        return PartialLabeling({i: b for i, b in self.left.items() if i in ps},
                               {i: b for i, b in self.right.items() if i in ps})

    def to_labeling(self, n: int) -> Labeling:
        if set(self.left) != set(range(n)) or set(self.right) != set(range(n)):
            raise ValueError("partial labeling does not cover every vertex")
        return Labeling.from_sides([self.left[i] for i in range(n)],
                                   [self.right[i] for i in range(n)])

    @classmethod
    def from_labeling(cls, lab: Labeling, pairs: Iterable[int] | None = None) -> "PartialLabeling":
        ps = range(lab.n_left) if pairs is None else pairs
        return cls({i: lab.of_left(i) for i in ps}, {i: lab.of_right(i) for i in ps})


def edge_violates_partial(e: Edge, lab: PartialLabeling) -> bool:
    same = lab.left[e.u] == lab.right[e.v]
    return same if e.color is BLUE else not same


def count_violations(edges: Iterable[Edge], lab: PartialLabeling) -> int:
    return sum(1 for e in edges if edge_violates_partial(e, lab))


def is_consistent(edges: Iterable[Edge], lab: PartialLabeling) -> bool:
    return count_violations(edges, lab) == 0


def restrict_matching(m: Matching, pairs: Iterable[int]) -> Matching | None:
    """Edges of ``m`` inside the pairs, or None if that is not a perfect matching there."""
    ps = set(pairs)
    inside = [e for e in m.edges if e.u in ps and e.v in ps]
    if len(inside) != len(ps):
        return None
    return Matching.of(inside)


# -- canonical objects --------------------------------------------------------

def _check_block(d: Sequence[int]) -> int:
    if len(d) % 4 or len(d) == 0:
        raise ValueError(f"a block has 4k pairs, got {len(d)}")
    if len(set(d)) != len(d):
        raise ValueError("repeated pair in block")
    return len(d) // 4


def ma_matching(d: Sequence[int]) -> Matching:
    """All-red cross matching: position j <-> position j+2k, both directions."""
    k = _check_block(d)
    return Matching.of(Edge(d[j], d[cross_position(j, k)], RED) for j in range(4 * k))


def lb_labeling(d: Sequence[int]) -> PartialLabeling:
    k = _check_block(d)
    pat = lb_pattern(k)
    return PartialLabeling({p: pat[j] for j, p in enumerate(d)},
                           {p: pat[j] for j, p in enumerate(d)})


def canonical_block(d: Sequence[int]) -> tuple[Matching, PartialLabeling]:
    return ma_matching(d), lb_labeling(d)


def violation_core(h: Iterable[int]) -> tuple[Matching, PartialLabeling]:
    """Straight red edges on three pairs, left labeled 1 and right 0."""
    hs = sorted(set(h))
    if len(hs) != 3:
        raise ValueError(f"core needs exactly 3 pairs, got {len(hs)}")
    return (Matching.of(Edge(p, p, RED) for p in hs),
            PartialLabeling({p: 1 for p in hs}, {p: 0 for p in hs}))


def canonical_C(c: Sequence[int]) -> tuple[Matching, PartialLabeling]:
    """Straight red matching on the ordered C; first 2k+3 pairs (u=1, v=0), last 2k (u=0, v=1)."""
    if (len(c) - 3) % 4 or len(c) < 7:
        raise ValueError(f"ordered C has 4k+3 pairs with k >= 1, got {len(c)}")
    if len(set(c)) != len(c):
        raise ValueError("repeated pair in C")
    k = (len(c) - 3) // 4
    head = 2 * k + 3
    left = {p: (1 if j < head else 0) for j, p in enumerate(c)}
    right = {p: (0 if j < head else 1) for j, p in enumerate(c)}
    return Matching.of(Edge(p, p, RED) for p in c), PartialLabeling(left, right)


def consistent_block_matchings(d: Sequence[int]) -> list[Matching]:
    """All perfect matchings of the block consistent with its canonical labeling.

    Each (u, v) pair admits exactly one consistent color, so these are the
    (4k)! permutations with colors forced.
    """
    k = _check_block(d)
    pat = lb_pattern(k)
    out = []
    for perm in itertools.permutations(range(4 * k)):
        out.append(Matching.of(
            Edge(d[j], d[perm[j]], RED if pat[j] == pat[perm[j]] else BLUE)
            for j in range(4 * k)))
    return out


def consistent_block_labelings(d: Sequence[int]) -> list[PartialLabeling]:
    """All 2^{4k} labelings of the block consistent with its canonical matching."""
    k = _check_block(d)
    out = []
    for bits in itertools.product((0, 1), repeat=4 * k):
        left = {d[j]: bits[j] for j in range(4 * k)}
        right = {d[cross_position(j, k)]: bits[j] for j in range(4 * k)}
        out.append(PartialLabeling(left, right))
    return out


# -- partitions and triples ---------------------------------------------------

@dataclass(frozen=True)
class Partition:
    k: int
    m: int
    a_blocks: tuple[tuple[int, ...], ...]
    b_blocks: tuple[tuple[int, ...], ...]
    c_set: frozenset[int]

    def __post_init__(self):
        n = partition_size(self.k, self.m)
        if len(self.a_blocks) != self.m or len(self.b_blocks) != self.m:
            raise ValueError(f"expected {self.m} A-blocks and {self.m} B-blocks")
        for blk in self.a_blocks + self.b_blocks:
            if len(blk) != 4 * self.k:
                raise ValueError(f"block {blk} does not have 4k = {4 * self.k} pairs")
        if len(self.c_set) != 4 * self.k + 3:
            raise ValueError(f"C must have 4k+3 = {4 * self.k + 3} pairs")
        seen = [p for blk in self.a_blocks + self.b_blocks for p in blk] + list(self.c_set)
        if sorted(seen) != list(range(n)):
            raise ValueError("blocks and C do not partition the pairs exactly")

    @property
    def n(self) -> int:
        return partition_size(self.k, self.m)

    def group_of(self) -> np.ndarray:
        """Group id per pair: A_i -> i, B_i -> m + i, C -> 2m (0-based block i)."""
        g = np.empty(self.n, dtype=np.int64)
        for i, blk in enumerate(self.a_blocks):
            g[list(blk)] = i
        for i, blk in enumerate(self.b_blocks):
            g[list(blk)] = self.m + i
        g[sorted(self.c_set)] = 2 * self.m
        return g

    def with_a_block(self, i: int, blk: Sequence[int], c_set: Iterable[int]) -> "Partition":
        a = list(self.a_blocks)
        a[i] = tuple(blk)
        return Partition(self.k, self.m, tuple(a), self.b_blocks, frozenset(c_set))

    def with_b_block(self, i: int, blk: Sequence[int], c_set: Iterable[int]) -> "Partition":
        b = list(self.b_blocks)
        b[i] = tuple(blk)
        return Partition(self.k, self.m, self.a_blocks, tuple(b), frozenset(c_set))

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "A": [[p + 1 for p in blk] for blk in self.a_blocks],
            "B": [[p + 1 for p in blk] for blk in self.b_blocks],
            "C": sorted(p + 1 for p in self.c_set),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Partition":
        return cls(int(obj["k"]), int(obj["m"]),
                   tuple(tuple(p - 1 for p in blk) for blk in obj["A"]),
                   tuple(tuple(p - 1 for p in blk) for blk in obj["B"]),
                   frozenset(p - 1 for p in obj["C"]))


def partition_from_order(order: Sequence[int], k: int, m: int) -> Partition:
    """Cut a sequence of all pairs into A-blocks, B-blocks and C, in that order."""
    w = 4 * k
    a = tuple(tuple(int(p) for p in order[i * w:(i + 1) * w]) for i in range(m))
    b = tuple(tuple(int(p) for p in order[(m + i) * w:(m + i + 1) * w]) for i in range(m))
    c = frozenset(int(p) for p in order[2 * m * w:])
    return Partition(k, m, a, b, c)


def sample_partition(n: int | None, k: int, m: int, seed) -> Partition:
    """Uniform partition; the same seed gives the same partition."""
    size = check_parameters(n, k, m)
    rng = np.random.default_rng(seed)
    return partition_from_order(rng.permutation(size), k, m)


@dataclass(frozen=True)
class Triple:
    partition: Partition
    h: frozenset[int]
    d: tuple[int, ...]

    def __post_init__(self):
        k = self.partition.k
        if len(self.h) != 3:
            raise ValueError("H must have 3 pairs")
        if len(self.d) != 4 * k or len(set(self.d)) != 4 * k:
            raise ValueError(f"D must be an ordering of 4k = {4 * k} distinct pairs")
        if set(self.h) & set(self.d) or set(self.h) | set(self.d) != set(self.partition.c_set):
            raise ValueError("H and D must split C")

    @property
    def d1(self) -> tuple[int, ...]:
        return self.d[:2 * self.partition.k]

    @property
    def d2(self) -> tuple[int, ...]:
        return self.d[2 * self.partition.k:]

    def core(self) -> tuple[Matching, PartialLabeling]:
        """The C-part objects M_3(H) u M_A(D) and L_3(H) u L_B(D)."""
        mh, lh = violation_core(self.h)
        md, ld = canonical_block(self.d)
        return Matching.of(list(mh.edges) + list(md.edges)), lh.union(ld)

    def to_json(self) -> dict:
        return {"T": self.partition.to_json(), "H": sorted(p + 1 for p in self.h),
                "D": [p + 1 for p in self.d]}


# -- membership, straight from the definitions ----------------------------------

def matching_in_M_all(t: Partition, m: Matching, c_part: Matching | None = None) -> bool:
    """A-blocks canonical, B-blocks consistent with L_B, C perfect with odd red count."""
    if sorted(e.u for e in m.edges) != list(range(t.n)) or \
            sorted(e.v for e in m.edges) != list(range(t.n)):
        return False
    for blk in t.a_blocks:
        if restrict_matching(m, blk) != ma_matching(blk):
            return False
    for blk in t.b_blocks:
        sub = restrict_matching(m, blk)
        if sub is None or not is_consistent(sub.edges, lb_labeling(blk)):
            return False
    mc = restrict_matching(m, t.c_set)
    if mc is None or mc.red_count % 2 != 1:
        return False
    return c_part is None or mc == c_part


def labeling_in_L_all(t: Partition, lab: Labeling, c_part: PartialLabeling | None = None) -> bool:
    """B-blocks canonical, A-blocks consistent with M_A, odd ones-count on C."""
    if lab.n_left != t.n or lab.n_right != t.n:
        return False
    full = PartialLabeling.from_labeling(lab)
    for blk in t.b_blocks:
        if full.restrict(blk) != lb_labeling(blk):
            return False
    for blk in t.a_blocks:
        if not is_consistent(ma_matching(blk).edges, full.restrict(blk)):
            return False
    lc = full.restrict(t.c_set)
    if lc.ones % 2 != 1:
        return False
    return c_part is None or lc == c_part


def full_labeling_parity(lab: Labeling) -> Parity:
    """Class of the labeling: ones-count congruent to n means the odd target."""
    return Parity.ODD if (lab.ones - lab.n_left) % 2 == 0 else Parity.EVEN


def c_k(k: int) -> int:
    """Consistent block matchings per block: (4k)!."""
    return math.factorial(4 * k)

