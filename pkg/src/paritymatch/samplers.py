"""Vectorised samplers for 3-violation and (4k+3)-violation pairs.

A batch stores, per sample, the pair sequence ``order`` (A-blocks, then
B-blocks, then C) together with the full matching (``mate``/``color`` per
left vertex) and labeling (``lu``/``lv``).  For the 3-violation samplers the
C segment of ``order`` is H (3 pairs, unordered) followed by D (4k pairs, in
order); for the (4k+3) sampler it is the ordered C.

Streams are cut into fixed-size chunks; chunk c of seed s draws from
``default_rng([s, c])``, so output does not depend on how many workers run.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .core import Edge, Labeling, Matching, Color
from .family import PermutationFamily
from .partitions import (
    Partition,
    Triple,
    check_parameters,
    cross_position,
    lb_pattern,
    partition_from_order,
    partition_size,
)
from .polytope import SCHEMA_VERSION

KINDS = ("mu3", "mu4k3", "mu3_alt")
CHUNK = 4096


@dataclass
class SampleBatch:
    kind: str
    k: int
    m: int
    seed: object
    order: np.ndarray
    mate: np.ndarray
    color: np.ndarray
    lu: np.ndarray
    lv: np.ndarray
    violations: np.ndarray
    offset: int = 0

    def __len__(self) -> int:
        return self.order.shape[0]

    @property
    def n(self) -> int:
        return self.order.shape[1]

    def partition(self, i: int) -> Partition:
        return partition_from_order(self.order[i], self.k, self.m)

    def c_segment(self, i: int) -> tuple[int, ...]:
        return tuple(int(p) for p in self.order[i, 8 * self.k * self.m:])

    def triple(self, i: int) -> Triple | None:
        if self.kind == "mu4k3":
            return None
        c = self.c_segment(i)
        return Triple(self.partition(i), frozenset(c[:3]), c[3:])

    def matching(self, i: int) -> Matching:
        return Matching.of(Edge(u, int(self.mate[i, u]), Color(int(self.color[i, u])))
                           for u in range(self.n))

    def labeling(self, i: int) -> Labeling:
        return Labeling.from_sides(self.lu[i].tolist(), self.lv[i].tolist())

    def record(self, i: int) -> dict:
        rec = {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "seed": self.seed,
            "index": self.offset + i,
            "T": self.partition(i).to_json(),
        }
        c = [p + 1 for p in self.c_segment(i)]
        if self.kind == "mu4k3":
            rec["C"] = c
        else:
            rec["H"] = sorted(c[:3])
            rec["D"] = c[3:]
        rec["M"] = [[u + 1, int(self.mate[i, u]) + 1, "R" if self.color[i, u] == 0 else "B"]
                    for u in range(self.n)]
        rec["L"] = "".join(map(str, self.lu[i].tolist())) + "".join(map(str, self.lv[i].tolist()))
        rec["violations"] = int(self.violations[i])
        return rec


def _check_kind(kind: str, family: PermutationFamily | None, k: int) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown sampler {kind!r}; choose from {KINDS}")
    if kind == "mu3_alt":
        if family is None:
            raise ValueError("the alternative sampler needs a permutation family")
        if family.k != k:
            raise ValueError(f"family built for k={family.k}, sampler asked for k={k}")


def draw_batch(kind: str, k: int, m: int, count: int, rng: np.random.Generator,
               family: PermutationFamily | None = None, seed=None, offset: int = 0) -> SampleBatch:
    _check_kind(kind, family, k)
    n = partition_size(k, m)
    w = 4 * k
    order = np.argsort(rng.random((count, n)), axis=1)
    base = 2 * m * w
    if kind == "mu3_alt":
        _, pos, rest, slot = family.arrays()
        choice = rng.integers(len(pos), size=count)
        cpart = order[:, base:]
        f_seg = cpart[:, :2 * k + 3]
        d2 = cpart[:, 2 * k + 3:]
        h = np.take_along_axis(f_seg, pos[choice], axis=1)
        remaining = np.take_along_axis(f_seg, rest[choice], axis=1)
        d1 = np.empty_like(remaining)
        np.put_along_axis(d1, slot[choice], remaining, axis=1)
        order[:, base:] = np.concatenate([h, d1, d2], axis=1)

    mate = np.empty((count, n), dtype=np.int64)
    color = np.zeros((count, n), dtype=np.int8)
    lu = np.empty((count, n), dtype=np.int8)
    lv = np.empty((count, n), dtype=np.int8)
    cross = np.array([cross_position(j, k) for j in range(w)])
    pat = np.array(lb_pattern(k), dtype=np.int8)
    r3 = np.arange(count)[:, None, None]
    r2 = np.arange(count)[:, None]

    a = order[:, :m * w].reshape(count, m, w)
    b = order[:, m * w:base].reshape(count, m, w)
    # A-blocks: canonical matching, any consistent labeling
    mate[r3, a] = a[..., cross]
    bits = rng.integers(0, 2, size=(count, m, w), dtype=np.int8)
    lu[r3, a] = bits
    lv[r3, a[..., cross]] = bits
    # B-blocks: canonical labeling, any consistent matching
    pi = np.argsort(rng.random((count, m, w)), axis=-1)
    mate[r3, b] = np.take_along_axis(b, pi, axis=-1)
    color[r3, b] = (pat[None, None, :] != pat[pi]).astype(np.int8)
    lu[r3, b] = pat
    lv[r3, b] = pat
    # C
    c = order[:, base:]
    if kind == "mu4k3":
        head = 2 * k + 3
        mate[r2, c] = c
        lu[r2, c[:, :head]] = 1
        lv[r2, c[:, :head]] = 0
        lu[r2, c[:, head:]] = 0
        lv[r2, c[:, head:]] = 1
    else:
        h, d = c[:, :3], c[:, 3:]
        mate[r2, h] = h
        lu[r2, h] = 1
        lv[r2, h] = 0
        mate[r2, d] = d[:, cross]
        lu[r2, d] = pat
        lv[r2, d] = pat

    return SampleBatch(kind, k, m, seed, order, mate, color, lu, lv,
                       batch_violations(mate, color, lu, lv), offset)


def batch_violations(mate, color, lu, lv) -> np.ndarray:
    right = np.take_along_axis(lv, mate, axis=1)
    same = lu == right
    return np.where(color == 1, same, ~same).sum(axis=1)


def iter_batches(kind: str, k: int, m: int, count: int, seed: int,
                 family: PermutationFamily | None = None, threads: int = 1,
                 chunk: int = CHUNK) -> Iterator[SampleBatch]:
    """Deterministic chunked stream; ``threads`` only changes wall time."""
    _check_kind(kind, family, k)
    if count < 0:
        raise ValueError("count must be nonnegative")
    jobs = [(c, min(chunk, count - c * chunk)) for c in range(math.ceil(count / chunk))]

    def run(job):
        c, size = job
        return draw_batch(kind, k, m, size, np.random.default_rng([seed, c]), family,
                          seed=seed, offset=c * chunk)

    if threads <= 1 or len(jobs) <= 1:
        yield from map(run, jobs)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(run, jobs)


def _single(kind: str, n: int | None, k: int, m: int, seed: int,
            family: PermutationFamily | None = None) -> SampleBatch:
    check_parameters(n, k, m)
    return next(iter_batches(kind, k, m, 1, seed, family))


def sample_mu3(n: int | None, k: int, m: int, seed: int) -> tuple[Matching, Labeling, Triple]:
    b = _single("mu3", n, k, m, seed)
    return b.matching(0), b.labeling(0), b.triple(0)


def sample_mu4k3(n: int | None, k: int, m: int, seed: int) -> tuple[Matching, Labeling, Partition, tuple[int, ...]]:
    b = _single("mu4k3", n, k, m, seed)
    return b.matching(0), b.labeling(0), b.partition(0), b.c_segment(0)


def alternative_sample_mu3(n: int | None, k: int, m: int, family: PermutationFamily,
                           seed: int) -> tuple[Matching, Labeling, Triple]:
    b = _single("mu3_alt", n, k, m, seed, family)
    return b.matching(0), b.labeling(0), b.triple(0)


# -- batch membership, from the block definitions -----------------------------

def batch_membership(b: SampleBatch) -> np.ndarray:
    """Per sample: M in M_all(T), L in L_all(T), and the C part matches the sampler."""
    k, m, n, cnt = b.k, b.m, b.n, len(b)
    w = 4 * k
    base = 2 * m * w
    rows = np.arange(cnt)[:, None]
    ok = (np.sort(b.mate, axis=1) == np.arange(n)).all(axis=1)
    ok &= np.isin(b.color, (0, 1)).all(axis=1)
    ok &= np.isin(b.lu, (0, 1)).all(axis=1) & np.isin(b.lv, (0, 1)).all(axis=1)
    ok &= (np.sort(b.order, axis=1) == np.arange(n)).all(axis=1)

    group_tpl = np.concatenate([np.repeat(np.arange(2 * m), w), np.full(w + 3, 2 * m)])
    group = np.empty((cnt, n), dtype=np.int64)
    group[rows, b.order] = group_tpl
    mate_group = np.take_along_axis(group, b.mate, axis=1)
    ok &= (mate_group == group).all(axis=1)

    right_label = np.take_along_axis(b.lv, b.mate, axis=1)
    consistent = np.where(b.color == 0, b.lu == right_label, b.lu != right_label)
    pat = np.array(lb_pattern(k), dtype=np.int8)
    for i in range(m):
        a_blk = b.order[:, i * w:(i + 1) * w]
        b_blk = b.order[:, (m + i) * w:(m + i + 1) * w]
        for j in range(w):
            x = cross_position(j, k)
            ok &= np.take_along_axis(b.mate, a_blk[:, j:j + 1], 1)[:, 0] == a_blk[:, x]
            ok &= np.take_along_axis(b.color, a_blk[:, j:j + 1], 1)[:, 0] == 0
            ok &= np.take_along_axis(b.lu, a_blk[:, j:j + 1], 1)[:, 0] == \
                np.take_along_axis(b.lv, a_blk[:, x:x + 1], 1)[:, 0]
            ok &= np.take_along_axis(b.lu, b_blk[:, j:j + 1], 1)[:, 0] == pat[j]
            ok &= np.take_along_axis(b.lv, b_blk[:, j:j + 1], 1)[:, 0] == pat[j]
        ok &= np.take_along_axis(consistent, b_blk, 1).all(axis=1)

    c = b.order[:, base:]
    c_red = (np.take_along_axis(b.color, c, 1) == 0).sum(axis=1)
    c_ones = np.take_along_axis(b.lu, c, 1).sum(axis=1) + np.take_along_axis(b.lv, c, 1).sum(axis=1)
    ok &= (c_red % 2 == 1) & (c_ones % 2 == 1)

    c_mate = np.take_along_axis(b.mate, c, 1)
    c_col = np.take_along_axis(b.color, c, 1)
    c_lu = np.take_along_axis(b.lu, c, 1)
    c_lv = np.take_along_axis(b.lv, c, 1)
    if b.kind == "mu4k3":
        head = 2 * k + 3
        ok &= (c_mate == c).all(axis=1) & (c_col == 0).all(axis=1)
        ok &= (c_lu[:, :head] == 1).all(axis=1) & (c_lv[:, :head] == 0).all(axis=1)
        ok &= (c_lu[:, head:] == 0).all(axis=1) & (c_lv[:, head:] == 1).all(axis=1)
    else:
        d = c[:, 3:]
        ok &= (c_mate[:, :3] == c[:, :3]).all(axis=1) & (c_col[:, :3] == 0).all(axis=1)
        ok &= (c_lu[:, :3] == 1).all(axis=1) & (c_lv[:, :3] == 0).all(axis=1)
        cross = [cross_position(j, k) for j in range(w)]
        ok &= (c_mate[:, 3:] == d[:, cross]).all(axis=1) & (c_col[:, 3:] == 0).all(axis=1)
        ok &= (c_lu[:, 3:] == pat).all(axis=1) & (c_lv[:, 3:] == pat).all(axis=1)
    return ok


# -- exact distributions over (H, D) ------------------------------------------

def hd_distribution_direct(c: Sequence[int], k: int) -> dict[tuple[frozenset, tuple], Fraction]:
    """Pick 3 pairs of C uniformly, order the other 4k uniformly."""
    if len(c) != 4 * k + 3:
        raise ValueError("C must have 4k+3 pairs")
    total = math.comb(4 * k + 3, 3) * math.factorial(4 * k)
    out: dict = {}
    for h in itertools.combinations(c, 3):
        rest = [p for p in c if p not in h]
        for d in itertools.permutations(rest):
            key = (frozenset(h), d)
            out[key] = out.get(key, 0) + 1
    return {key: Fraction(v, total) for key, v in out.items()}


def hd_distribution_alternative(c: Sequence[int], k: int,
                                family: PermutationFamily) -> dict[tuple[frozenset, tuple], Fraction]:
    """Order C as F + D2, pick H inside F, place F - H through sigma_pos(H)."""
    if len(c) != 4 * k + 3:
        raise ValueError("C must have 4k+3 pairs")
    head = 2 * k + 3
    positions = list(itertools.combinations(range(1, head + 1), 3))
    total = math.factorial(4 * k + 3) * len(positions)
    out: dict = {}
    for order in itertools.permutations(c):
        f_seg, d2 = order[:head], order[head:]
        for pos in positions:
            h = frozenset(f_seg[p - 1] for p in pos)
            d1 = [None] * (2 * k)
            s = family.sigma[pos]
            for p in range(1, head + 1):
                if p not in pos:
                    d1[s[p] - 1] = f_seg[p - 1]
            key = (h, tuple(d1) + tuple(d2))
            out[key] = out.get(key, 0) + 1
    return {key: Fraction(v, total) for key, v in out.items()}
