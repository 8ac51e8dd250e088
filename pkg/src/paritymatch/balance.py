"""Balanced matchings/labelings, block swaps, and biased coordinates.

Block indices here are 1-based, with 0 standing for D itself, so that the
index sets J always contain 0 and a swap with index 0 is the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .core import Labeling, Matching
from .oracle import CapExceeded
from .partitions import (
    PartialLabeling,
    Triple,
    c_k,
    labeling_in_L_all,
    lb_labeling,
    ma_matching,
    matching_in_M_all,
    restrict_matching,
)

PRODUCT_CAP = 1 << 22


def j_labeling(triple: Triple, lab: Labeling) -> set[int]:
    """0 plus every i with L on A_i equal to L_B(A_i)."""
    full = PartialLabeling.from_labeling(lab)
    return {0} | {i + 1 for i, blk in enumerate(triple.partition.a_blocks)
                  if full.restrict(blk) == lb_labeling(blk)}


def j_matching(triple: Triple, m: Matching) -> set[int]:
    """0 plus every i with M on B_i equal to M_A(B_i)."""
    return {0} | {i + 1 for i, blk in enumerate(triple.partition.b_blocks)
                  if restrict_matching(m, blk) == ma_matching(blk)}


def _balanced(count: int, m: int, k: int) -> bool:
    return Fraction(count) >= Fraction(m, 2 * c_k(k))


def is_balanced_matching(triple: Triple, m: Matching) -> bool:
    t = triple.partition
    return _balanced(len(j_matching(triple, m)) - 1, t.m, t.k)


def is_balanced_labeling(triple: Triple, lab: Labeling) -> bool:
    t = triple.partition
    return _balanced(len(j_labeling(triple, lab)) - 1, t.m, t.k)


def generates(triple: Triple, m: Matching, lab: Labeling) -> bool:
    """Can the triple produce (M, L) under the 3-violation process?"""
    mc, lc = triple.core()
    t = triple.partition
    return matching_in_M_all(t, m, mc) and labeling_in_L_all(t, lab, lc)


def block_swap(triple: Triple, obj: Matching | Labeling, i: int) -> Triple:
    """Exchange D with A_i (given a labeling) or with B_i (given a matching)."""
    if isinstance(obj, Labeling):
        allowed, blocks, rebuild = j_labeling(triple, obj), triple.partition.a_blocks, \
            triple.partition.with_a_block
    elif isinstance(obj, Matching):
        allowed, blocks, rebuild = j_matching(triple, obj), triple.partition.b_blocks, \
            triple.partition.with_b_block
    else:
        raise TypeError("swap needs a Matching or a Labeling")
    if i not in allowed:
        raise ValueError(f"index {i} is not in J = {sorted(allowed)}")
    if i == 0:
        return triple
    old = blocks[i - 1]
    t2 = rebuild(i - 1, triple.d, set(triple.h) | set(old))
    return Triple(t2, triple.h, tuple(old))


def random_swap(triple: Triple, obj: Matching | Labeling, rng: np.random.Generator) -> tuple[Triple, int]:
    j = j_labeling(triple, obj) if isinstance(obj, Labeling) else j_matching(triple, obj)
    i = int(rng.choice(sorted(j)))
    return block_swap(triple, obj, i), i


# -- biased coordinates in a product space ----------------------------------------

@dataclass(frozen=True)
class BiasReport:
    p_y: Fraction
    conditional: tuple[tuple[Fraction, ...], ...]
    unbiased: frozenset[int]

    @property
    def biased(self) -> frozenset[int]:
        return frozenset(range(len(self.conditional))) - self.unbiased


def _indicator_array(block_sizes: Sequence[int], y) -> np.ndarray:
    shape = tuple(int(q) for q in block_sizes)
    total = math.prod(shape)
    if total > PRODUCT_CAP:
        raise CapExceeded(f"product space of size {total} exceeds the cap {PRODUCT_CAP}")
    if callable(y):
        arr = np.zeros(shape, dtype=bool)
        for idx in np.ndindex(*shape):
            arr[idx] = bool(y(idx))
        return arr
    arr = np.asarray(y, dtype=bool)
    if arr.shape != shape:
        raise ValueError(f"indicator has shape {arr.shape}, expected {shape}")
    return arr


def bias_report(block_sizes: Sequence[int], y: np.ndarray | Callable, alpha) -> BiasReport:
    """Exact Pr[Y] and Pr[Y | y_i = j] for every coordinate i and value j (0-based)."""
    if any(q < 1 for q in block_sizes):
        raise ValueError("every coordinate needs at least one value")
    arr = _indicator_array(block_sizes, y)
    a = Fraction(alpha)
    total = arr.size
    p = Fraction(int(arr.sum()), total)
    cond = []
    unbiased = set()
    for i, q in enumerate(arr.shape):
        counts = arr.sum(axis=tuple(ax for ax in range(arr.ndim) if ax != i))
        row = tuple(Fraction(int(c) * q, total) for c in counts)
        cond.append(row)
        if all(p <= (1 + a) * r and r <= (1 + a) * p for r in row):
            unbiased.add(i)
    return BiasReport(p, tuple(cond), frozenset(unbiased))


def unbiased_indices(block_sizes: Sequence[int], y: np.ndarray | Callable, alpha) -> set[int]:
    """Coordinates (0-based) whose every fixing keeps Pr[Y] within a factor 1+alpha."""
    return set(bias_report(block_sizes, y, alpha).unbiased)


# -- statistical check that swaps keep the triple distribution ------------------

def _swap_feature(triple: Triple, lab: Labeling) -> tuple[str, bool]:
    t = triple.partition
    where = "H" if 0 in triple.h else "D" if 0 in triple.d else \
        "A" if any(0 in blk for blk in t.a_blocks) else "B"
    return where, 1 in j_labeling(triple, lab)


@dataclass(frozen=True)
class SwapTest:
    table: np.ndarray          # rows: fresh / swapped, columns: feature cells
    labels: tuple
    statistic: float
    p_value: float


def swap_invariance_test(k: int = 1, m: int = 1, count: int = 4000, seed: int = 0) -> SwapTest:
    """Chi-square: swapped triples have the same feature law as fresh ones.

    One batch of 3-violation samples is swapped (index uniform over J(T, L));
    an independent batch serves as the reference.
    """
    from scipy.stats import chi2_contingency

    from .samplers import draw_batch

    rng = np.random.default_rng(seed)
    swapped_batch = draw_batch("mu3", k, m, count, rng)
    fresh_batch = draw_batch("mu3", k, m, count, rng)
    fresh, after = {}, {}
    for i in range(count):
        lab = swapped_batch.labeling(i)
        swapped, _ = random_swap(swapped_batch.triple(i), lab, rng)
        f1 = _swap_feature(swapped, lab)
        f0 = _swap_feature(fresh_batch.triple(i), fresh_batch.labeling(i))
        fresh[f0] = fresh.get(f0, 0) + 1
        after[f1] = after.get(f1, 0) + 1
    labels = tuple(sorted(set(fresh) | set(after)))
    table = np.array([[fresh.get(c, 0) for c in labels], [after.get(c, 0) for c in labels]])
    stat, p, _, _ = chi2_contingency(table)
    return SwapTest(table, labels, float(stat), float(p))
