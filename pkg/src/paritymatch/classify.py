"""Conditional rectangle probabilities over a partition, and triple classes.

A rectangle is a pair of predicates, one on full matchings and one on full
labelings.  Fixing the C part of a matching leaves the B-blocks free (each
one independently uniform over its (4k)! consistent matchings); fixing the C
part of a labeling leaves the A-blocks free (2^{4k} choices each).  The
probabilities below are exact rationals obtained by walking that product.

``ProductPredicate`` describes rectangles that constrain each block
separately; for those the probability also factorises block by block, which
gives an independent route to the same number.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .core import Labeling, Matching
from .oracle import CapExceeded
from .partitions import (
    PartialLabeling,
    Partition,
    Triple,
    consistent_block_labelings,
    consistent_block_matchings,
    lb_labeling,
    ma_matching,
    restrict_matching,
    violation_core,
)

ENUMERATION_CAP = 1_000_000

MatchingPredicate = Callable[[Matching], bool]
LabelingPredicate = Callable[[Labeling], bool]


def _always(_obj) -> bool:
    return True


def _never(_obj) -> bool:
    return False


ALL = _always
NONE = _never


def _free_count(t: Partition, fixed_is_matching: bool) -> int:
    per_block = math.factorial(4 * t.k) if fixed_is_matching else 2 ** (4 * t.k)
    return per_block ** t.m


def iter_completions(t: Partition, fixed_c, cap: int | None = ENUMERATION_CAP):
    """Every member of M_all(T, fixed_c) or L_all(T, fixed_c), depending on the type."""
    if isinstance(fixed_c, Matching):
        if set(e.u for e in fixed_c.edges) != set(t.c_set) or \
                set(e.v for e in fixed_c.edges) != set(t.c_set):
            raise ValueError("fixed C matching must be perfect on C")
        if cap is not None and _free_count(t, True) > cap:
            raise CapExceeded(f"{_free_count(t, True)} completions exceed the cap {cap}")
        fixed = list(fixed_c.edges)
        for blk in t.a_blocks:
            fixed.extend(ma_matching(blk).edges)
        choices = [consistent_block_matchings(blk) for blk in t.b_blocks]
        for combo in itertools.product(*choices):
            edges = list(fixed)
            for part in combo:
                edges.extend(part.edges)
            yield Matching.of(edges)
    elif isinstance(fixed_c, PartialLabeling):
        if set(fixed_c.left) != set(t.c_set) or set(fixed_c.right) != set(t.c_set):
            raise ValueError("fixed C labeling must cover C exactly")
        if cap is not None and _free_count(t, False) > cap:
            raise CapExceeded(f"{_free_count(t, False)} completions exceed the cap {cap}")
        base = fixed_c
        for blk in t.b_blocks:
            base = base.union(lb_labeling(blk))
        choices = [consistent_block_labelings(blk) for blk in t.a_blocks]
        for combo in itertools.product(*choices):
            lab = base
            for part in combo:
                lab = lab.union(part)
            yield lab.to_labeling(t.n)
    else:
        raise TypeError("fixed C object must be a Matching or a PartialLabeling")


def conditional_probability(t: Partition, fixed_c, predicate: Callable,
                            cap: int | None = ENUMERATION_CAP) -> Fraction:
    """Pr[predicate] for a uniform completion of ``fixed_c``, by full enumeration."""
    hit = total = 0
    for obj in iter_completions(t, fixed_c, cap):
        total += 1
        hit += bool(predicate(obj))
    return Fraction(hit, total)


# -- block-product rectangles ---------------------------------------------------

@dataclass(frozen=True)
class ProductPredicate:
    """Allowed restrictions per region; regions not listed are unconstrained.

    ``parts`` maps a region (a block as an ordered tuple of pairs, or the C
    set as a frozenset) to the allowed restricted objects: Matchings when
    ``kind == "matching"``, PartialLabelings when ``kind == "labeling"``.
    """

    kind: str
    parts: Mapping[object, frozenset]

    def __post_init__(self):
        if self.kind not in ("matching", "labeling"):
            raise ValueError("kind must be 'matching' or 'labeling'")

    def _restrict(self, obj, region):
        if self.kind == "matching":
            return restrict_matching(obj, region)
        return PartialLabeling.from_labeling(obj, region)

    def __call__(self, obj) -> bool:
        return all(self._restrict(obj, region) in allowed for region, allowed in self.parts.items())

    def factorised_probability(self, t: Partition, fixed_c) -> Fraction:
        """Same quantity as ``conditional_probability``, block by block."""
        is_matching = self.kind == "matching"
        if isinstance(fixed_c, Matching) != is_matching:
            raise TypeError("fixed C object does not match the predicate kind")
        free = t.b_blocks if is_matching else t.a_blocks
        fixed_blocks = t.a_blocks if is_matching else t.b_blocks
        p = Fraction(1)
        for region, allowed in self.parts.items():
            if isinstance(region, frozenset):
                if region != t.c_set:
                    raise ValueError("a set-valued region must be C itself")
                p *= fixed_c in allowed
            elif tuple(region) in free:
                options = (consistent_block_matchings(region) if is_matching
                           else consistent_block_labelings(region))
                p *= Fraction(sum(o in allowed for o in options), len(options))
            elif tuple(region) in fixed_blocks:
                canon = ma_matching(region) if is_matching else lb_labeling(region)
                p *= canon in allowed
            else:
                raise ValueError(f"region {region} is not a block of the partition")
        return p


# -- classification -----------------------------------------------------------

@dataclass(frozen=True)
class TripleClass:
    kind: str                  # "good", "small" or "bad"
    m_good: bool
    l_good: bool
    m_bad: bool
    l_bad: bool
    p_m: Fraction
    p_l: Fraction

    @property
    def good(self) -> bool:
        return self.kind == "good"

    @property
    def small(self) -> bool:
        return self.kind == "small"

    @property
    def bad(self) -> bool:
        return self.kind == "bad"


def at_most_power(p: Fraction, exponent: float) -> bool:
    """p <= 2^exponent, compared in log space so huge denominators are fine."""
    if p <= 0:
        return True
    return math.log2(p.numerator) - math.log2(p.denominator) <= exponent


def _close(p: Fraction, q: Fraction, eps: Fraction) -> bool:
    # 0 < q/(1+eps) <= p <= (1+eps) q
    return q > 0 and q <= (1 + eps) * p and p <= (1 + eps) * q


def c_objects(triple: Triple) -> tuple[Matching, PartialLabeling]:
    return triple.core()


def m_alternatives(triple: Triple) -> Iterable[Matching]:
    mh, _ = violation_core(triple.h)
    for alt in consistent_block_matchings(triple.d):
        yield Matching.of(list(mh.edges) + list(alt.edges))


def l_alternatives(triple: Triple) -> Iterable[PartialLabeling]:
    _, lh = violation_core(triple.h)
    for alt in consistent_block_labelings(triple.d):
        yield lh.union(alt)


def classify_triple(triple: Triple, m_pred: MatchingPredicate, l_pred: LabelingPredicate,
                    epsilon=Fraction(3, 10), delta: float = 0.1,
                    cap: int | None = ENUMERATION_CAP) -> TripleClass:
    """Good beats small; a triple that is neither is bad."""
    eps = Fraction(epsilon)
    if not 0 < eps:
        raise ValueError("epsilon must be positive")
    t = triple.partition
    mc, lc = c_objects(triple)
    p_m = conditional_probability(t, mc, m_pred, cap)
    p_l = conditional_probability(t, lc, l_pred, cap)
    m_good = all(_close(p_m, conditional_probability(t, alt, m_pred, cap), eps)
                 for alt in m_alternatives(triple))
    l_good = all(_close(p_l, conditional_probability(t, alt, l_pred, cap), eps)
                 for alt in l_alternatives(triple))
    small = at_most_power(p_m, -delta * t.m) or at_most_power(p_l, -delta * t.m)
    if m_good and l_good:
        kind = "good"
    elif small:
        kind = "small"
    else:
        kind = "bad"
    return TripleClass(kind, m_good, l_good, not small and not m_good,
                       not small and not l_good, p_m, p_l)


def block_predicate(region: Sequence[int], allowed: Iterable, kind: str) -> ProductPredicate:
    return ProductPredicate(kind, {tuple(region): frozenset(allowed)})
