from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from paritymatch.classify import (
    ALL,
    NONE,
    ProductPredicate,
    at_most_power,
    block_predicate,
    classify_triple,
    conditional_probability,
    iter_completions,
)
from paritymatch.oracle import CapExceeded
from paritymatch.partitions import (
    Triple,
    consistent_block_labelings,
    consistent_block_matchings,
    labeling_in_L_all,
    ma_matching,
    matching_in_M_all,
    restrict_matching,
    sample_partition,
)


def triple_for(seed, m=1):
    t = sample_partition(None, 1, m, seed)
    c = sorted(t.c_set)
    return Triple(t, frozenset(c[:3]), tuple(c[3:]))


def test_completions_are_members():
    tr = triple_for(0)
    t = tr.partition
    mc, lc = tr.core()
    ms = list(iter_completions(t, mc))
    labs = list(iter_completions(t, lc))
    assert len(ms) == 24 and len(set(ms)) == 24
    assert len(labs) == 16
    assert all(matching_in_M_all(t, m, mc) for m in ms)
    assert all(labeling_in_L_all(t, l, lc) for l in labs)


def test_trivial_predicates():
    tr = triple_for(1)
    mc, lc = tr.core()
    assert conditional_probability(tr.partition, mc, ALL) == 1
    assert conditional_probability(tr.partition, lc, NONE) == 0
    assert classify_triple(tr, ALL, ALL).good
    assert classify_triple(tr, NONE, ALL).small


def test_canonical_b_block_probability():
    tr = triple_for(2)
    t = tr.partition
    blk = t.b_blocks[0]
    pred = block_predicate(blk, [ma_matching(blk)], "matching")
    mc, _ = tr.core()
    assert conditional_probability(t, mc, pred) == Fraction(1, 24)
    assert pred.factorised_probability(t, mc) == Fraction(1, 24)


@given(st.integers(0, 10**6), st.integers(0, 2**24 - 1), st.integers(0, 2**16 - 1))
def test_product_routes_agree(seed, mask_m, mask_l):
    tr = triple_for(seed)
    t = tr.partition
    mc, lc = tr.core()
    b = t.b_blocks[0]
    a = t.a_blocks[0]
    allowed_m = [x for i, x in enumerate(consistent_block_matchings(b)) if mask_m >> i & 1]
    allowed_l = [x for i, x in enumerate(consistent_block_labelings(a)) if mask_l >> i & 1]
    pm = block_predicate(b, allowed_m, "matching")
    pl = block_predicate(a, allowed_l, "labeling")
    assert conditional_probability(t, mc, pm) == pm.factorised_probability(t, mc) == \
        Fraction(len(allowed_m), 24)
    assert conditional_probability(t, lc, pl) == pl.factorised_probability(t, lc) == \
        Fraction(len(allowed_l), 16)


def test_product_routes_agree_over_two_blocks():
    tr = triple_for(3, m=2)
    t = tr.partition
    mc, _ = tr.core()
    rng = np.random.default_rng(0)
    parts = {}
    for blk in t.b_blocks:
        opts = consistent_block_matchings(blk)
        parts[tuple(blk)] = frozenset(o for o in opts if rng.random() < 0.5)
    pred = ProductPredicate("matching", parts)
    assert conditional_probability(t, mc, pred) == pred.factorised_probability(t, mc)


def test_c_dependent_rectangle_is_bad():
    tr = triple_for(4)
    mc, _ = tr.core()
    c = sorted(tr.partition.c_set)

    def same_c(m):
        return restrict_matching(m, c) == mc

    cls = classify_triple(tr, same_c, ALL)
    assert cls.bad and cls.p_m == 1 and not cls.m_good and cls.l_good


def test_log_space_comparison():
    assert at_most_power(Fraction(1, 2 ** 5000), -4999)
    assert not at_most_power(Fraction(1, 2 ** 5000), -5001)
    assert at_most_power(Fraction(0), -1)
    assert at_most_power(Fraction(1, 2), -1)


def test_enumeration_cap():
    tr = triple_for(5, m=2)
    mc, _ = tr.core()
    with pytest.raises(CapExceeded):
        conditional_probability(tr.partition, mc, ALL, cap=100)
    with pytest.raises(TypeError):
        list(iter_completions(tr.partition, "nope"))
    with pytest.raises(ValueError):
        classify_triple(tr, ALL, ALL, epsilon=0)
