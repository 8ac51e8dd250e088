import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from paritymatch.balance import (
    bias_report,
    block_swap,
    generates,
    is_balanced_labeling,
    is_balanced_matching,
    j_labeling,
    j_matching,
    random_swap,
    swap_invariance_test,
    unbiased_indices,
)
from paritymatch.core import Matching
from paritymatch.oracle import CapExceeded
from paritymatch.partitions import PartialLabeling, lb_labeling, ma_matching
from paritymatch.samplers import sample_mu3


def planted_pair(seed, m):
    """A 3-violation sample with every other A-block labeling and B-block matching made canonical."""
    mt, lab, tr = sample_mu3(None, 1, m, seed)
    t = tr.partition
    edges = {e.u: e for e in mt.edges}
    full = PartialLabeling.from_labeling(lab)
    for i, (a, b) in enumerate(zip(t.a_blocks, t.b_blocks)):
        if i % 2 == 0:
            for e in ma_matching(b).edges:
                edges[e.u] = e
            full = PartialLabeling({**full.left, **lb_labeling(a).left},
                                   {**full.right, **lb_labeling(a).right})
    return Matching.of(edges.values()), full.to_labeling(t.n), tr


@given(st.integers(0, 10**6), st.integers(1, 3))
def test_swaps_keep_generation(seed, m):
    mt, lab, tr = planted_pair(seed, m)
    assert generates(tr, mt, lab)
    jl, jm = j_labeling(tr, lab), j_matching(tr, mt)
    assert 0 in jl and 0 in jm and len(jl) > 1 and len(jm) > 1
    for i in jl:
        swapped = block_swap(tr, lab, i)
        assert generates(swapped, mt, lab)
        assert swapped.h == tr.h
    for i in jm:
        assert generates(block_swap(tr, mt, i), mt, lab)


def test_swap_index_checks():
    mt, lab, tr = planted_pair(1, 2)
    assert block_swap(tr, lab, 0) is tr
    missing = next(i for i in range(1, 3) if i not in j_labeling(tr, lab))
    with pytest.raises(ValueError):
        block_swap(tr, lab, missing)
    with pytest.raises(TypeError):
        block_swap(tr, "x", 0)
    swapped, i = random_swap(tr, mt, np.random.default_rng(0))
    assert i in j_matching(tr, mt)


def test_balance_thresholds():
    mt, lab, tr = planted_pair(2, 2)
    # one of two blocks canonical: 1 >= 2 / (2 * 24)
    assert is_balanced_labeling(tr, lab) and is_balanced_matching(tr, mt)
    mt0, lab0, tr0 = sample_mu3(None, 1, 1, 5)
    expect = len(j_labeling(tr0, lab0)) > 1
    assert is_balanced_labeling(tr0, lab0) == expect


def brute_bias(sizes, y, alpha):
    cells = list(itertools.product(*[range(q) for q in sizes]))
    p = Fraction(sum(int(y[c]) for c in cells), len(cells))
    unbiased = set()
    for i, q in enumerate(sizes):
        ok = True
        for j in range(q):
            sub = [c for c in cells if c[i] == j]
            r = Fraction(sum(int(y[c]) for c in sub), len(sub))
            ok &= p <= (1 + alpha) * r and r <= (1 + alpha) * p
        if ok:
            unbiased.add(i)
    return p, unbiased


@given(st.lists(st.integers(1, 4), min_size=1, max_size=4), st.integers(0, 10**6),
       st.fractions(Fraction(1, 10), Fraction(2)))
def test_bias_report_matches_loops(sizes, seed, alpha):
    y = np.random.default_rng(seed).random(sizes) < 0.6
    rep = bias_report(sizes, y, alpha)
    p, unbiased = brute_bias(sizes, y, alpha)
    assert rep.p_y == p and set(rep.unbiased) == unbiased
    assert unbiased_indices(sizes, lambda idx: y[idx], alpha) == unbiased
    assert rep.biased | rep.unbiased == frozenset(range(len(sizes)))


def test_coordinates_outside_the_event_are_unbiased():
    sizes = (3, 4, 2)
    y = np.zeros(sizes, dtype=bool)
    y[0, :, :] = True
    rep = bias_report(sizes, y, Fraction(1, 2))
    assert rep.unbiased == frozenset({1, 2})
    assert rep.conditional[0] == (1, 0, 0)


def test_bias_caps():
    with pytest.raises(CapExceeded):
        bias_report([2] * 23, lambda idx: True, 1)
    with pytest.raises(ValueError):
        bias_report([0], np.zeros(0, bool), 1)
    with pytest.raises(ValueError):
        bias_report([2, 2], np.zeros((2, 3), bool), 1)


def test_swaps_preserve_triple_law():
    res = swap_invariance_test(count=3000, seed=0)
    assert res.table.sum() == 6000
    assert res.p_value > 1e-3
