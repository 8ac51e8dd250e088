import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import helpers
from paritymatch.core import Color, Parity, build_complete_double
from paritymatch.oracle import (
    CapExceeded,
    brute_force_parity_decision,
    cycle_parity_exceptions,
    enumerate_exact_k,
    enumerate_labelings,
    gadget_simple_graph,
    iter_labelings,
    iter_perfect_matchings,
    verify_gadget_bijection,
)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_complete_double_matching_count(n):
    pms = list(iter_perfect_matchings(build_complete_double(n)))
    assert len(pms) == math.factorial(n) * 2 ** n
    assert len(set(pms)) == len(pms)
    assert all(pm.is_perfect(build_complete_double(n)) for pm in pms)


def test_enumerate_exact_k():
    g = build_complete_double(3)
    for k in range(4):
        assert len(enumerate_exact_k(g, k)) == math.factorial(3) * math.comb(3, k)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_labelings_split_evenly(n):
    odd = enumerate_labelings(n, Parity.ODD)
    even = enumerate_labelings(n, Parity.EVEN)
    assert len(odd) == len(even) == 2 ** (2 * n - 1)
    assert not {l.values for l in odd} & {l.values for l in even}


def test_caps():
    with pytest.raises(CapExceeded):
        list(iter_perfect_matchings(build_complete_double(9)))
    with pytest.raises(CapExceeded):
        list(iter_labelings(20, Parity.ODD))
    with pytest.raises(CapExceeded):
        cycle_parity_exceptions(18)
    with pytest.raises(ValueError):
        cycle_parity_exceptions(5)


def test_no_odd_matching_in_all_blue_graph():
    g = build_complete_double(3)
    blue = type(g)(3, 3, tuple(e for e in g.edges if e.color is Color.BLUE))
    assert not brute_force_parity_decision(blue, Parity.ODD)
    assert brute_force_parity_decision(blue, Parity.EVEN)


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_gadget_bijection_random(seed, n):
    g = helpers.random_graph(np.random.default_rng(seed), n)
    gm = gadget_simple_graph(g)
    assert verify_gadget_bijection(gm)


def test_gadget_on_single_double_edge():
    g = build_complete_double(1)
    gm = gadget_simple_graph(g)
    assert (gm.simple_graph.n_left, gm.simple_graph.n_right) == (3, 3)
    assert len(gm.simple_graph.edges) == 6
    reds = sorted(m.red_count for m in iter_perfect_matchings(gm.simple_graph, None))
    assert reds == [0, 1]


def _cycle_by_loops(length: int) -> int:
    bad = 0
    for colors in itertools.product((0, 1), repeat=length):
        for labels in itertools.product((0, 1), repeat=length):
            viol = 0
            for i in range(length):
                same = labels[i] == labels[(i + 1) % length]
                viol += (not same) if colors[i] == 0 else same
            bad += viol % 2 != sum(1 for c in colors if c == 0) % 2
    return bad


@pytest.mark.parametrize("length", [2, 4, 6])
def test_cycle_parity_loop_route(length):
    assert _cycle_by_loops(length) == cycle_parity_exceptions(length) == 0


def test_odd_cycle_lengths_would_break_parity():
    # sanity: the identity relies on even length; a triangle shows exceptions
    colors_labels = itertools.product((0, 1), repeat=6)
    bad = 0
    for bits in colors_labels:
        colors, labels = bits[:3], bits[3:]
        viol = sum((labels[i] != labels[(i + 1) % 3]) if colors[i] == 0 else (labels[i] == labels[(i + 1) % 3])
                   for i in range(3))
        bad += viol % 2 != sum(c == 0 for c in colors) % 2
    assert bad > 0
