import numpy as np
from hypothesis import given, strategies as st

import helpers
from paritymatch.core import BLUE, RED, ColoredBipartiteGraph, Edge, Parity, edge_violates
from paritymatch.formats import read_graph
from paritymatch.oracle import brute_force_parity_decision, brute_force_relevant_edges
from paritymatch.solver import (
    ResultKind,
    find_perfect_matching,
    hall_violator,
    check_hall_violator,
    relevant_edges,
    relevant_edges_by_deletion,
    rotate,
    solve_parity,
    split_closed_walk,
    verify_result,
)

seeds = st.integers(0, 2**32 - 1)


def test_reference_instance(fixtures_dir):
    g = read_graph(fixtures_dir / "fig1.cbg")
    odd = solve_parity(g, Parity.ODD)
    assert odd.kind is ResultKind.CERTIFICATE
    assert odd.certificate.bitstring() == "1110011000"
    assert verify_result(g, odd)
    even = solve_parity(g, Parity.EVEN)
    assert even.found and even.matching.parity is Parity.EVEN


def test_empty_graph_has_hall_violator():
    g = ColoredBipartiteGraph(2, 2, (Edge(0, 0, RED), Edge(1, 0, BLUE)))
    res = solve_parity(g)
    assert res.kind is ResultKind.NO_PERFECT_MATCHING
    assert check_hall_violator(g, *res.hall_set)
    assert verify_result(g, res)


def test_unbalanced_sides():
    g = ColoredBipartiteGraph(1, 2, (Edge(0, 0, RED), Edge(0, 1, BLUE)))
    side, vs = hall_violator(g)
    assert check_hall_violator(g, side, vs)


def test_rotation_flips_parity():
    # 2-cycle through a red/blue double edge
    g = ColoredBipartiteGraph(1, 1, (Edge(0, 0, RED), Edge(0, 0, BLUE)))
    res = solve_parity(g, Parity.ODD if find_perfect_matching(g).parity is Parity.EVEN else Parity.EVEN)
    assert res.found and res.rotations == 1
    assert res.cycle is not None


@given(seeds, st.integers(1, 7))
def test_solver_matches_enumeration(seed, n):
    rng = np.random.default_rng(seed)
    g = helpers.random_graph(rng, n)
    relevant = brute_force_relevant_edges(g)
    for target in Parity:
        res = solve_parity(g, target)
        assert res.found == brute_force_parity_decision(g, target)
        assert verify_result(g, res, relevant=relevant or None)


@given(seeds, st.integers(1, 25))
def test_forced_parity_graphs_yield_certificates(seed, n):
    rng = np.random.default_rng(seed)
    g = helpers.consistent_graph(rng, n, 0.3)
    m0 = find_perfect_matching(g)
    res = solve_parity(g, m0.parity.flipped())
    assert res.kind is ResultKind.CERTIFICATE
    assert not any(edge_violates(e, res.certificate) for e in relevant_edges(g, m0).relevant)


@given(seeds, st.integers(1, 8))
def test_relevance_routes_agree(seed, n):
    rng = np.random.default_rng(seed)
    g = helpers.planted_graph(rng, n, 0.2)
    m0 = find_perfect_matching(g)
    scc = relevant_edges(g, m0).relevant
    assert scc == relevant_edges_by_deletion(g)
    assert scc == brute_force_relevant_edges(g)


@given(seeds, st.integers(2, 30))
def test_large_random_answers_verify(seed, n):
    rng = np.random.default_rng(seed)
    g = helpers.planted_graph(rng, n, 0.05)
    for target in Parity:
        assert verify_result(g, solve_parity(g, target))


def test_split_closed_walk_separates_repeated_vertices():
    a, b, c = ("L", 0), ("R", 0), ("L", 1)
    e = [Edge(0, 0, RED), Edge(1, 0, BLUE), Edge(1, 0, RED), Edge(0, 0, BLUE)]
    walk = [(a, e[0], b), (b, e[1], c), (c, e[2], b), (b, e[3], a)]
    parts = split_closed_walk(walk)
    assert sorted(len(p) for p in parts) == [2, 2]
    assert sum(len(p) for p in parts) == len(walk)


@given(seeds, st.integers(2, 12))
def test_rotation_cycle_is_alternating_and_odd(seed, n):
    rng = np.random.default_rng(seed)
    g = helpers.planted_graph(rng, n, 0.3)
    m0 = find_perfect_matching(g)
    res = solve_parity(g, m0.parity.flipped())
    if res.cycle is None:
        return
    cyc = res.cycle
    assert cyc.red_count % 2 == 1
    in_m0 = [e in m0.edges for e in cyc.edges]
    assert all(a != b for a, b in zip(in_m0, in_m0[1:] + in_m0[:1]))
    assert rotate(m0, cyc) == res.matching
