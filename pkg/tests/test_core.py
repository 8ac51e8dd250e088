import itertools

import pytest
from hypothesis import given, strategies as st

from paritymatch.core import (
    BLUE,
    RED,
    Color,
    ColoredBipartiteGraph,
    Edge,
    Labeling,
    Matching,
    Parity,
    build_complete_double,
    edge_violates,
    labeling_parity_ok,
    red_parity_identity,
    violation_count,
    violation_edges,
)


def test_color_letters_roundtrip():
    assert Color.from_letter("r") is RED
    assert Color.from_letter("Blue") is BLUE
    assert RED.letter == "R" and BLUE.letter == "B"
    with pytest.raises(ValueError):
        Color.from_letter("g")


def test_parity_of_count():
    assert Parity.of(3) is Parity.ODD
    assert Parity.of(0) is Parity.EVEN
    assert Parity.ODD.flipped() is Parity.EVEN


@pytest.mark.parametrize("color,lu,lv,expected", [
    (RED, 0, 0, False), (RED, 1, 1, False), (RED, 0, 1, True), (RED, 1, 0, True),
    (BLUE, 0, 0, True), (BLUE, 1, 1, True), (BLUE, 0, 1, False), (BLUE, 1, 0, False),
])
def test_violation_truth_table(color, lu, lv, expected):
    lab = Labeling.from_sides([lu], [lv])
    assert edge_violates(Edge(0, 0, color), lab) is expected


def test_complete_double_graph_shape():
    g = build_complete_double(3)
    assert len(g.edges) == 18
    assert g.is_complete_double
    assert all(cols == (RED, BLUE) for cols in g.pair_colors().values())
    with pytest.raises(ValueError):
        build_complete_double(0)


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        ColoredBipartiteGraph(1, 1, (Edge(0, 1, RED),))
    with pytest.raises(ValueError):
        ColoredBipartiteGraph(1, 1, (Edge(0, 0, RED), Edge(0, 0, RED)))


def test_unbalanced_graph_has_no_n():
    g = ColoredBipartiteGraph(2, 1, (Edge(0, 0, RED), Edge(1, 0, RED)))
    with pytest.raises(ValueError):
        _ = g.n


def test_labeling_parity_classes():
    # odd target: ones congruent to n
    assert labeling_parity_ok(3, 3, Parity.ODD)
    assert not labeling_parity_ok(2, 3, Parity.ODD)
    assert labeling_parity_ok(2, 3, Parity.EVEN)
    with pytest.raises(ValueError):
        Labeling((1, 0, 0, 0), 2, Parity.ODD)
    Labeling((1, 0, 0, 0), 2, Parity.EVEN)


def test_labeling_accessors():
    lab = Labeling.from_bitstring("1001")
    assert lab.left == (1, 0) and lab.right == (0, 1)
    assert lab.of_right(1) == 1
    assert lab.complement().bitstring() == "0110"
    with pytest.raises(ValueError):
        Labeling((0, 2), 1)


def test_matching_rejects_shared_vertex():
    with pytest.raises(ValueError):
        Matching.of([Edge(0, 0, RED), Edge(0, 1, BLUE)])


def test_violation_edges_on_small_graph():
    g = build_complete_double(1)
    assert violation_edges(g, Labeling.from_sides([1], [1])) == {Edge(0, 0, BLUE)}
    assert violation_edges(g, Labeling.from_sides([1], [0])) == {Edge(0, 0, RED)}


def test_violation_count_needs_perfect_matching():
    g = build_complete_double(2)
    with pytest.raises(ValueError):
        violation_count(Matching.of([Edge(0, 0, RED)]), Labeling((0,) * 4, 2), g)


perm_and_colors = st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.just(n), st.permutations(list(range(n))),
    st.lists(st.sampled_from([RED, BLUE]), min_size=n, max_size=n),
    st.lists(st.integers(0, 1), min_size=2 * n, max_size=2 * n)))


@given(perm_and_colors)
def test_violations_follow_red_and_ones_parity(data):
    # a perfect matching of G_n and any labeling: violations = n + red + ones (mod 2)
    n, perm, colors, bits = data
    g = build_complete_double(n)
    m = Matching.of(Edge(u, perm[u], colors[u]) for u in range(n))
    lab = Labeling(tuple(bits), n)
    viol = violation_count(m, lab, g)
    assert viol % 2 == (n + m.red_count + sum(bits)) % 2


@given(perm_and_colors)
def test_consistent_pairs_satisfy_red_count_identity(data):
    n, perm, colors, bits = data
    g = build_complete_double(n)
    lab = Labeling(tuple(bits), n)
    # recolor so that every edge is consistent with the labeling
    m = Matching.of(Edge(u, perm[u], RED if bits[u] == bits[n + perm[u]] else BLUE)
                    for u in range(n))
    red, rhs = red_parity_identity(g, m, lab)
    assert red == rhs


def test_identity_rejects_violating_matching():
    g = build_complete_double(1)
    with pytest.raises(ValueError):
        red_parity_identity(g, Matching.of([Edge(0, 0, RED)]), Labeling.from_sides([1], [0]))


def test_odd_red_matchings_always_violate_valid_labelings_n2():
    g = build_complete_double(2)
    for perm in itertools.permutations(range(2)):
        for cols in itertools.product(Color, repeat=2):
            m = Matching.of(Edge(u, perm[u], cols[u]) for u in range(2))
            if m.parity is not Parity.ODD:
                continue
            for bits in itertools.product((0, 1), repeat=4):
                if labeling_parity_ok(sum(bits), 2, Parity.ODD):
                    assert violation_count(m, Labeling(bits, 2), g) % 2 == 1
