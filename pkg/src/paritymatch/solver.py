"""Perfect matchings of prescribed red parity, or a labeling that rules them out.

Start from any perfect matching ``m0``.  If its red count already has the
requested parity we are done.  Otherwise orient matching edges left->right and
all other edges right->left.  An edge lies in some perfect matching exactly
when it is in ``m0`` or both endpoints share a strongly connected component,
and the components of those relevant edges are the nontrivial SCCs (plus
single forced matching edges).

Each component is labeled along a BFS tree so that tree edges are consistent
(red: equal labels, blue: different labels).  A non-tree edge that violates
the tree labeling closes a walk with an odd number of violating edges; that
walk splits into directed (hence alternating) simple cycles, one of which has
an odd number of violations and therefore an odd number of red edges.
Rotating ``m0`` along it flips the red parity.  If no non-tree edge violates,
the tree labels are a certificate: every relevant edge is consistent, and the
parity of the ones-count is forced by ``m0``.
"""

from __future__ import annotations

import enum
import time
from collections import deque
from dataclasses import dataclass, field

from .core import (
    Color,
    ColoredBipartiteGraph,
    Edge,
    Labeling,
    Matching,
    Parity,
    edge_violates,
    labeling_parity_ok,
)


class InvariantError(AssertionError):
    """A property guaranteed by the correctness argument failed to hold."""


# -- maximum matching -------------------------------------------------------

def _hopcroft_karp(n_left: int, n_right: int, adj: list[list[int]]) -> list[int]:
    """Maximum matching; returns mate of each left vertex (-1 if free)."""
    INF = float("inf")
    mate_l = [-1] * n_left
    mate_r = [-1] * n_right
    dist = [0.0] * n_left

    def bfs() -> bool:
        q = deque()
        for u in range(n_left):
            if mate_l[u] == -1:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = INF
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = mate_r[v]
                if w == -1:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(root: int) -> bool:
        # iterative layered DFS; returns True if an augmenting path was applied
        stack = [(root, iter(adj[root]))]
        path: list[tuple[int, int]] = []
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                w = mate_r[v]
                if w == -1:
                    path.append((u, v))
                    for a, b in path:
                        mate_l[a] = b
                        mate_r[b] = a
                    return True
                if dist[w] == dist[u] + 1:
                    path.append((u, v))
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                dist[u] = INF
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for u in range(n_left):
            if mate_l[u] == -1:
                dfs(u)
    return mate_l


def find_perfect_matching(g: ColoredBipartiteGraph) -> Matching | None:
    """A perfect matching of ``g`` or None.

    Runs Hopcroft-Karp on the underlying simple pair graph; for a pair joined
    in both colors the red edge is used.  Deterministic in the edge order.
    """
    if g.n_left != g.n_right:
        return None
    colors = g.pair_colors()
    adj: list[list[int]] = [[] for _ in range(g.n_left)]
    for (u, v) in colors:
        adj[u].append(v)
    mate = _hopcroft_karp(g.n_left, g.n_right, adj)
    if any(v == -1 for v in mate):
        return None
    return Matching.of(Edge(u, v, colors[(u, v)][0]) for u, v in enumerate(mate))


def hall_violator(g: ColoredBipartiteGraph) -> tuple[str, tuple[int, ...]] | None:
    """A vertex set S on one side with |N(S)| < |S|, or None if a PM exists.

    Returns ("L", S) or ("R", S).  On the left this is the set reachable
    from unmatched left vertices by alternating paths of a maximum matching.
    """
    adj: list[list[int]] = [sorted({e.v for e in es}) for es in g.left_adjacency]
    mate = _hopcroft_karp(g.n_left, g.n_right, adj)
    free = [u for u in range(g.n_left) if mate[u] == -1]
    if not free:
        if g.n_right > g.n_left:
            return ("R", tuple(range(g.n_right)))
        return None
    mate_r = [-1] * g.n_right
    for u, v in enumerate(mate):
        if v != -1:
            mate_r[v] = u
    seen = set(free)
    queue = deque(free)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            w = mate_r[v]
            if w != -1 and w not in seen:
                seen.add(w)
                queue.append(w)
    return ("L", tuple(sorted(seen)))


def check_hall_violator(g: ColoredBipartiteGraph, side: str, vertices) -> bool:
    s = set(vertices)
    if side == "L":
        nbrs = {e.v for e in g.edges if e.u in s}
    elif side == "R":
        nbrs = {e.u for e in g.edges if e.v in s}
    else:
        return False
    return len(nbrs) < len(s)


# -- relevance structure ----------------------------------------------------

def _tarjan_scc(n_nodes: int, succ: list[list[int]]) -> list[int]:
    """Component id per node (iterative Tarjan)."""
    index = [-1] * n_nodes
    low = [0] * n_nodes
    on_stack = [False] * n_nodes
    comp = [-1] * n_nodes
    stack: list[int] = []
    counter = 0
    n_comp = 0
    for start in range(n_nodes):
        if index[start] != -1:
            continue
        work = [(start, 0)]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack[start] = True
        while work:
            node, i = work[-1]
            if i < len(succ[node]):
                work[-1] = (node, i + 1)
                nxt = succ[node][i]
                if index[nxt] == -1:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack[nxt] = True
                    work.append((nxt, 0))
                elif on_stack[nxt]:
                    low[node] = min(low[node], index[nxt])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == node:
                        break
                n_comp += 1
    return comp


@dataclass(frozen=True)
class Component:
    left: tuple[int, ...]
    right: tuple[int, ...]
    edges: tuple[Edge, ...]

    @property
    def forced(self) -> bool:
        return len(self.edges) == 1


@dataclass(frozen=True)
class RelevanceStructure:
    graph: ColoredBipartiteGraph
    base: Matching
    relevant: frozenset[Edge]
    components: tuple[Component, ...]

    @property
    def forced(self) -> tuple[Component, ...]:
        return tuple(c for c in self.components if c.forced)

    def component_of_left(self) -> dict[int, int]:
        return {u: i for i, c in enumerate(self.components) for u in c.left}


def _arcs(g: ColoredBipartiteGraph, m0: Matching) -> list[list[int]]:
    """Successor lists on nodes 0..n-1 (left) and n..2n-1 (right)."""
    n = g.n_left
    succ: list[list[int]] = [[] for _ in range(2 * n)]
    for e in g.edges:
        if e in m0.edges:
            succ[e.u].append(n + e.v)
        else:
            succ[n + e.v].append(e.u)
    for s in succ:
        s.sort()
    return succ


def relevant_edges(g: ColoredBipartiteGraph, m0: Matching) -> RelevanceStructure:
    if not m0.is_perfect(g):
        raise ValueError("relevant_edges needs a perfect matching of the graph")
    n = g.n_left
    scc = _tarjan_scc(2 * n, _arcs(g, m0))
    relevant = frozenset(e for e in g.edges if e in m0.edges or scc[e.u] == scc[n + e.v])

    # connected components of the relevant edge set (union-find on nodes)
    parent = list(range(2 * n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in relevant:
        a, b = find(e.u), find(n + e.v)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[int, list[Edge]] = {}
    for e in sorted(relevant):
        groups.setdefault(find(e.u), []).append(e)
    comps = []
    for edges in groups.values():
        comps.append(Component(
            left=tuple(sorted({e.u for e in edges})),
            right=tuple(sorted({e.v for e in edges})),
            edges=tuple(edges)))
    comps.sort(key=lambda c: c.left[0])
    return RelevanceStructure(g, m0, relevant, tuple(comps))


# -- BFS trees and cycles ---------------------------------------------------

# Nodes are ("L", u) / ("R", v) tuples below: readable and hashable.
Node = tuple[str, int]


@dataclass
class SearchTree:
    """BFS tree of one component, with labels consistent on tree edges."""

    component: Component
    root: int
    parent: dict[Node, tuple[Node, Edge] | None]
    depth: dict[Node, int]
    labels: dict[Node, int]
    tree_edges: set[Edge] = field(default_factory=set)

    def path_from_root(self, node: Node) -> list[tuple[Node, Edge, Node]]:
        steps = []
        while self.parent[node] is not None:
            prev, e = self.parent[node]
            steps.append((prev, e, node))
            node = prev
        steps.reverse()
        return steps

    def ancestors(self, node: Node) -> list[Node]:
        out = [node]
        while self.parent[node] is not None:
            node = self.parent[node][0]
            out.append(node)
        return out

    def violates(self, e: Edge) -> bool:
        same = self.labels[("L", e.u)] == self.labels[("R", e.v)]
        return same if e.color is Color.BLUE else not same


def _out_arcs(component: Component, m0: Matching) -> dict[Node, list[tuple[Edge, Node]]]:
    out: dict[Node, list[tuple[Edge, Node]]] = {}
    for u in component.left:
        out[("L", u)] = []
    for v in component.right:
        out[("R", v)] = []
    for e in component.edges:
        if e in m0.edges:
            out[("L", e.u)].append((e, ("R", e.v)))
        else:
            out[("R", e.v)].append((e, ("L", e.u)))
    for arcs in out.values():
        arcs.sort(key=lambda a: (a[1], a[0]))
    return out


def build_search_tree(component: Component, m0: Matching) -> SearchTree:
    """BFS from the lowest left vertex (label 1); red keeps labels, blue flips."""
    root = component.left[0]
    start: Node = ("L", root)
    arcs = _out_arcs(component, m0)
    parent: dict[Node, tuple[Node, Edge] | None] = {start: None}
    depth = {start: 0}
    labels = {start: 1}
    tree = SearchTree(component, root, parent, depth, labels)
    q = deque([start])
    while q:
        x = q.popleft()
        for e, y in arcs[x]:
            if y in parent:
                continue
            parent[y] = (x, e)
            depth[y] = depth[x] + 1
            labels[y] = labels[x] if e.color is Color.RED else 1 - labels[x]
            tree.tree_edges.add(e)
            q.append(y)
    if len(parent) != len(component.left) + len(component.right):
        raise InvariantError("component is not strongly connected under the matching orientation")
    return tree


@dataclass(frozen=True)
class AlternatingCycle:
    """Directed cycle: ``edges[i]`` goes from ``nodes[i]`` to ``nodes[i+1]``."""

    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    case: str               # "back", "forward" or "cross"

    @property
    def red_count(self) -> int:
        return sum(1 for e in self.edges if e.color is Color.RED)


def _bfs_path(arcs: dict[Node, list[tuple[Edge, Node]]], src: Node,
              dst: Node) -> list[tuple[Node, Edge, Node]]:
    if src == dst:
        return []
    prev: dict[Node, tuple[Node, Edge]] = {}
    seen = {src}
    q = deque([src])
    while q:
        x = q.popleft()
        for e, y in arcs[x]:
            if y in seen:
                continue
            seen.add(y)
            prev[y] = (x, e)
            if y == dst:
                steps = []
                node = dst
                while node != src:
                    p, pe = prev[node]
                    steps.append((p, pe, node))
                    node = p
                steps.reverse()
                return steps
            q.append(y)
    raise InvariantError(f"no directed path from {src} to {dst} inside a component")


def split_closed_walk(steps: list[tuple[Node, Edge, Node]]) -> list[list[tuple[Node, Edge, Node]]]:
    """Split a closed directed walk into simple directed cycles (stack method)."""
    if not steps:
        return []
    cycles = []
    stack: list[tuple[Node, Edge, Node]] = []
    position = {steps[0][0]: 0}
    for step in steps:
        stack.append(step)
        head = step[2]
        if head in position:
            cut = position[head]
            cycle = stack[cut:]
            del stack[cut:]
            for s in cycle[1:]:
                position.pop(s[0], None)
            cycles.append(cycle)
        else:
            position[head] = len(stack)
    if stack:
        raise InvariantError("walk is not closed")
    return cycles


def extract_parity_flipping_cycle(structure: RelevanceStructure, m0: Matching,
                                  tree: SearchTree, bad_edge: Edge) -> AlternatingCycle:
    """Alternating cycle with an odd number of red edges through the violation."""
    if bad_edge in m0.edges or bad_edge in tree.tree_edges:
        raise ValueError("bad_edge must be a non-tree, non-matching edge")
    if not tree.violates(bad_edge):
        raise ValueError("bad_edge is consistent with the tree labels")
    a: Node = ("R", bad_edge.v)       # the edge is traversed a -> b
    b: Node = ("L", bad_edge.u)
    bad_step = (a, bad_edge, b)
    anc_a = tree.ancestors(a)
    anc_b = set(tree.ancestors(b))
    w = next(x for x in anc_a if x in anc_b)

    def tree_path(top: Node, bottom: Node):
        full = tree.path_from_root(bottom)
        return full[tree.depth[top]:]

    if w == b:
        case = "back"
        walk = tree_path(b, a) + [bad_step]
    else:
        case = "forward" if w == a else "cross"
        back_path = _bfs_path(_out_arcs(tree.component, m0), b, w)
        odd = sum(tree.violates(e) for _, e, _ in back_path) % 2 == 1
        if odd:
            walk = tree_path(w, b) + back_path
        else:
            walk = tree_path(w, a) + [bad_step] + back_path

    if sum(tree.violates(e) for _, e, _ in walk) % 2 != 1:
        raise InvariantError("closed walk does not carry an odd number of violations")
    for cycle in split_closed_walk(walk):
        if sum(tree.violates(e) for _, e, _ in cycle) % 2 == 1:
            result = AlternatingCycle(
                nodes=tuple(s[0] for s in cycle) + (cycle[0][0],),
                edges=tuple(s[1] for s in cycle),
                case=case)
            if result.red_count % 2 != 1:
                raise InvariantError("odd-violation cycle has an even number of red edges")
            return result
    raise InvariantError("no cycle with an odd number of violations in the decomposition")


def rotate(m0: Matching, cycle: AlternatingCycle) -> Matching:
    return m0.symmetric_difference(cycle.edges)


# -- the solver -------------------------------------------------------------

class ResultKind(str, enum.Enum):
    MATCHING_FOUND = "matching_found"
    CERTIFICATE = "certificate"
    NO_PERFECT_MATCHING = "no_perfect_matching"


@dataclass(frozen=True)
class ParityResult:
    kind: ResultKind
    target: Parity
    matching: Matching | None = None
    certificate: Labeling | None = None
    cycle: AlternatingCycle | None = None
    components: int = 0
    rotations: int = 0
    pm_time: float = 0.0
    hall_set: tuple[str, tuple[int, ...]] | None = None

    @property
    def found(self) -> bool:
        return self.kind is ResultKind.MATCHING_FOUND


def solve_parity(g: ColoredBipartiteGraph, target: Parity = Parity.ODD) -> ParityResult:
    target = Parity(target)
    t0 = time.perf_counter()
    m0 = find_perfect_matching(g)
    pm_time = time.perf_counter() - t0
    if m0 is None:
        return ParityResult(ResultKind.NO_PERFECT_MATCHING, target, pm_time=pm_time,
                            hall_set=hall_violator(g))
    if m0.parity is target:
        return ParityResult(ResultKind.MATCHING_FOUND, target, matching=m0, pm_time=pm_time)

    structure = relevant_edges(g, m0)
    n = g.n_left
    left = [0] * n
    right = [0] * n
    for comp in structure.components:
        if comp.forced:
            e = comp.edges[0]
            left[e.u] = 1
            right[e.v] = 1 if e.color is Color.RED else 0
            continue
        tree = build_search_tree(comp, m0)
        for e in comp.edges:
            if e in tree.tree_edges or not tree.violates(e):
                continue
            cycle = extract_parity_flipping_cycle(structure, m0, tree, e)
            m1 = rotate(m0, cycle)
            if not m1.is_perfect(g) or m1.parity is not target:
                raise InvariantError("rotation did not produce a perfect matching of the target parity")
            return ParityResult(ResultKind.MATCHING_FOUND, target, matching=m1, cycle=cycle,
                                components=len(structure.components), rotations=1,
                                pm_time=pm_time)
        for (side, idx), lab in tree.labels.items():
            (left if side == "L" else right)[idx] = lab

    ones = sum(left) + sum(right)
    if not labeling_parity_ok(ones, n, target):
        raise InvariantError("certificate labeling has the wrong ones-count parity")
    cert = Labeling.from_sides(left, right, target)
    bad = [e for e in structure.relevant if edge_violates(e, cert)]
    if bad:
        raise InvariantError(f"certificate violates relevant edges {sorted(bad)}")
    return ParityResult(ResultKind.CERTIFICATE, target, certificate=cert,
                        components=len(structure.components), pm_time=pm_time)


def verify_result(g: ColoredBipartiteGraph, result: ParityResult,
                  relevant: frozenset[Edge] | None = None) -> bool:
    """Independent acceptance check of a solver answer.

    ``relevant`` defaults to the relevance set recomputed from a fresh
    perfect matching.  Callers with an oracle can pass their own.
    """
    if result.kind is ResultKind.MATCHING_FOUND:
        m = result.matching
        return m is not None and m.is_perfect(g) and m.parity is result.target
    if result.kind is ResultKind.NO_PERFECT_MATCHING:
        if result.hall_set is None:
            return False
        return check_hall_violator(g, *result.hall_set)
    cert = result.certificate
    if cert is None or not cert.is_valid_for(result.target):
        return False
    if relevant is None:
        m0 = find_perfect_matching(g)
        if m0 is None:
            return False
        relevant = relevant_edges(g, m0).relevant
    return not any(edge_violates(e, cert) for e in relevant)


def relevant_edges_by_deletion(g: ColoredBipartiteGraph) -> frozenset[Edge]:
    """Edges (u, v) such that G - u - v still has a perfect matching.

    Quadratic but definition-level; used to cross-check the SCC route.
    """
    if g.n_left != g.n_right:
        return frozenset()
    colors = g.pair_colors()
    out = set()
    for (u, v), cols in colors.items():
        adj: list[list[int]] = [[] for _ in range(g.n_left)]
        for (a, b) in colors:
            if a != u and b != v:
                adj[a].append(b)
        mate = _hopcroft_karp(g.n_left, g.n_right, adj)
        if sum(1 for x in mate if x != -1) == g.n_left - 1:
            out.update(Edge(u, v, c) for c in cols)
    return frozenset(out)
