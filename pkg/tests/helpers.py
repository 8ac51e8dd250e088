"""Graph corpora and matrix fixtures shared by the test modules."""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from paritymatch.bounds import as_fraction_matrix, exact_rank, fooling_set_ok, verify_factorization
from paritymatch.core import Color, ColoredBipartiteGraph, Edge

FIXTURES = Path(__file__).parent / "fixtures"

# cell state: bit 0 = red edge present, bit 1 = blue edge present
STATES = 4


def graph_from_cells(n: int, cells) -> ColoredBipartiteGraph:
    edges = []
    for idx, state in enumerate(cells):
        u, v = divmod(idx, n)
        for c in Color:
            if int(state) >> int(c) & 1:
                edges.append(Edge(u, v, c))
    return ColoredBipartiteGraph(n, n, tuple(edges))


def cell_symmetries(n: int) -> list[np.ndarray]:
    """Cell index maps for row perms x column perms x optional transpose."""
    maps = []
    for pr in itertools.permutations(range(n)):
        for pc in itertools.permutations(range(n)):
            for transpose in (False, True):
                m = np.empty(n * n, dtype=np.int64)
                for u in range(n):
                    for v in range(n):
                        a, b = (pr[u], pc[v]) if not transpose else (pc[v], pr[u])
                        m[a * n + b] = u * n + v
                maps.append(m)
    return maps


def orbit_representatives(n: int) -> tuple[list[tuple[int, ...]], int]:
    """One cell vector per isomorphism class of n x n cell grids; also the total count."""
    cells = n * n
    codes = np.arange(STATES ** cells, dtype=np.int64)
    digits = (codes[:, None] // (STATES ** np.arange(cells))) % STATES
    weights = STATES ** np.arange(cells)
    best = codes.copy()
    for m in cell_symmetries(n):
        best = np.minimum(best, digits[:, m] @ weights)
    reps = np.unique(best)
    rep_digits = (reps[:, None] // weights) % STATES
    return [tuple(int(x) for x in row) for row in rep_digits], len(codes)


def random_graph(rng: np.random.Generator, n: int, density: float | None = None,
                 n_right: int | None = None) -> ColoredBipartiteGraph:
    nr = n if n_right is None else n_right
    p = rng.uniform(0.15, 0.8) if density is None else density
    edges = [Edge(u, v, c) for u in range(n) for v in range(nr) for c in Color if rng.random() < p]
    return ColoredBipartiteGraph(n, nr, tuple(edges))


def planted_graph(rng: np.random.Generator, n: int, extra: float) -> ColoredBipartiteGraph:
    """Random graph guaranteed to contain a perfect matching."""
    perm = rng.permutation(n)
    edges = {Edge(u, int(perm[u]), Color(int(rng.integers(2)))) for u in range(n)}
    for u in range(n):
        for v in range(n):
            for c in Color:
                if rng.random() < extra:
                    edges.add(Edge(u, v, c))
    return ColoredBipartiteGraph(n, n, tuple(sorted(edges)))


# -- matrices with known nonnegative rank -------------------------------------------

def _mat_json(a) -> list[list[str]]:
    return [[str(Fraction(x)) for x in row] for row in a]


def build_rank_corpus(seed: int = 2024) -> list[dict]:
    """Matrices whose nonnegative rank is pinned by a lower certificate and a factorization."""
    rng = np.random.default_rng(seed)
    out = []

    def add(name, mat, U, V, lower):
        out.append({"name": name, "matrix": _mat_json(mat), "rank_plus": len(V),
                    "U": _mat_json(U), "V": _mat_json(V), "lower": lower})

    for r in (1, 2, 3, 4):
        made = 0
        while made < 4:
            rows, cols = int(rng.integers(r, 7)), int(rng.integers(r, 7))
            U = rng.integers(0, 4, size=(rows, r))
            V = rng.integers(0, 4, size=(r, cols))
            S = U @ V
            if exact_rank(S.tolist()) != r:
                continue
            add(f"product_r{r}_{made}", S.tolist(), U.tolist(), V.tolist(), {"method": "rank"})
            made += 1
    for k in (2, 3, 4):
        eye = np.eye(k, dtype=np.int64)
        add(f"identity_{k}", eye.tolist(), eye.tolist(), eye.tolist(), {"method": "rank"})
    ones = np.ones((3, 5), dtype=np.int64)
    add("all_ones_3x5", ones.tolist(), [[1]] * 3, [[1] * 5], {"method": "rank"})
    cyc = np.array([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]])
    add("cyclic_4", cyc.tolist(), cyc.tolist(), np.eye(4, dtype=np.int64).tolist(),
        {"method": "fooling_set", "cells": [[0, 0], [1, 1], [2, 2], [3, 3]]})
    return out


def load_rank_corpus() -> list[dict]:
    return json.loads((FIXTURES / "rank_corpus.json").read_text())


def check_rank_entry(entry: dict) -> bool:
    """Exact check of both certificates of one corpus entry."""
    S = as_fraction_matrix([[Fraction(x) for x in row] for row in entry["matrix"]])
    U = [[Fraction(x) for x in row] for row in entry["U"]]
    V = [[Fraction(x) for x in row] for row in entry["V"]]
    r = entry["rank_plus"]
    if len(V) != r or not verify_factorization(S, U, V):
        return False
    low = entry["lower"]
    if low["method"] == "rank":
        return exact_rank(S) == r
    if low["method"] == "fooling_set":
        cells = [tuple(c) for c in low["cells"]]
        return len(cells) == r and fooling_set_ok(S, cells)
    return False


def consistent_graph(rng: np.random.Generator, n: int, density: float) -> ColoredBipartiteGraph:
    """Only edges consistent with a hidden labeling, plus a planted perfect matching.

    Every perfect matching of such a graph has the same red parity, so the
    other parity needs a certificate.
    """
    bits = rng.integers(0, 2, size=2 * n)
    perm = rng.permutation(n)

    def consistent(u, v):
        return Color.RED if bits[u] == bits[n + v] else Color.BLUE

    edges = {Edge(u, int(perm[u]), consistent(u, int(perm[u]))) for u in range(n)}
    for u in range(n):
        for v in range(n):
            if rng.random() < density:
                edges.add(Edge(u, v, consistent(u, v)))
    return ColoredBipartiteGraph(n, n, tuple(sorted(edges)))
