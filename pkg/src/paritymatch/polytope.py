"""The labeling-constraint relaxation and its slack matrix.

The relaxation over edge variables x >= 0 asks for degree one at every
vertex and ``sum(x_e for e in E_L) >= 1`` for every labeling L in the
parity class of the target.  Feasibility is decided exactly.

Solving strategy: after a phase-1 solve of the degree equalities, introduce a
variable ``t <= 1`` and maximise it subject to ``x(E_L) >= t`` for the
labeling rows added so far.  Fewer rows can only raise the optimum, so an
optimum below 1 proves infeasibility; an optimum of 1 whose point satisfies
every labeling row is a feasible witness.  Violated rows are added in batches
and re-optimised with the dual simplex.  ``method="full"`` adds all rows at
once instead.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (
    Color,
    ColoredBipartiteGraph,
    Edge,
    Labeling,
    Matching,
    Parity,
    violation_count,
)
from .formats import edge_to_json, matching_to_json
from .oracle import (
    LABELING_VERTEX_CAP,
    MATCHING_CAP,
    iter_perfect_matchings,
    labeling_table,
)
from .simplex import LPStatus, Tableau

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RelaxationLP:
    graph: ColoredBipartiteGraph
    target: Parity
    labelings: tuple[Labeling, ...]
    violations: np.ndarray = field(repr=False)     # bool [labeling, edge]

    @property
    def variables(self) -> tuple[Edge, ...]:
        return self.graph.edges

    @property
    def n_variables(self) -> int:
        return len(self.graph.edges)

    @property
    def n_equalities(self) -> int:
        return self.graph.n_left + self.graph.n_right

    @property
    def n_labeling_rows(self) -> int:
        return len(self.labelings)

    @property
    def supports(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices of E_L, one tuple per labeling row."""
        return tuple(tuple(int(j) for j in np.flatnonzero(row)) for row in self.violations)

    def degree_rows(self) -> list[list[int]]:
        g = self.graph
        rows = []
        for u in range(g.n_left):
            rows.append([1 if e.u == u else 0 for e in g.edges])
        for v in range(g.n_right):
            rows.append([1 if e.v == v else 0 for e in g.edges])
        return rows


def build_relaxation(g: ColoredBipartiteGraph, target: Parity = Parity.ODD,
                     cap: int | None = LABELING_VERTEX_CAP) -> RelaxationLP:
    target = Parity(target)
    labelings = labeling_table(g.n, target, cap)
    return RelaxationLP(g, target, labelings, violation_matrix(g, labelings))


def violation_matrix(g: ColoredBipartiteGraph, labelings: Sequence[Labeling]) -> np.ndarray:
    """Boolean array [labeling, edge]: does the edge violate the labeling."""
    if not labelings:
        return np.zeros((0, len(g.edges)), dtype=bool)
    lab = np.array([l.values for l in labelings], dtype=np.int8)
    us = np.array([e.u for e in g.edges], dtype=np.int64)
    vs = np.array([g.n_left + e.v for e in g.edges], dtype=np.int64)
    blue = np.array([e.color is Color.BLUE for e in g.edges], dtype=bool)
    same = lab[:, us] == lab[:, vs]
    return np.where(blue[None, :], same, ~same)


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: tuple[Fraction, ...] | None = None
    reason: str = ""
    rows_used: int = 0
    rounds: int = 0
    pivots: int = 0

    def witness_by_edge(self, lp: RelaxationLP) -> dict[Edge, Fraction]:
        if self.witness is None:
            return {}
        return {e: x for e, x in zip(lp.variables, self.witness) if x}


def lp_feasible(lp: RelaxationLP, method: str = "rowgen", batch: int = 8) -> FeasibilityResult:
    """Exact feasibility of the relaxation, with a rational witness when feasible."""
    if method not in ("rowgen", "full"):
        raise ValueError(f"unknown method {method!r}")
    n_x = lp.n_variables
    deg = lp.degree_rows()
    n_eq = len(deg)
    if n_x == 0:
        return FeasibilityResult(False, reason="no edges")

    # phase 1: degree equalities with one artificial per vertex
    rows = [row + [1 if k == i else 0 for k in range(n_eq)] for i, row in enumerate(deg)]
    tab = Tableau(rows, [1] * n_eq, list(range(n_x, n_x + n_eq)))
    art = set(range(n_x, n_x + n_eq))
    tab.set_cost([0] * n_x + [1] * n_eq)
    tab.primal()
    if tab.objective() > 0:
        return FeasibilityResult(False, reason="no fractional perfect matching",
                                 pivots=tab.pivots)
    dead = []
    for i in range(tab.n_rows):
        if tab.basis[i] in art:
            nz = [int(j) for j in np.nonzero(tab.T[i, :n_x])[0]]
            if nz:
                tab.pivot(i, nz[0])
            else:
                dead.append(i)
    tab.drop_rows(dead)
    tab.drop_columns(sorted(art))

    # phase 2: maximise t subject to t <= 1 and the labeling rows added so far
    t_col, w_col = tab.add_columns(2)
    tab.add_row([0] * n_x + [1, 1], 1, w_col)
    tab.set_cost([0] * n_x + [-1, 0])
    if tab.primal() is not LPStatus.OPTIMAL:
        raise RuntimeError("bounded phase 2 reported unbounded")

    # distinct supports only (a labeling and its complement give the same row)
    S = np.unique(lp.violations.astype(np.int64), axis=0)
    if not S.any(axis=1).all():
        return FeasibilityResult(False, reason="a labeling row has empty support",
                                 pivots=tab.pivots)
    sup_list = [np.flatnonzero(row) for row in S]
    added = np.zeros(len(sup_list), dtype=bool)

    def add(indices) -> None:
        for i in indices:
            (s_col,) = tab.add_columns(1)
            coeffs = [0] * tab.n_cols
            for j in sup_list[i]:
                coeffs[j] = -1
            coeffs[t_col] = 1
            coeffs[s_col] = 1
            tab.add_row(coeffs, 0, s_col)
            added[i] = True

    rounds = 0
    if method == "full":
        add(range(len(sup_list)))
        tab.dual()
    while True:
        rounds += 1
        t_val = tab.value(t_col)
        if t_val < 1:
            return FeasibilityResult(False, reason=f"max min-row coverage is {t_val} < 1",
                                     rows_used=int(added.sum()), rounds=rounds,
                                     pivots=tab.pivots)
        x = tab.solution()[:n_x]
        den = math.lcm(*(v.denominator for v in x))
        scaled = np.array([int(v * den) for v in x],
                          dtype=np.int64 if den * n_x < (1 << 62) else object)
        cover = S.astype(scaled.dtype) @ scaled
        short = np.nonzero(cover < den)[0]
        if len(short) == 0:
            return FeasibilityResult(True, witness=tuple(x), rows_used=int(added.sum()),
                                     rounds=rounds, pivots=tab.pivots)
        if method == "full":
            raise RuntimeError("full LP optimum violates one of its own rows")
        order = sorted(short, key=lambda i: (cover[i], i))[:batch]
        add(order)
        if tab.dual() is not LPStatus.OPTIMAL:
            raise RuntimeError("dual simplex lost feasibility of the t = 0 point")


def verify_witness(lp: RelaxationLP, x: Sequence[Fraction]) -> bool:
    """Check every constraint of the relaxation exactly."""
    if len(x) != lp.n_variables or any(v < 0 for v in x):
        return False
    for row in lp.degree_rows():
        if sum((xi for xi, a in zip(x, row) if a), Fraction(0)) != 1:
            return False
    for row in np.unique(lp.violations, axis=0):
        if sum((x[j] for j in np.flatnonzero(row)), Fraction(0)) < 1:
            return False
    return True


# -- slack matrix -----------------------------------------------------------

@dataclass(frozen=True)
class SlackMatrix:
    """entry[i, j] = |M_i cap E_{L_j}| - 1 (plus optional zero degree columns)."""

    graph: ColoredBipartiteGraph
    target: Parity
    matchings: tuple[Matching, ...]
    labelings: tuple[Labeling, ...]
    entries: np.ndarray
    degree_columns: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.entries[i, j]))

    def violation_counts(self) -> np.ndarray:
        return self.entries[:, :len(self.labelings)] + 1

    def max_entry(self) -> int:
        return int(self.entries.max(initial=0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# schema_version: {SCHEMA_VERSION}\n")
        w = csv.writer(buf, lineterminator="\n")
        header = ["row"] + [f"L{j}" for j in range(len(self.labelings))]
        header += [f"deg{j}" for j in range(self.degree_columns)]
        w.writerow(header)
        for i in range(self.entries.shape[0]):
            w.writerow([f"M{i}"] + [int(v) for v in self.entries[i]])
        return buf.getvalue()

    def sidecar(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "target": self.target.value,
            "n": self.graph.n_left,
            "shape": list(self.entries.shape),
            "rows": [matching_to_json(m) for m in self.matchings],
            "cols": [lab.bitstring() for lab in self.labelings],
            "degree_columns": self.degree_columns,
            "edges": [edge_to_json(e) for e in self.graph.edges],
            **self.meta,
        }


def build_slack_matrix(g: ColoredBipartiteGraph, target: Parity = Parity.ODD,
                       include_degree: bool = False,
                       matching_cap: int | None = MATCHING_CAP,
                       labeling_cap: int | None = LABELING_VERTEX_CAP) -> SlackMatrix:
    target = Parity(target)
    rows = tuple(m for m in iter_perfect_matchings(g, matching_cap) if m.parity is target)
    cols = labeling_table(g.n, target, labeling_cap)
    viol = violation_matrix(g, cols).T.astype(np.int64)
    index = g.edge_index
    ent = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for i, m in enumerate(rows):
        ent[i] = viol[[index[e] for e in m.edges]].sum(axis=0) - 1
    n_deg = g.n_left + g.n_right if include_degree else 0
    if n_deg:
        ent = np.hstack([ent, np.zeros((len(rows), n_deg), dtype=np.int64)])
    return SlackMatrix(g, target, rows, cols, ent, n_deg)


def slack_entry_direct(m: Matching, lab: Labeling, g: ColoredBipartiteGraph) -> int:
    """One entry from the definition, for cross-checking the vectorised build."""
    return violation_count(m, lab, g) - 1


def read_matrix_csv(text: str) -> np.ndarray:
    """Parse a matrix CSV (ours or a plain numeric grid) into an integer/float array."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    reader = list(csv.reader(lines))
    if not reader:
        raise ValueError("empty matrix file")
    has_header = not _is_number(reader[0][-1]) or reader[0][0] == "row"
    body = reader[1:] if has_header else reader
    vals = []
    for r in body:
        cells = r[1:] if r and not _is_number(r[0]) else r
        vals.append([Fraction(c) for c in cells])
    if len({len(r) for r in vals}) > 1:
        raise ValueError("ragged matrix")
    if all(v.denominator == 1 for r in vals for v in r):
        return np.array([[int(v) for v in r] for r in vals], dtype=np.int64)
    return np.array(vals, dtype=object)


def _is_number(s: str) -> bool:
    try:
        Fraction(s)
        return True
    except ValueError:
        return False


def sidecar_json(s: SlackMatrix) -> str:
    return json.dumps(s.sidecar(), indent=1)
