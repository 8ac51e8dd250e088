"""Exact simplex on an integer-scaled tableau.

Every row is kept as integers with a positive coefficient on its basic
column; the true row is the stored row divided by that coefficient.  Pivots
use the fraction-free update ``row * p - f * pivot_row`` followed by division
by the row gcd, so no rationals are ever formed inside the loop.  Storage is
int64 while entries stay below 2**30 and switches to Python integers (object
arrays) afterwards, so results are exact at every size.

Both primal and dual iterations use Bland-style smallest-index rules.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

_SAFE = 1 << 30


class LPStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class Tableau:
    """Constraint rows ``T[:, :-1] x = T[:, -1]`` plus an objective row.

    The objective (minimised) is stored as ``dz * z + Z . x = Z_rhs``, so the
    reduced cost of column j is ``-Z[j] / dz`` and a column may enter when
    ``Z[j] > 0``.
    """

    def __init__(self, rows: Sequence[Sequence[int]], rhs: Sequence[int],
                 basis: Sequence[int], cost: Sequence[int] | None = None,
                 max_pivots: int = 1_000_000):
        m = len(rows)
        n = len(rows[0]) if m else len(cost or ())
        self.T = np.zeros((m, n + 1), dtype=np.int64)
        for i, (row, b) in enumerate(zip(rows, rhs)):
            self.T[i, :n] = row
            self.T[i, n] = b
        self.basis = list(basis)
        self.pivots = 0
        self.max_pivots = max_pivots
        self._maybe_widen()
        for i, b in enumerate(self.basis):
            if self.T[i, b] <= 0:
                raise ValueError("basic coefficients must be positive")
            col = self.T[:, b]
            if np.count_nonzero(col) != 1:
                raise ValueError("basis columns must be eliminated from other rows")
        self.set_cost(cost if cost is not None else [0] * n)

    # -- shape --------------------------------------------------------------

    @property
    def n_rows(self) -> int:
        return self.T.shape[0]

    @property
    def n_cols(self) -> int:
        return self.T.shape[1] - 1

    def _maybe_widen(self) -> None:
        if self.T.dtype == object:
            return
        big = int(np.abs(self.T).max(initial=0))
        if hasattr(self, "Z"):
            big = max(big, int(np.abs(self.Z).max(initial=0)), self.dz)
        if big >= _SAFE:
            self.T = self.T.astype(object)
            if hasattr(self, "Z"):
                self.Z = self.Z.astype(object)

    def add_columns(self, k: int) -> list[int]:
        """Append ``k`` zero columns; returns their indices."""
        start = self.n_cols
        pad = np.zeros((self.n_rows, k), dtype=self.T.dtype)
        self.T = np.concatenate([self.T[:, :-1], pad, self.T[:, -1:]], axis=1)
        zpad = np.zeros(k, dtype=self.Z.dtype)
        self.Z = np.concatenate([self.Z[:-1], zpad, self.Z[-1:]])
        return list(range(start, start + k))

    def add_row(self, coeffs: Sequence[int], rhs: int, basic: int) -> int:
        """Append the constraint ``coeffs . x = rhs`` with ``basic`` entering the basis.

        ``basic`` must be a fresh column (zero in every existing row) with a
        positive coefficient.  Existing basic columns are eliminated.
        """
        row = np.zeros(self.n_cols + 1, dtype=object)
        row[:-1] = list(coeffs)
        row[-1] = rhs
        if row[basic] <= 0 or np.any(self.T[:, basic] != 0):
            raise ValueError("new basic column must be fresh with a positive coefficient")
        for i, b in enumerate(self.basis):
            f = row[b]
            if f:
                row = row * int(self.T[i, b]) - f * self.T[i].astype(object)
                row = _reduce(row)
        if self.T.dtype != object and int(np.abs(row).max(initial=0)) < _SAFE:
            row = row.astype(np.int64)
        else:
            self.T = self.T.astype(object)
            self.Z = self.Z.astype(object)
        self.T = np.vstack([self.T, row[None, :].astype(self.T.dtype)])
        self.basis.append(basic)
        return self.n_rows - 1

    def drop_rows(self, rows: Sequence[int]) -> None:
        keep = [i for i in range(self.n_rows) if i not in set(rows)]
        self.T = self.T[keep]
        self.basis = [self.basis[i] for i in keep]

    def drop_columns(self, cols: Sequence[int]) -> list[int]:
        """Remove nonbasic columns; returns the old->new index map as a list (-1 dropped)."""
        cols = set(cols)
        if cols & set(self.basis):
            raise ValueError("cannot drop a basic column")
        keep = [j for j in range(self.n_cols) if j not in cols]
        remap = [-1] * self.n_cols
        for new, old in enumerate(keep):
            remap[old] = new
        self.T = self.T[:, keep + [self.n_cols]]
        self.Z = self.Z[keep + [len(self.Z) - 1]]
        self.basis = [remap[b] for b in self.basis]
        return remap

    # -- objective ----------------------------------------------------------

    def set_cost(self, cost: Sequence[int]) -> None:
        """Minimise ``cost . x`` from now on (integer costs)."""
        Z = np.zeros(self.n_cols + 1, dtype=object)
        Z[:-1] = [-int(c) for c in cost]
        dz = 1
        for i, b in enumerate(self.basis):
            f = Z[b]
            if f:
                p = int(self.T[i, b])
                Z = Z * p - f * self.T[i].astype(object)
                dz *= p
        Z, dz = _reduce_with_scale(Z, dz)
        self.dz = dz
        if self.T.dtype != object and max(int(np.abs(Z).max(initial=0)), dz) < _SAFE:
            self.Z = Z.astype(np.int64)
        else:
            self.T = self.T.astype(object)
            self.Z = Z

    def objective(self) -> Fraction:
        return Fraction(int(self.Z[-1]), int(self.dz))

    # -- values -------------------------------------------------------------

    def value(self, col: int) -> Fraction:
        for i, b in enumerate(self.basis):
            if b == col:
                return Fraction(int(self.T[i, -1]), int(self.T[i, b]))
        return Fraction(0)

    def solution(self) -> list[Fraction]:
        x = [Fraction(0)] * self.n_cols
        for i, b in enumerate(self.basis):
            x[b] = Fraction(int(self.T[i, -1]), int(self.T[i, b]))
        return x

    # -- pivoting -----------------------------------------------------------

    def pivot(self, r: int, c: int) -> None:
        p = int(self.T[r, c])
        if p == 0:
            raise ZeroDivisionError("pivot on a zero entry")
        self._maybe_widen()
        R = self.T[r].copy() if p > 0 else -self.T[r]
        P = abs(p)
        col = self.T[:, c].copy()
        col[r] = 0
        touched = np.nonzero(col)[0]
        if len(touched):
            self.T[touched] = self.T[touched] * P - np.outer(col[touched], R)
            self._normalize_rows(touched)
        self.T[r] = R
        self._normalize_rows(np.array([r]))
        f = self.Z[c]
        if f:
            self.Z = self.Z * P - f * R
            self.dz = int(self.dz) * P
            self.Z, self.dz = _reduce_with_scale(self.Z, self.dz)
        self.basis[r] = c
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise RuntimeError("pivot limit exceeded")

    def _normalize_rows(self, rows: np.ndarray) -> None:
        sub = self.T[rows]
        g = np.gcd.reduce(sub, axis=1)
        g = np.where(g == 0, 1, g)
        if self.T.dtype == object:
            self.T[rows] = sub // g[:, None]
        else:
            self.T[rows] = sub // g[:, None].astype(np.int64)

    def _nonbasic_mask(self) -> np.ndarray:
        mask = np.ones(self.n_cols, dtype=bool)
        mask[self.basis] = False
        return mask

    def primal(self, allowed: np.ndarray | None = None) -> LPStatus:
        """Primal simplex from a primal-feasible basis (Bland's rule).

        ``allowed`` restricts which columns may enter.
        """
        while True:
            zrow = self.Z[:-1]
            cand = (zrow > 0) & self._nonbasic_mask()
            if allowed is not None:
                cand &= allowed
            js = np.nonzero(cand)[0]
            if len(js) == 0:
                return LPStatus.OPTIMAL
            j = int(js[0])
            col = self.T[:, j]
            rows = np.nonzero(col > 0)[0]
            if len(rows) == 0:
                return LPStatus.UNBOUNDED
            best = None
            for i in rows:
                i = int(i)
                if best is None:
                    best = i
                    continue
                lhs = int(self.T[i, -1]) * int(self.T[best, j])
                rhs = int(self.T[best, -1]) * int(self.T[i, j])
                if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                    best = i
            self.pivot(best, j)

    def dual(self, allowed: np.ndarray | None = None) -> LPStatus:
        """Dual simplex from a dual-feasible basis (smallest-index rules)."""
        while True:
            rhs = self.T[:, -1]
            bad = np.nonzero(rhs < 0)[0]
            if len(bad) == 0:
                return LPStatus.OPTIMAL
            r = int(min(bad, key=lambda i: self.basis[int(i)]))
            row = self.T[r, :-1]
            cand = (row < 0) & self._nonbasic_mask()
            if allowed is not None:
                cand &= allowed
            js = np.nonzero(cand)[0]
            if len(js) == 0:
                return LPStatus.INFEASIBLE
            best = None
            for j in js:
                j = int(j)
                if best is None:
                    best = j
                    continue
                # compare Z_j / T_rj with Z_best / T_rbest (both ratios >= 0)
                lhs = int(self.Z[j]) * int(row[best])
                rhs_ = int(self.Z[best]) * int(row[j])
                if lhs < rhs_:
                    best = j
            self.pivot(r, best)


def _reduce(row: np.ndarray) -> np.ndarray:
    g = int(np.gcd.reduce(row.astype(object)))
    return row // g if g > 1 else row


def _reduce_with_scale(Z: np.ndarray, dz: int) -> tuple[np.ndarray, int]:
    g = int(np.gcd.reduce(Z.astype(object)))
    g = int(np.gcd(g, int(dz))) if g else int(dz)
    if g > 1:
        Z = Z // g
        dz = int(dz) // g
    return Z, int(dz)


@dataclass(frozen=True)
class LPResult:
    status: LPStatus
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    pivots: int = 0


def solve_lp(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = (),
             maximize: bool = False) -> LPResult:
    """Exact two-phase simplex for ``min/max c.x`` with ``x >= 0``.

    Data may be ints or Fractions; each row is scaled to integers.
    """
    n = len(c)
    rows: list[list[int]] = []
    rhs: list[int] = []
    kinds: list[str] = []
    for a, b in zip(A_ub, b_ub):
        ia, ib = _integer_row(a, b)
        rows.append(ia)
        rhs.append(ib)
        kinds.append("ub")
    for a, b in zip(A_eq, b_eq):
        ia, ib = _integer_row(a, b)
        rows.append(ia)
        rhs.append(ib)
        kinds.append("eq")
    m = len(rows)
    n_slack = sum(1 for k in kinds if k == "ub")
    width = n + n_slack + m     # structural, slacks, artificials
    full: list[list[int]] = []
    basis: list[int] = []
    art_cols: list[int] = []
    s = n
    for i, (row, b, kind) in enumerate(zip(rows, rhs, kinds)):
        line = row + [0] * (width - n)
        if kind == "ub":
            line[s] = 1
            slack_col = s
            s += 1
        else:
            slack_col = None
        if b < 0:
            line = [-x for x in line]
            b = -b
        if slack_col is not None and line[slack_col] > 0:
            basis.append(slack_col)
        else:
            a_col = n + n_slack + i
            line[a_col] = 1
            art_cols.append(a_col)
            basis.append(a_col)
        full.append(line)
        rhs[i] = b
    used = set(basis)
    unused_art = [n + n_slack + i for i in range(m) if n + n_slack + i not in used]
    if m == 0:
        sign = -1 if maximize else 1
        costs = [_as_fraction(v) * sign for v in c]
        if any(v < 0 for v in costs):
            return LPResult(LPStatus.UNBOUNDED)
        return LPResult(LPStatus.OPTIMAL, tuple(Fraction(0) for _ in range(n)), Fraction(0))
    tab = Tableau(full, rhs, basis)
    tab.drop_columns(unused_art)
    art = set(range(n + n_slack, tab.n_cols))
    if art:
        tab.set_cost([1 if j in art else 0 for j in range(tab.n_cols)])
        tab.primal()
        if tab.objective() > 0:
            return LPResult(LPStatus.INFEASIBLE, pivots=tab.pivots)
        _expel_artificials(tab, art)
        tab.drop_columns(sorted(j for j in art if j < tab.n_cols))
    cost = _integer_cost(c, maximize)
    tab.set_cost(cost + [0] * (tab.n_cols - n))
    status = tab.primal()
    if status is LPStatus.UNBOUNDED:
        return LPResult(status, pivots=tab.pivots)
    x = tuple(tab.solution()[:n])
    value = sum((_as_fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(LPStatus.OPTIMAL, x, value, tab.pivots)


def _expel_artificials(tab: Tableau, art: set[int]) -> None:
    """Pivot zero-level artificials out of the basis; drop redundant rows."""
    dead = []
    for i in range(tab.n_rows):
        if tab.basis[i] not in art:
            continue
        row = tab.T[i, :-1]
        js = [j for j in np.nonzero(row)[0] if int(j) not in art]
        if js:
            tab.pivot(i, int(js[0]))
        else:
            dead.append(i)
    if dead:
        tab.drop_rows(dead)


def _as_fraction(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _integer_row(a: Sequence, b) -> tuple[list[int], int]:
    vals = [_as_fraction(x) for x in a] + [_as_fraction(b)]
    den = 1
    for v in vals:
        den = den * v.denominator // np.gcd(den, v.denominator)
    ints = [int(v * den) for v in vals]
    return ints[:-1], ints[-1]


def _integer_cost(c: Sequence, maximize: bool) -> list[int]:
    vals = [_as_fraction(x) for x in c]
    den = 1
    for v in vals:
        den = den * v.denominator // int(np.gcd(den, v.denominator))
    sign = -1 if maximize else 1
    return [sign * int(v * den) for v in vals]
