"""Lower and upper bounds on the nonnegative rank of small matrices.

Lower side: the hyperplane-separation ratio <W,S> / (max|S| * best rectangle
value of W), and the fractional rectangle-cover number of the support.
Upper side: multiplicative-update NNMF, trusted only after an exact rational
factorization has been checked.

Weights may contain a distinguished FORBIDDEN value (minus infinity).  A
rectangle touching a forbidden cell is never admissible, and a forbidden cell
contributes nothing to <W,S> as long as the slack there is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .polytope import SCHEMA_VERSION, SlackMatrix
from .simplex import LPStatus, solve_lp

EXHAUSTIVE_CAP = 22
_LOW_BITS = 11


class BoundUndefined(ValueError):
    """The requested bound has no meaningful value for this input."""


class _Forbidden:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "FORBIDDEN"

    def __reduce__(self):
        return (_Forbidden, ())


FORBIDDEN = _Forbidden()


def _to_entry(v):
    if v is FORBIDDEN:
        return v
    if isinstance(v, str) and v.strip().lower() in ("-inf", "forbidden", "x"):
        return FORBIDDEN
    if isinstance(v, float) and math.isinf(v) and v < 0:
        return FORBIDDEN
    return Fraction(v)


def as_fraction_matrix(s) -> np.ndarray:
    """2-D object array of Fractions from a SlackMatrix, array or nested lists."""
    if isinstance(s, SlackMatrix):
        s = s.entries
    arr = np.array(s, dtype=object)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = Fraction(v) if not isinstance(v, (np.integer, int)) else Fraction(int(v))
    return out


@dataclass(frozen=True)
class Rectangle:
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    @classmethod
    def of(cls, rows: Iterable[int], cols: Iterable[int]) -> "Rectangle":
        return cls(tuple(sorted(set(int(i) for i in rows))),
                   tuple(sorted(set(int(j) for j in cols))))

    @property
    def is_empty(self) -> bool:
        return not self.rows or not self.cols

    def contains(self, i: int, j: int) -> bool:
        return i in self.rows and j in self.cols

    def check_shape(self, shape: tuple[int, int]) -> None:
        if any(not 0 <= i < shape[0] for i in self.rows) or \
                any(not 0 <= j < shape[1] for j in self.cols):
            raise ValueError(f"rectangle {self} does not fit a {shape} matrix")

    def indicator(self, shape: tuple[int, int]) -> np.ndarray:
        self.check_shape(shape)
        out = np.zeros(shape, dtype=np.int64)
        if not self.is_empty:
            out[np.ix_(self.rows, self.cols)] = 1
        return out

    def to_json(self) -> dict:
        return {"rows": [i + 1 for i in self.rows], "cols": [j + 1 for j in self.cols]}


class WeightMatrix:
    """Rational weights with optional FORBIDDEN cells."""

    def __init__(self, entries, require_positive: bool = True):
        rows = [[_to_entry(v) for v in row] for row in entries]
        if not rows or len({len(r) for r in rows}) != 1 or not rows[0]:
            raise ValueError("weight matrix must be a nonempty rectangular grid")
        self.entries: tuple[tuple, ...] = tuple(tuple(r) for r in rows)
        self.shape = (len(rows), len(rows[0]))
        self.forbidden = np.array([[v is FORBIDDEN for v in r] for r in rows], dtype=bool)
        if require_positive and not self.has_positive():
            raise BoundUndefined("weight matrix has no positive entry")

    def __repr__(self) -> str:
        return f"WeightMatrix({self.shape[0]}x{self.shape[1]})"

    def has_positive(self) -> bool:
        return any(v is not FORBIDDEN and v > 0 for r in self.entries for v in r)

    def finite(self) -> np.ndarray:
        """Object array of Fractions with forbidden cells set to zero."""
        out = np.empty(self.shape, dtype=object)
        for i, r in enumerate(self.entries):
            for j, v in enumerate(r):
                out[i, j] = Fraction(0) if v is FORBIDDEN else v
        return out

    def integer_form(self) -> tuple[np.ndarray, int]:
        """(int64 weights * den, den); forbidden cells are 0 in the array."""
        fin = self.finite()
        den = math.lcm(*(v.denominator for v in fin.flat))
        ints = np.array([[int(v * den) for v in r] for r in fin], dtype=object)
        bound = int(np.abs(ints).sum()) if ints.size else 0
        if bound >= (1 << 62):
            raise OverflowError("weights too large for exact integer rectangle search")
        return ints.astype(np.int64), den

    def check_against(self, slack) -> None:
        s = as_fraction_matrix(slack)
        if s.shape != self.shape:
            raise ValueError(f"shape mismatch: weights {self.shape}, slack {s.shape}")
        bad = [(int(i), int(j)) for i, j in zip(*np.nonzero(self.forbidden)) if s[i, j] != 0]
        if bad:
            raise ValueError(f"forbidden weights on nonzero slack entries {bad[:5]}")

    def transpose(self) -> "WeightMatrix":
        return WeightMatrix([list(col) for col in zip(*self.entries)], require_positive=False)

    def to_rows(self) -> list[list[str]]:
        return [["-inf" if v is FORBIDDEN else str(v) for v in r] for r in self.entries]


def frobenius(w: WeightMatrix, s) -> Fraction:
    """<W,S> with forbidden*0 = 0; forbidden against a nonzero entry is an error."""
    w.check_against(s)
    s = as_fraction_matrix(s)
    return sum((a * b for a, b in zip(w.finite().flat, s.flat)), Fraction(0))


def rectangle_value(w: WeightMatrix, rect: Rectangle) -> Fraction | None:
    """<W,R>, or None when R covers a forbidden cell."""
    rect.check_shape(w.shape)
    if rect.is_empty:
        return Fraction(0)
    total = Fraction(0)
    for i in rect.rows:
        for j in rect.cols:
            v = w.entries[i][j]
            if v is FORBIDDEN:
                return None
            total += v
    return total


# -- rectangle search -------------------------------------------------------

def _bits(count: int, width: int) -> np.ndarray:
    return ((np.arange(count, dtype=np.int64)[:, None] >> np.arange(width)) & 1).astype(np.int64)


def _canonical_cols(sums: np.ndarray, forb: np.ndarray) -> np.ndarray:
    return (sums > 0) & (forb == 0)


def _search_side(ints: np.ndarray, forb: np.ndarray):
    """Best canonical value over all row subsets, and every row mask attaining it."""
    l, m = ints.shape
    lo = min(l, _LOW_BITS)
    hi = l - lo
    lo_bits = _bits(1 << lo, lo)
    lo_sum = lo_bits @ ints[:lo]
    lo_forb = lo_bits @ forb[:lo].astype(np.int64)
    hi_ints = ints[lo:]
    hi_forb = forb[lo:].astype(np.int64)
    best = 0
    ties: list[int] = []
    for h in range(1 << hi):
        hb = (h >> np.arange(hi)) & 1
        sums = lo_sum + hb @ hi_ints
        fcount = lo_forb + hb @ hi_forb
        vals = np.where(_canonical_cols(sums, fcount), sums, 0).sum(axis=1)
        top = int(vals.max())
        if top < best or top == 0:
            continue
        idx = (np.flatnonzero(vals == top) + (h << lo)).tolist()
        if top > best:
            best, ties = top, idx
        else:
            ties.extend(idx)
    return best, ties


def _rect_from_mask(mask: int, ints: np.ndarray, forb: np.ndarray) -> tuple[tuple[int, ...], tuple[int, ...]]:
    rows = tuple(i for i in range(ints.shape[0]) if mask >> i & 1)
    sums = ints[list(rows)].sum(axis=0)
    fc = forb[list(rows)].sum(axis=0)
    cols = tuple(int(j) for j in np.flatnonzero(_canonical_cols(sums, fc)))
    return rows, cols


def max_rectangle_value(w: WeightMatrix, mode: str = "exhaustive", cap: int = EXHAUSTIVE_CAP,
                        restarts: int = 32, seed: int = 0) -> tuple[Fraction, Rectangle]:
    """Largest <W,R> over admissible rectangles, with the rectangle attaining it.

    The empty rectangle (value 0) is always admissible.  ``exhaustive`` walks
    every subset of the smaller side and takes the positive-sum lines of the
    other side; ties go to the smallest (rows, cols) pair.  ``local_search``
    hill-climbs single-line flips from ``restarts`` starts.
    """
    ints, den = w.integer_form()
    forb = w.forbidden
    transpose = ints.shape[1] < ints.shape[0]
    if transpose:
        ints, forb = ints.T.copy(), forb.T.copy()
    if mode == "exhaustive":
        if ints.shape[0] > cap:
            raise ValueError(f"exhaustive rectangle search capped at {cap} lines, "
                             f"matrix needs {ints.shape[0]}")
        best, ties = _search_side(ints, forb)
        rects = [_rect_from_mask(t, ints, forb) for t in ties]
    elif mode == "local_search":
        best, rects = _local_search(ints, forb, restarts, seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if best <= 0:
        return Fraction(0), Rectangle((), ())
    if transpose:
        rects = [(c, r) for r, c in rects]
    rows, cols = min(rects)
    return Fraction(best, den), Rectangle(rows, cols)


def _local_search(ints: np.ndarray, forb: np.ndarray, restarts: int, seed: int):
    l = ints.shape[0]
    rng = np.random.default_rng(seed)
    f64 = forb.astype(np.int64)

    def value(mask: np.ndarray) -> int:
        sums = mask @ ints
        fc = mask @ f64
        return int(np.where(_canonical_cols(sums, fc), sums, 0).sum())

    if l < 63 and (1 << l) <= restarts:
        codes = rng.permutation(1 << l)
        starts = [((int(c) >> np.arange(l)) & 1).astype(np.int64) for c in codes]
    else:
        starts = [(rng.random(l) < 0.5).astype(np.int64) for _ in range(restarts)]
    best = 0
    found: list[tuple] = []
    for mask in starts:
        cur = value(mask)
        improved = True
        while improved:
            improved = False
            for i in rng.permutation(l):
                mask[i] ^= 1
                v = value(mask)
                if v > cur:
                    cur = v
                    improved = True
                    break
                mask[i] ^= 1
        if cur <= 0 or cur < best:
            continue
        code = sum(1 << i for i in range(l) if mask[i])
        rect = _rect_from_mask(code, ints, forb)
        if cur > best:
            best, found = cur, [rect]
        else:
            found.append(rect)
    return best, found


# -- hyperplane separation --------------------------------------------------

@dataclass(frozen=True)
class HyperplaneBound:
    value: Fraction
    inner: Fraction
    s_max: Fraction
    rect_value: Fraction
    rectangle: Rectangle
    exact: bool

    def report(self) -> dict:
        return bound_report("hyperplane", self.value, {
            "inner_product": str(self.inner),
            "max_abs_entry": str(self.s_max),
            "rectangle_value": str(self.rect_value),
            "rectangle": self.rectangle.to_json(),
            "exact_rectangle_search": self.exact,
        })


def hyperplane_bound(s, w: WeightMatrix, mode: str = "exhaustive", cap: int = EXHAUSTIVE_CAP,
                     restarts: int = 32, seed: int = 0) -> HyperplaneBound:
    """<W,S> / (max|S| * max_R <W,R>).

    Only an exhaustive rectangle search yields a sound lower bound on the
    nonnegative rank; ``exact`` is False for local search.
    """
    mat = as_fraction_matrix(s)
    if not w.has_positive():
        raise BoundUndefined("weight matrix has no positive entry")
    inner = frobenius(w, mat)
    s_max = max((abs(v) for v in mat.flat), default=Fraction(0))
    if s_max == 0:
        raise BoundUndefined("slack matrix is identically zero")
    rv, rect = max_rectangle_value(w, mode, cap, restarts, seed)
    if rv <= 0:
        raise BoundUndefined("largest rectangle value is not positive")
    return HyperplaneBound(inner / (s_max * rv), inner, s_max, rv, rect, mode == "exhaustive")


# -- rectangle covers -------------------------------------------------------

def maximal_rectangles(support: np.ndarray, limit: int = 20000) -> list[Rectangle]:
    """All inclusion-maximal all-ones rectangles of a 0/1 matrix.

    Column sides are exactly the nonempty intersections of row supports, so
    the family is built by closing the row supports under intersection.
    """
    sup = np.asarray(support, dtype=bool)
    row_sets = {frozenset(np.flatnonzero(r).tolist()) for r in sup}
    row_sets.discard(frozenset())
    closed: set[frozenset] = set(row_sets)
    frontier = list(closed)
    while frontier:
        nxt = []
        for a in frontier:
            for b in row_sets:
                c = a & b
                if c and c not in closed:
                    closed.add(c)
                    nxt.append(c)
                    if len(closed) > limit:
                        raise ValueError(f"more than {limit} maximal rectangles")
        frontier = nxt
    out = []
    for cols in closed:
        cl = sorted(cols)
        rows = np.flatnonzero(sup[:, cl].all(axis=1))
        out.append(Rectangle(tuple(int(i) for i in rows), tuple(cl)))
    return sorted(out, key=lambda r: (r.rows, r.cols))


@dataclass(frozen=True)
class CoverBound:
    value: Fraction
    rectangles: tuple[Rectangle, ...]
    weights: tuple[Fraction, ...]

    def report(self) -> dict:
        used = [{"rectangle": r.to_json(), "weight": str(y)}
                for r, y in zip(self.rectangles, self.weights) if y]
        return bound_report("rectangle_cover", self.value, {"cover": used})


def _support_entries(s) -> tuple[np.ndarray, list[tuple[int, int]]]:
    mat = as_fraction_matrix(s)
    sup = np.vectorize(lambda v: v != 0, otypes=[bool])(mat) if mat.size else np.zeros(mat.shape, bool)
    cells = [(int(i), int(j)) for i, j in zip(*np.nonzero(sup))]
    return sup, cells


def rectangle_cover_bound(s) -> CoverBound:
    """Fractional cover number of the support by all-ones rectangles (exact).

    An empty support is covered by the empty family, so its value is 0.
    """
    sup, cells = _support_entries(s)
    if not cells:
        return CoverBound(Fraction(0), (), ())
    rects = maximal_rectangles(sup)
    A = [[-1 if r.contains(i, j) else 0 for r in rects] for (i, j) in cells]
    res = solve_lp([1] * len(rects), A_ub=A, b_ub=[-1] * len(cells))
    if res.status is not LPStatus.OPTIMAL:
        raise RuntimeError(f"cover LP ended {res.status}")
    return CoverBound(res.value, tuple(rects), res.x)


def rectangle_packing_value(s) -> Fraction:
    """The dual of the cover LP: spread weight on support cells, at most 1 per rectangle."""
    sup, cells = _support_entries(s)
    if not cells:
        return Fraction(0)
    rects = maximal_rectangles(sup)
    A = [[1 if r.contains(i, j) else 0 for (i, j) in cells] for r in rects]
    res = solve_lp([1] * len(cells), A_ub=A, b_ub=[1] * len(rects), maximize=True)
    if res.status is not LPStatus.OPTIMAL:
        raise RuntimeError(f"packing LP ended {res.status}")
    return res.value


def fooling_set_ok(s, cells: Sequence[tuple[int, int]]) -> bool:
    """Nonzero cells no two of which fit in one rectangle of the support."""
    mat = as_fraction_matrix(s)
    for a, (i1, j1) in enumerate(cells):
        if mat[i1, j1] == 0:
            return False
        for (i2, j2) in cells[a + 1:]:
            if mat[i1, j2] != 0 and mat[i2, j1] != 0:
                return False
    return True


def exact_rank(s) -> int:
    """Rank over the rationals by fraction-exact elimination."""
    mat = [list(r) for r in as_fraction_matrix(s)]
    rank = 0
    n_cols = len(mat[0]) if mat else 0
    for c in range(n_cols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        p = mat[rank]
        for r in range(len(mat)):
            if r != rank and mat[r][c] != 0:
                f = mat[r][c] / p[c]
                mat[r] = [a - f * b for a, b in zip(mat[r], p)]
        rank += 1
    return rank


# -- nonnegative factorization ----------------------------------------------

@dataclass(frozen=True)
class NNMFResult:
    success: bool
    rank: int
    error: float
    W: np.ndarray = field(repr=False)
    H: np.ndarray = field(repr=False)
    restarts_used: int = 0
    exact: tuple | None = field(default=None, repr=False)   # (U, V) Fraction matrices

    @property
    def certified(self) -> bool:
        return self.exact is not None

    def report(self) -> dict:
        out = {
            "success": self.success,
            "rank": self.rank,
            "max_error": self.error,
            "certified": self.certified,
        }
        if self.exact is not None:
            U, V = self.exact
            out["U"] = [[str(v) for v in r] for r in U]
            out["V"] = [[str(v) for v in r] for r in V]
        return bound_report("nnmf_upper", Fraction(self.rank) if self.certified else None, out)


def _multiplicative_updates(S: np.ndarray, r: int, rng: np.random.Generator,
                            iters: int, tolerance: float) -> tuple[np.ndarray, np.ndarray]:
    l, m = S.shape
    scale = math.sqrt(max(S.mean(), 1e-12) / r)
    W = rng.random((l, r)) * scale + 1e-3
    H = rng.random((r, m)) * scale + 1e-3
    eps = 1e-12
    for it in range(1, iters + 1):
        H *= (W.T @ S) / (W.T @ W @ H + eps)
        W *= (S @ H.T) / (W @ H @ H.T + eps)
        if it % 250 == 0 and np.abs(S - W @ H).max() < tolerance:
            break
    return W, H


def nnmf_upper_bound(s, r: int, restarts: int = 8, tolerance: float = 1e-6,
                     seed: int = 0, iters: int = 30000, certify: bool = True) -> NNMFResult:
    """Heuristic search for S ~ W H with W, H >= 0 and inner dimension r.

    Failure proves nothing.  With ``certify`` the best factors are rounded
    and the exact system U V = S, V >= 0 is re-solved over the rationals.
    """
    if r < 1:
        raise ValueError("rank target must be at least 1")
    mat = as_fraction_matrix(s)
    S = np.array([[float(v) for v in row] for row in mat], dtype=float)
    if (S < 0).any():
        raise ValueError("matrix has negative entries")
    if not S.any():
        z = np.zeros((S.shape[0], r)), np.zeros((r, S.shape[1]))
        U = [[Fraction(0)] * r for _ in range(S.shape[0])]
        V = [[Fraction(0)] * S.shape[1] for _ in range(r)]
        return NNMFResult(True, r, 0.0, *z, 0, (U, V) if certify else None)
    rng = np.random.default_rng(seed)
    best = None
    for attempt in range(1, restarts + 1):
        W, H = _multiplicative_updates(S, r, rng, iters, tolerance)
        err = float(np.abs(S - W @ H).max())
        if best is None or err < best[0]:
            best = (err, W, H, attempt)
        if err < tolerance:
            break
    err, W, H, used = best
    # the exact re-solve can succeed where the float iterations stalled short
    exact = _certify(mat, W) if certify else None
    return NNMFResult(err < tolerance or exact is not None, r, err, W, H, used, exact)


def _certify(mat: np.ndarray, W: np.ndarray, denominators=(1, 2, 4, 8, 16, 64, 256, 1024)):
    """Exact nonnegative factors from a numerical left factor, if any rounding works."""
    l, r = W.shape
    # normalise columns so rounding has a fair chance
    scale = W.max(axis=0)
    scale[scale == 0] = 1.0
    Wn = W / scale
    for d in denominators:
        U = [[Fraction(round(x * d), d) for x in row] for row in Wn]
        V = solve_right_factor(mat, U)
        if V is not None:
            return U, V
    return None


def solve_right_factor(mat, U) -> list[list[Fraction]] | None:
    """Exact V >= 0 with U V = S, column by column, or None."""
    mat = as_fraction_matrix(mat)
    l, m = mat.shape
    r = len(U[0])
    if any(v < 0 for row in U for v in row):
        return None
    cols = []
    for j in range(m):
        res = solve_lp([0] * r, A_eq=[list(U[i]) for i in range(l)],
                       b_eq=[mat[i, j] for i in range(l)])
        if res.status is not LPStatus.OPTIMAL:
            return None
        cols.append(res.x)
    return [[cols[j][t] for j in range(m)] for t in range(r)]


def verify_factorization(s, U, V) -> bool:
    mat = as_fraction_matrix(s)
    l, m = mat.shape
    if len(U) != l or any(len(row) != len(V) for row in U) or any(len(row) != m for row in V):
        return False
    if any(Fraction(v) < 0 for row in U for v in row) or any(Fraction(v) < 0 for row in V for v in row):
        return False
    for i in range(l):
        for j in range(m):
            if sum((Fraction(U[i][t]) * Fraction(V[t][j]) for t in range(len(V))),
                   Fraction(0)) != mat[i, j]:
                return False
    return True


def extreme_column_factorization(s) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """S = U V with U made of the columns of S that generate its column cone."""
    mat = as_fraction_matrix(s)
    l, m = mat.shape
    cols = [tuple(mat[:, j]) for j in range(m)]
    keep: list[int] = []
    seen: set[tuple] = set()
    for j, c in enumerate(cols):
        if all(v == 0 for v in c):
            continue
        top = next(v for v in c if v != 0)
        key = tuple(v / top for v in c)
        if key not in seen:
            seen.add(key)
            keep.append(j)
    changed = True
    while changed:
        changed = False
        for j in list(keep):
            others = [k for k in keep if k != j]
            if not others:
                break
            res = solve_lp([0] * len(others),
                           A_eq=[[mat[i, k] for k in others] for i in range(l)],
                           b_eq=[mat[i, j] for i in range(l)])
            if res.status is LPStatus.OPTIMAL:
                keep.remove(j)
                changed = True
                break
    if not keep:
        return [[Fraction(0)] for _ in range(l)], [[Fraction(0)] * m]
    U = [[mat[i, k] for k in keep] for i in range(l)]
    V = solve_right_factor(mat, U)
    if V is None:
        raise RuntimeError("cone generators failed to reproduce the matrix")
    return U, V


def certified_upper_bound(s, max_rank: int | None = None, restarts: int = 8,
                          seed: int = 0, lower: int = 0) -> tuple[int, tuple]:
    """Smallest inner dimension with an exactly verified nonnegative factorization.

    Tries NNMF from max(rank, lower) upward, then falls back to the cone
    generators of the columns.  `lower` is any known lower bound on the
    nonnegative rank, e.g. a fractional cover value rounded up.
    Returns (rank, (U, V)).
    """
    mat = as_fraction_matrix(s)
    if all(v == 0 for v in mat.flat):
        return 0, ([[] for _ in range(mat.shape[0])], [])
    U, V = extreme_column_factorization(mat)
    best = (len(V), (U, V))
    top = min(best[0] - 1, max_rank if max_rank is not None else best[0] - 1)
    lo = max(exact_rank(mat), lower)
    for r in range(lo, top + 1):
        res = nnmf_upper_bound(mat, r, restarts=restarts, seed=seed)
        if res.certified:
            return r, res.exact
    return best


# -- the parity weight pattern ----------------------------------------------

def build_parity_weight_matrix(s: SlackMatrix, k: int,
                               mu3: Mapping[tuple[int, int], Fraction] | None,
                               mu4k3: Mapping[tuple[int, int], Fraction] | None = None,
                               require_positive: bool = True) -> WeightMatrix:
    """Weights by violation count: 1 forbidden, 3 -> mu3, 4k+3 -> -mu/(4k+2), else 0."""
    if k < 1:
        raise ValueError("k must be at least 1")
    counts = s.violation_counts()
    big = 4 * k + 3
    rows = []
    for i in range(counts.shape[0]):
        row = []
        for j in range(s.entries.shape[1]):
            c = int(counts[i, j]) if j < counts.shape[1] else None
            if c == 1:
                row.append(FORBIDDEN)
            elif c == 3:
                if mu3 is None or (i, j) not in mu3:
                    raise ValueError(f"no 3-violation weight supplied for entry {(i, j)}")
                row.append(Fraction(mu3[(i, j)]))
            elif c == big:
                if mu4k3 is None or (i, j) not in mu4k3:
                    raise ValueError(f"no {big}-violation weight supplied for entry {(i, j)}")
                row.append(-Fraction(mu4k3[(i, j)]) / (4 * k + 2))
            else:
                row.append(Fraction(0))
        rows.append(row)
    return WeightMatrix(rows, require_positive=require_positive)


def uniform_mass(s: SlackMatrix, count: int) -> dict[tuple[int, int], Fraction]:
    """Uniform distribution over the entries with the given violation count."""
    cells = [(int(i), int(j)) for i, j in zip(*np.nonzero(s.violation_counts() == count))]
    if not cells:
        return {}
    p = Fraction(1, len(cells))
    return {c: p for c in cells}


def bound_report(name: str, value: Fraction | None, witness) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "bound_name": name,
        "value_num": None if value is None else value.numerator,
        "value_den": None if value is None else value.denominator,
        "witness": witness,
    }
