from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from paritymatch.simplex import LPStatus, solve_lp


def test_small_maximisation():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    res = solve_lp([1, 1], A_ub=[[1, 2], [3, 1]], b_ub=[4, 6], maximize=True)
    assert res.status is LPStatus.OPTIMAL
    assert res.x == (Fraction(8, 5), Fraction(6, 5))
    assert res.value == Fraction(14, 5)


def test_infeasible_and_unbounded():
    assert solve_lp([1], A_eq=[[1]], b_eq=[-1]).status is LPStatus.INFEASIBLE
    assert solve_lp([1], A_ub=[[-1]], b_ub=[-1], maximize=True).status is LPStatus.UNBOUNDED


def test_fractional_data():
    res = solve_lp([Fraction(1, 3)], A_eq=[[Fraction(2, 7)]], b_eq=[Fraction(1, 5)])
    assert res.x == (Fraction(7, 10),)


def test_degenerate_problem_terminates():
    # Beale-style cycling example
    c = [Fraction(-3, 4), 150, Fraction(-1, 50), 6]
    A = [[Fraction(1, 4), -60, Fraction(-1, 25), 9],
         [Fraction(1, 2), -90, Fraction(-1, 50), 3],
         [0, 0, 1, 0]]
    res = solve_lp(c, A_ub=A, b_ub=[0, 0, 1])
    assert res.status is LPStatus.OPTIMAL
    assert res.value == Fraction(-1, 20)


small_ints = st.integers(-4, 4)


@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2), st.data())
def test_agrees_with_highs(n_var, n_ub, n_eq, data):
    c = data.draw(st.lists(small_ints, min_size=n_var, max_size=n_var))
    A_ub = data.draw(st.lists(st.lists(small_ints, min_size=n_var, max_size=n_var), min_size=n_ub, max_size=n_ub))
    b_ub = data.draw(st.lists(st.integers(0, 6), min_size=n_ub, max_size=n_ub))
    A_eq = data.draw(st.lists(st.lists(small_ints, min_size=n_var, max_size=n_var), min_size=n_eq, max_size=n_eq))
    b_eq = data.draw(st.lists(small_ints, min_size=n_eq, max_size=n_eq))
    ours = solve_lp(c, A_ub, b_ub, A_eq, b_eq)
    ref = linprog(c, A_ub=np.array(A_ub) if A_ub else None, b_ub=b_ub or None,
                  A_eq=np.array(A_eq) if A_eq else None, b_eq=b_eq or None,
                  bounds=[(0, None)] * n_var, method="highs")
    if ref.status == 0:
        assert ours.status is LPStatus.OPTIMAL
        assert float(ours.value) == pytest.approx(ref.fun, abs=1e-7)
        x = ours.x
        assert all(v >= 0 for v in x)
        for row, b in zip(A_ub, b_ub):
            assert sum(a * v for a, v in zip(row, x)) <= b
        for row, b in zip(A_eq, b_eq):
            assert sum(a * v for a, v in zip(row, x)) == b
    elif ref.status in (2, 3):
        # HiGHS may report either code for "infeasible or unbounded"; a zero
        # objective separates the two cases
        assert ours.status in (LPStatus.INFEASIBLE, LPStatus.UNBOUNDED)
        zero = linprog([0] * n_var, A_ub=np.array(A_ub) if A_ub else None, b_ub=b_ub or None,
                       A_eq=np.array(A_eq) if A_eq else None, b_eq=b_eq or None,
                       bounds=[(0, None)] * n_var, method="highs")
        feasible = solve_lp([0] * n_var, A_ub, b_ub, A_eq, b_eq).status is LPStatus.OPTIMAL
        assert feasible == (zero.status == 0)
        assert ours.status is (LPStatus.UNBOUNDED if feasible else LPStatus.INFEASIBLE)
