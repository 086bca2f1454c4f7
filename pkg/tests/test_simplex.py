import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from subsetmax.simplex import LPError, solve_packing_lp


def basic_solutions_opt(c, A, r):
    """Max of c.x over {Ax <= r, x >= 0} by enumerating every basic solution."""
    m, n = A.shape
    G = np.vstack([A, -np.eye(n)])
    h = np.concatenate([r, np.zeros(n)])
    best = -np.inf
    for rows in itertools.combinations(range(m + n), n):
        M = G[list(rows)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, h[list(rows)])
        if np.all(G @ x <= h + 1e-9):
            best = max(best, float(c @ x))
    return best


@st.composite
def packing_lps(draw, max_n=5, max_m=5):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    A = np.array(draw(st.lists(st.sampled_from([0.0, 0.0, 1.0, 2.0, 0.5]), min_size=m * n, max_size=m * n))).reshape(m, n)
    # box rows keep every instance bounded
    A = np.vstack([A, np.eye(n)])
    r = np.array(draw(st.lists(st.sampled_from([0.0, 1.0, 2.0, 3.0, 0.5]), min_size=m + n, max_size=m + n)))
    c = np.array(draw(st.lists(st.integers(-3, 5), min_size=n, max_size=n)), dtype=float)
    return c, A, r


def test_path_example():
    A = np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]] + np.eye(3).tolist(), dtype=float)
    r = np.ones(6)
    c = np.array([1.0, 3.0, 1.0])
    sol = solve_packing_lp(c, A, r)
    assert sol.value == pytest.approx(3.0)
    assert basic_solutions_opt(c, A, r) == pytest.approx(3.0)
    # (0, 1, 1) violates the {1, 2} row
    assert (A @ np.array([0, 1, 1]) > r).any()


def test_zero_objective_and_unbounded():
    A = np.array([[1.0, 1.0]])
    assert solve_packing_lp([0.0, 0.0], A, [1.0]).value == 0
    with pytest.raises(LPError):
        solve_packing_lp([1.0, 0.0], np.array([[0.0, 1.0]]), [1.0])
    with pytest.raises(ValueError):
        solve_packing_lp([1.0], A, [1.0])
    with pytest.raises(ValueError):
        solve_packing_lp([1.0, 1.0], A, [-1.0])


def test_degenerate_instance_terminates():
    # many tight constraints at the origin invite cycling under Dantzig's rule
    A = np.array([[0.5, -5.5, -2.5, 9], [0.5, -1.5, -0.5, 1], [1, 0, 0, 0]])
    c = np.array([10, -57, -9, -24.0])
    sol = solve_packing_lp(c, A, [0, 0, 1])
    assert sol.value == pytest.approx(1.0)


@settings(max_examples=150, deadline=None)
@given(packing_lps())
def test_matches_basic_solution_enumeration(lp):
    c, A, r = lp
    sol = solve_packing_lp(c, A, r)
    assert sol.value == pytest.approx(basic_solutions_opt(c, A, r), abs=1e-7)
    assert np.all(A @ sol.x <= r + 1e-9) and np.all(sol.x >= 0)
    assert sol.dual_bound == pytest.approx(sol.value, abs=1e-7)


@settings(max_examples=100, deadline=None)
@given(packing_lps(max_n=12, max_m=12))
def test_matches_scipy(lp):
    c, A, r = lp
    ref = linprog(-c, A_ub=A, b_ub=r, bounds=(0, None), method="highs")
    assert solve_packing_lp(c, A, r).value == pytest.approx(-ref.fun, abs=1e-7)
