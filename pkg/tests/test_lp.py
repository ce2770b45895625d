import numpy as np
import pytest
from scipy.optimize import linprog

from contact_cwc import NumericalFailure, lp


def random_problem(rng, m=5, n=9):
    A = rng.normal(size=(m, n))
    x0 = rng.uniform(0, 1, n) * (rng.random(n) < 0.6)
    return A, A @ x0


def test_feasibility_matches_highs():
    rng = np.random.default_rng(7)
    A = rng.normal(size=(6, 10))
    B = rng.normal(size=(400, 6)) * 3
    ours = lp.solve_batch(A, B)
    for b, status in zip(B, ours.status):
        ref = linprog(np.zeros(10), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
        assert (status == lp.OPTIMAL) == (ref.status == 0)


def test_optimum_matches_highs():
    rng = np.random.default_rng(8)
    for _ in range(150):
        A, b = random_problem(rng)
        c = rng.normal(size=A.shape[1])
        ours = lp.solve(A, b, c)
        ref = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
        if ref.status == 0:
            assert ours.status == lp.OPTIMAL
            assert ours.fun == pytest.approx(ref.fun, abs=1e-7, rel=1e-7)
            assert np.allclose(A @ ours.x, b, atol=1e-8)
            assert ours.x.min() >= 0
        else:
            assert ref.status == 3 and ours.status == lp.UNBOUNDED


def test_batch_equals_individual_solves():
    rng = np.random.default_rng(9)
    A = rng.normal(size=(4, 7))
    B = rng.normal(size=(600, 4))
    c = rng.uniform(0.1, 1, 7)
    batch = lp.solve_batch(A, B, c, chunk=100)
    for k in range(0, 600, 37):
        one = lp.solve(A, B[k], c)
        assert one.status == batch.status[k]
        if one.status == lp.OPTIMAL:
            assert one.fun == pytest.approx(batch.fun[k], abs=1e-12)


def test_infeasible_and_unbounded():
    A = np.array([[1.0, 1.0]])
    assert lp.solve(A, [-1.0]).status == lp.INFEASIBLE
    assert np.isnan(lp.solve(A, [-1.0], [1.0, 1.0]).fun)
    res = lp.solve(np.array([[1.0, -1.0]]), [1.0], [0.0, -1.0])
    assert res.status == lp.UNBOUNDED


def test_degenerate_problem_terminates():
    # classic cycling example for Dantzig's rule, in standard form with slacks
    A = np.array([[0.5, -5.5, -2.5, 9, 1, 0, 0],
                  [0.5, -1.5, -0.5, 1, 0, 1, 0],
                  [1, 0, 0, 0, 0, 0, 1]])
    c = np.array([-10, 57, 9, 24, 0, 0, 0], dtype=float)
    res = lp.solve(A, [0, 0, 1], c)
    assert res.status == lp.OPTIMAL and res.fun == pytest.approx(-1.0)


def test_iteration_cap():
    rng = np.random.default_rng(1)
    A, b = random_problem(rng, 8, 20)
    with pytest.raises(NumericalFailure):
        lp.solve(A, b, rng.normal(size=20), max_iter=1)


def test_maximize_over_polyhedron():
    # max x + y over the unit square
    A = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
    status, value, w = lp.maximize_over_polyhedron([1, 1], A, [1, 1, 0, 0])
    assert status == lp.OPTIMAL and value == pytest.approx(2) and np.allclose(w, [1, 1])
    status, _, _ = lp.maximize_over_polyhedron([1, 0], A[2:], [0, 0])
    assert status == lp.UNBOUNDED
    status, value, _ = lp.maximize_over_polyhedron([1, 0], A[2:], [0, 0], box=1.0)
    assert status == lp.OPTIMAL and value == pytest.approx(1)
