"""Solver checks: hand-solved programs, brute-force agreement, determinism."""

import numpy as np
import pytest

from lcckit.lp import (CyclingError, LpFormatError, LpProblem, LpSolution,
                       format_problem, solve)
from tests.helpers import lp_brute_force, random_box_lp


def make(c, A, relations, b, lower, upper):
    return LpProblem(np.asarray(c, dtype=float), np.asarray(A, dtype=float),
                     tuple(relations), np.asarray(b, dtype=float),
                     np.asarray(lower, dtype=float),
                     np.asarray(upper, dtype=float))


def residuals_ok(problem, x, tol=1e-7):
    lhs = problem.A @ x
    for i, rel in enumerate(problem.relations):
        if rel == "<=" and lhs[i] > problem.b[i] + tol:
            return False
        if rel == ">=" and lhs[i] < problem.b[i] - tol:
            return False
    return bool(np.all(x >= problem.lower - 1e-9)
                and np.all(x <= problem.upper + 1e-9))


def test_single_variable_box():
    # maximize x on [0, 1] written as minimize -x
    problem = make([-1.0], np.zeros((0, 1)), (), [], [0.0], [1.0])
    sol = solve(problem)
    assert sol.status == "optimal"
    assert sol.x[0] == pytest.approx(1.0, abs=1e-12)
    assert sol.objective_value == pytest.approx(-1.0, abs=1e-12)


def test_two_variable_known_optimum():
    # minimize -x - y subject to x + y <= 1, box [0, 1]^2
    problem = make([-1.0, -1.0], [[1.0, 1.0]], ("<=",), [1.0],
                   [0.0, 0.0], [1.0, 1.0])
    sol = solve(problem)
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(-1.0, abs=1e-10)
    assert sol.x[0] + sol.x[1] == pytest.approx(1.0, abs=1e-10)


def test_geq_rows_and_negative_bounds():
    # minimize x + 2y subject to x + y >= 1, y >= -1; x in [-5, 5]
    problem = make([1.0, 2.0], [[1.0, 1.0]], (">=",), [1.0],
                   [-5.0, -1.0], [5.0, 5.0])
    sol = solve(problem)
    assert sol.status == "optimal"
    # push y to its lower bound, then x = 2 satisfies the row
    assert sol.x[1] == pytest.approx(-1.0, abs=1e-9)
    assert sol.x[0] == pytest.approx(2.0, abs=1e-9)
    assert sol.objective_value == pytest.approx(0.0, abs=1e-9)


def test_infeasible_reported_by_status():
    problem = make([1.0], [[1.0], [1.0]], ("<=", ">="), [-1.0, 1.0],
                   [-10.0], [10.0])
    sol = solve(problem)
    assert sol.status == "infeasible"
    assert sol.x is None
    assert sol.objective_value is None


def test_unbounded_reported_by_status():
    problem = make([-1.0], np.zeros((0, 1)), (), [],
                   [0.0], [np.inf])
    sol = solve(problem)
    assert sol.status == "unbounded"


def test_unbounded_with_row():
    # minimize -x - y with x - y <= 0 and no upper bounds
    problem = make([-1.0, -1.0], [[1.0, -1.0]], ("<=",), [0.0],
                   [0.0, 0.0], [np.inf, np.inf])
    sol = solve(problem)
    assert sol.status == "unbounded"


def test_equality_via_pair_of_rows():
    # x + y == 1 expressed as <= and >=, minimize x
    problem = make([1.0, 0.0], [[1.0, 1.0], [1.0, 1.0]], ("<=", ">="),
                   [1.0, 1.0], [0.0, 0.0], [1.0, 1.0])
    sol = solve(problem)
    assert sol.status == "optimal"
    assert sol.x[0] == pytest.approx(0.0, abs=1e-9)
    assert sol.x[1] == pytest.approx(1.0, abs=1e-9)


def test_one_sided_bounds_mix():
    # epsilon-style variable with lower bound only
    problem = make([0.0, 1.0], [[1.0, -1.0]], ("<=",), [0.0],
                   [-1.0, -0.25], [1.0, np.inf])
    sol = solve(problem)
    assert sol.status == "optimal"
    # objective pushes eps down to max(lower, best x), x free to sit at -1
    assert sol.objective_value == pytest.approx(-0.25, abs=1e-9)


def test_degenerate_many_redundant_rows_terminates():
    # many copies of the same active constraint force degenerate pivots
    A = np.vstack([np.ones((8, 2)), np.eye(2)])
    problem = make([-1.0, -1.0], A, ("<=",) * 10,
                   [1.0] * 8 + [1.0, 1.0], [0.0, 0.0], [2.0, 2.0])
    sol = solve(problem)
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(-1.0, abs=1e-9)


def test_iteration_cap_raises_cycling():
    problem = make([-1.0, -1.0], [[1.0, 1.0]], ("<=",), [1.0],
                   [0.0, 0.0], [1.0, 1.0])
    with pytest.raises(CyclingError, match="cycling suspected"):
        solve(problem, max_iterations=0)


def test_validation_rejects_bad_shapes():
    with pytest.raises(LpFormatError):
        make([1.0], [[1.0, 2.0]], ("<=",), [0.0], [0.0], [1.0])
    with pytest.raises(LpFormatError):
        make([1.0], [[1.0]], ("==",), [0.0], [0.0], [1.0])
    with pytest.raises(LpFormatError):
        make([1.0], [[1.0]], ("<=",), [0.0], [2.0], [1.0])
    with pytest.raises(LpFormatError):
        make([np.nan], [[1.0]], ("<=",), [0.0], [0.0], [1.0])


def test_solution_status_validated():
    with pytest.raises(LpFormatError):
        LpSolution("maybe", None, None, 0)


def test_format_problem_mentions_all_parts():
    problem = make([1.0, -2.0], [[1.0, 1.0]], (">=",), [3.0],
                   [0.0, -1.0], [5.0, np.inf])
    text = format_problem(problem)
    assert "minimize" in text
    assert ">=" in text
    assert "x1" in text


def test_matches_brute_force_on_random_box_lps():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 60:
        raw = random_box_lp(rng)
        status, best = lp_brute_force(*raw)
        problem = make(*raw)
        sol = solve(problem)
        assert sol.status in ("optimal", "infeasible")
        if status == "infeasible":
            # brute force misses no vertex on these boxes
            assert sol.status == "infeasible"
            continue
        assert sol.status == "optimal", format_problem(problem)
        assert sol.objective_value == pytest.approx(best, abs=1e-6)
        assert residuals_ok(problem, sol.x)
        checked += 1


def test_deterministic_bit_for_bit():
    rng = np.random.default_rng(123)
    raw = random_box_lp(rng)
    problem = make(*raw)
    first = solve(problem)
    second = solve(problem)
    assert first.status == second.status
    assert first.iterations == second.iterations
    if first.x is not None:
        assert np.array_equal(first.x, second.x)
        assert first.objective_value == second.objective_value


def test_bounds_respected_tightly():
    rng = np.random.default_rng(99)
    for _ in range(40):
        raw = random_box_lp(rng)
        sol = solve(make(*raw))
        if sol.status != "optimal":
            continue
        lo, hi = raw[4], raw[5]
        assert np.all(sol.x >= lo - 1e-9)
        assert np.all(sol.x <= hi + 1e-9)
