import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import lp_vertex_optimum
from possifolio.exact import INFEASIBLE, OPTIMAL, brute_force_grid, solve_exact
from possifolio.reduction import ChanceLevels, ReducedLP, reduce


def _lp(c, bounds, budget, rhs=-math.inf):
    return ReducedLP(tuple(c), rhs, budget, tuple(bounds))


@pytest.mark.parametrize("level, x, objective", [
    (0.1, (20, 60, 60, 0, 60), Fraction("451.22")),
    (0.4, (60, 0, 60, 20, 60), Fraction("331.85")),
    (0.7, (20, 0, 60, 60, 60), Fraction("245.36")),
])
def test_table1_optima_match_vertex_oracle(table1, level, x, objective):
    lp = reduce(table1, ChanceLevels(level, level), "paper_2dp")
    # rational vertex enumeration on the 2-dp coefficients
    coeffs = [Fraction(f"{c:.4f}") for c in lp.c]
    oracle_obj, oracle_x, feasible = lp_vertex_optimum(coeffs, lp.bounds, lp.budget, lp.rhs)
    assert oracle_obj == objective and tuple(oracle_x) == x and feasible
    sol = solve_exact(lp)
    assert sol.status == OPTIMAL
    assert sol.x == x
    assert sol.objective == pytest.approx(float(objective), abs=1e-9)


def test_table1_high_levels_infeasible(table1):
    lp = reduce(table1, ChanceLevels(0.9, 0.9), "paper_2dp")
    sol = solve_exact(lp)
    assert sol.status == INFEASIBLE
    assert sol.objective == pytest.approx(164.44, abs=1e-9)
    assert sol.violation == pytest.approx(182 - 164.44, abs=1e-9)
    dropped = solve_exact(lp.without_return_constraint())
    assert dropped.status == OPTIMAL
    assert dropped.x == (20, 0, 60, 60, 60)
    assert dropped.objective == pytest.approx(164.44, abs=1e-9)


def test_prose_target_makes_high_levels_feasible(table1_prose):
    lp = reduce(table1_prose, ChanceLevels(0.9, 0.9), "paper_2dp")
    assert lp.rhs == pytest.approx(117.2)
    assert solve_exact(lp).status == OPTIMAL


def test_single_asset():
    sol = solve_exact(_lp([1.7], [50], 50))
    assert sol.x == (50,) and sol.objective == pytest.approx(85.0) and sol.status == OPTIMAL


def test_ties_go_to_lower_index():
    assert solve_exact(_lp([1, 1, 1], [10, 20, 30], 30)).x == (10, 20, 0)


def test_budget_unattainable_is_infeasible():
    assert solve_exact(_lp([1, 2], [1, 1], 5)).status == INFEASIBLE


def test_grid_examples():
    sol = brute_force_grid(_lp([3, 2, 1], [10, 20, 30], 30), 10)
    assert sol.x == (10, 20, 0) and sol.objective == 70
    sol = brute_force_grid(_lp([1, 1, 1], [10, 20, 30], 30), 10)
    assert sol.x == (10, 20, 0) and sol.objective == 30


def test_grid_guards():
    with pytest.raises(ValueError):
        brute_force_grid(_lp([1] * 5, [10] * 5, 30), 10)
    with pytest.raises(ValueError):
        brute_force_grid(_lp([1, 1], [1000, 1000], 1000), 1)
    with pytest.raises(ValueError):
        brute_force_grid(_lp([1, 1], [10, 10], 15), 10)


def test_grid_infeasible_when_rhs_unreachable():
    sol = brute_force_grid(_lp([1, 2], [10, 10], 10, rhs=100), 5)
    assert sol.status == INFEASIBLE


def _random_lattice_lp(rng, step=5):
    n = int(rng.integers(1, 5))
    units = [int(u) for u in rng.integers(0, 9, n)]
    units[int(rng.integers(n))] += 1
    total = int(rng.integers(1, sum(units) + 1))
    c = rng.uniform(-1, 3, n).round(6)
    lp = _lp(c, [u * step for u in units], total * step)
    if rng.random() < 0.5:
        lp = ReducedLP(lp.c, float(rng.uniform(-20, 60)), lp.budget, lp.bounds)
    return lp, step


def test_random_lattice_equals_greedy_and_vertex_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        lp, step = _random_lattice_lp(rng)
        greedy, grid = solve_exact(lp), brute_force_grid(lp, step)
        oracle_obj, _, feasible = lp_vertex_optimum(lp.c, lp.bounds, lp.budget,
                                                    lp.rhs if lp.return_constraint else None)
        assert greedy.objective == grid.objective
        assert greedy.objective == pytest.approx(float(oracle_obj), abs=1e-9)
        assert greedy.status == grid.status == (OPTIMAL if feasible else INFEASIBLE)


def test_off_lattice_grid_never_beats_greedy():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        bounds = rng.uniform(10, 40, n)
        budget = 10.0 * int(rng.integers(1, int(bounds.sum() // 10) + 1))
        lp = _lp(rng.uniform(0, 2, n), bounds, budget)
        try:
            grid = brute_force_grid(lp, 10)
        except ValueError:
            continue
        assert grid.objective <= solve_exact(lp).objective + 1e-12


def test_scaling_and_permutation():
    rng = np.random.default_rng(3)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        c = rng.uniform(0, 3, n)
        bounds = rng.uniform(0, 50, n)
        budget = float(rng.uniform(0.1, 1.0) * bounds.sum())
        base = solve_exact(_lp(c, bounds, budget))
        for k in (2.0, 0.25, 8.0):
            scaled = solve_exact(_lp(c, bounds * k, budget * k))
            assert scaled.objective == base.objective * k
            assert scaled.x == tuple(v * k for v in base.x)
        perm = rng.permutation(n)
        permuted = solve_exact(_lp(c[perm], bounds[perm], budget))
        assert permuted.x == tuple(base.x[j] for j in perm)
        assert permuted.objective == pytest.approx(base.objective, rel=1e-14)
