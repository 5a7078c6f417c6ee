"""Exact solution of the reduced LP and a lattice brute-force oracle.

The reduced LP is a continuous knapsack with an equality budget: filling
assets in order of decreasing coefficient maximises ``c.x``. The return
constraint ``c.x >= rhs`` points the same way as the objective, so if the
greedy optimum misses it, nothing else can meet it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .reduction import ReducedLP

OPTIMAL = "optimal"
FEASIBLE = "feasible"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class Solution:
    x: tuple[float, ...]
    objective: float
    status: str
    solver: str
    violation: float = 0.0
    trace: tuple = field(default=(), compare=False, repr=False)

    @property
    def ok(self) -> bool:
        return self.status != INFEASIBLE


def _status(lp: ReducedLP, objective: float) -> tuple[str, float]:
    shortfall = lp.violation(objective)
    if shortfall > lp.feasibility_tol():
        return INFEASIBLE, shortfall
    return OPTIMAL, 0.0


def greedy_order(c) -> list[int]:
    """Indices by decreasing coefficient, ties to the lower index."""
    return sorted(range(len(c)), key=lambda j: (-c[j], j))


def solve_exact(lp: ReducedLP) -> Solution:
    remaining = lp.budget
    x = [0.0] * lp.n
    for j in greedy_order(lp.c):
        if remaining <= 0.0:
            break
        take = min(lp.bounds[j], remaining)
        x[j] = take
        remaining -= take
    objective = lp.objective(x)
    if math.fsum(lp.bounds) < lp.budget:
        return Solution(tuple(x), objective, INFEASIBLE, "exact", violation=lp.budget - math.fsum(x))
    status, shortfall = _status(lp, objective)
    return Solution(tuple(x), objective, status, "exact", violation=shortfall)


MAX_GRID_ASSETS = 4
MAX_GRID_UNITS = 100


def brute_force_grid(lp: ReducedLP, step: float) -> Solution:
    """Enumerate every allocation on the ``step`` lattice that spends the budget.

    Points are visited in lexicographically decreasing order and only a
    strictly better point replaces the incumbent, so among ties the
    lexicographically largest allocation wins.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    units = lp.budget / step
    if lp.n > MAX_GRID_ASSETS or units > MAX_GRID_UNITS:
        raise ValueError(f"grid too large: n={lp.n} (max {MAX_GRID_ASSETS}), "
                         f"budget/step={units:g} (max {MAX_GRID_UNITS})")
    total = round(units)
    if abs(total - units) > 1e-9 * max(1.0, units):
        raise ValueError("budget is not a multiple of step")
    caps = [min(total, int(math.floor(u / step + 1e-9))) for u in lp.bounds]

    best = None
    for head in itertools.product(*(range(k, -1, -1) for k in caps[:-1])):
        last = total - sum(head)
        if not 0 <= last <= caps[-1]:
            continue
        x = tuple(k * step for k in (*head, last))
        obj = lp.objective(x)
        key = (lp.violation(obj) <= lp.feasibility_tol(), obj)
        if best is None or key > best[0]:
            best = (key, x, obj)
    if best is None:
        return Solution(tuple([0.0] * lp.n), -math.inf, INFEASIBLE, "grid", violation=math.inf)
    (feasible, _), x, obj = best
    status = OPTIMAL if feasible else INFEASIBLE
    return Solution(x, obj, status, "grid", violation=lp.violation(obj) if not feasible else 0.0)
