"""Harmony search over budget-constrained box allocations.

Every candidate is pushed back onto ``{0 <= x <= U, sum x = budget}`` by
:func:`repair` before it is scored, so the only constraint left for the
search to reason about is the return constraint. That one is handled by a
feasibility-first ordering instead of a penalty weight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exact import FEASIBLE, INFEASIBLE, Solution
from .frv import make_rng
from .reduction import ReducedLP


@dataclass(frozen=True)
class HSParams:
    hms: int = 6
    hmcr: float = 0.9
    par: float = 0.5
    fw: tuple[float, ...] | None = None
    fw_frac: float = 0.05
    max_improvisations: int = 10_000
    seed: int = 0
    # optional linear schedules from the start value to these end values
    hmcr_final: float | None = None
    par_final: float | None = None
    fw_final_frac: float | None = None
    trace_every: int = 100

    def __post_init__(self):
        if self.hms < 1:
            raise ValueError("hms must be >= 1")
        if self.max_improvisations < 1:
            raise ValueError("max_improvisations must be >= 1")
        for name in ("hmcr", "par", "hmcr_final", "par_final"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.fw is not None and any(w < 0 for w in self.fw):
            raise ValueError("fret widths must be non-negative")
        if self.fw_frac < 0 or (self.fw_final_frac is not None and self.fw_final_frac < 0):
            raise ValueError("fret width fractions must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def fret_widths(self, upper: np.ndarray) -> np.ndarray:
        if self.fw is not None:
            if len(self.fw) != len(upper):
                raise ValueError(f"{len(self.fw)} fret widths for {len(upper)} variables")
            return np.asarray(self.fw, dtype=float)
        return self.fw_frac * upper

    def schedule(self, k: int, upper: np.ndarray) -> tuple[float, float, np.ndarray]:
        """(hmcr, par, fw) in force at improvisation k."""
        frac = k / (self.max_improvisations - 1) if self.max_improvisations > 1 else 0.0
        hmcr = self.hmcr if self.hmcr_final is None else self.hmcr + (self.hmcr_final - self.hmcr) * frac
        par = self.par if self.par_final is None else self.par + (self.par_final - self.par) * frac
        fw = self.fret_widths(upper)
        if self.fw_final_frac is not None:
            fw = fw + (self.fw_final_frac * upper - fw) * frac
        return hmcr, par, fw


def repair(x, upper, budget: float, tol: float = 1e-13) -> np.ndarray:
    """Project x onto the bounded budget simplex (not orthogonally).

    Clamp to the box, rescale to the budget, clamp again, then hand any
    remaining deficit to unsaturated coordinates in proportion to their
    headroom. Requires ``sum(upper) >= budget``.
    """
    upper = np.asarray(upper, dtype=float)
    x = np.clip(np.asarray(x, dtype=float), 0.0, upper)
    s = x.sum()
    if abs(s - budget) <= tol * budget:
        return x
    if s <= 1e-12 * budget:
        x = np.minimum(upper, budget * (upper / upper.sum()))
    else:
        x = np.minimum(x * (budget / s), upper)
    for _ in range(64):
        gap = budget - x.sum()
        if abs(gap) <= tol * budget:
            break
        if gap > 0:
            room = upper - x
            x = np.minimum(x + gap * room / room.sum(), upper)
        else:
            x = np.maximum(x + gap * x / x.sum(), 0.0)
    return x


@dataclass
class Candidate:
    x: np.ndarray
    objective: float
    violation: float
    feasible: bool

    @classmethod
    def score(cls, x: np.ndarray, lp: ReducedLP) -> Candidate:
        obj = lp.objective(x)
        viol = lp.violation(obj)
        return cls(x, obj, viol, viol <= lp.feasibility_tol())

    def key(self) -> tuple:
        # larger is better
        return (1, self.objective) if self.feasible else (0, -self.violation)


def compare(a: Candidate, b: Candidate) -> int:
    """1 if ``a`` is better, -1 if ``b`` is better, 0 on a tie.

    Feasible beats infeasible; infeasible candidates rank by smaller
    shortfall, feasible ones by larger objective.
    """
    ka, kb = a.key(), b.key()
    return (ka > kb) - (ka < kb)


class HarmonyMemory:
    def __init__(self, members: list[Candidate]):
        self.members = list(members)
        self.rows = np.array([m.x for m in self.members])

    def __len__(self) -> int:
        return len(self.members)

    def worst_index(self) -> int:
        # ties resolved to the highest index so older rows survive
        worst = 0
        for i in range(1, len(self.members)):
            if compare(self.members[i], self.members[worst]) <= 0:
                worst = i
        return worst

    def best(self) -> Candidate:
        best = self.members[0]
        for m in self.members[1:]:
            if compare(m, best) > 0:
                best = m
        return best

    def replace(self, i: int, cand: Candidate) -> None:
        self.members[i] = cand
        self.rows[i] = cand.x


def initialize_memory(lp: ReducedLP, p: HSParams, rng: np.random.Generator,
                      pool: int | None = None) -> HarmonyMemory:
    """Random repaired allocations; the best ``hms`` of ``pool`` (default 2*hms) are kept."""
    upper = np.asarray(lp.bounds)
    pool = max(p.hms, pool if pool is not None else 2 * p.hms)
    cands = [Candidate.score(repair(rng.random(lp.n) * upper, upper, lp.budget), lp)
             for _ in range(pool)]
    # stable sort keeps generation order among equals
    order = sorted(range(pool), key=lambda i: cands[i].key(), reverse=True)
    return HarmonyMemory([cands[i] for i in order[:p.hms]])


def improvise(hm: HarmonyMemory, lp: ReducedLP, p: HSParams, rng: np.random.Generator,
              k: int = 0) -> np.ndarray:
    upper = np.asarray(lp.bounds)
    n = lp.n
    hmcr, par, fw = p.schedule(k, upper)
    # fixed draw pattern per improvisation keeps runs reproducible
    from_memory = rng.random(n) < hmcr
    rows = rng.integers(len(hm), size=n)
    adjust = rng.random(n) < par
    delta = rng.uniform(-1.0, 1.0, n) * fw
    fresh = rng.random(n) * upper

    x = np.where(from_memory, hm.rows[rows, np.arange(n)], fresh)
    x = np.where(from_memory & adjust, x + delta, x)
    return repair(np.clip(x, 0.0, upper), upper, lp.budget)


def solve_hs(lp: ReducedLP, p: HSParams | None = None) -> Solution:
    """Run harmony search; the returned Solution carries a convergence trace.

    Trace rows are ``(iteration, best_objective, best_violation)`` recorded
    after initialisation and every ``p.trace_every`` improvisations.
    """
    p = p or HSParams()
    if sum(lp.bounds) < lp.budget:
        raise ValueError("budget exceeds the sum of upper bounds")
    rng = make_rng(p.seed)
    hm = initialize_memory(lp, p, rng)
    best = hm.best()
    trace = [(0, best.objective, best.violation)]
    for k in range(1, p.max_improvisations + 1):
        cand = Candidate.score(improvise(hm, lp, p, rng, k - 1), lp)
        worst = hm.worst_index()
        if compare(cand, hm.members[worst]) > 0:
            hm.replace(worst, cand)
            if compare(cand, best) > 0:
                best = cand
        if k % p.trace_every == 0 or k == p.max_improvisations:
            trace.append((k, best.objective, best.violation))
    status = FEASIBLE if best.feasible else INFEASIBLE
    return Solution(tuple(float(v) for v in best.x), best.objective, status, "hs",
                    violation=best.violation, trace=tuple(trace))
