"""Simulation check of the chance-constraint reduction.

Samples of the shared driving variable t are pushed through the fuzzy
machinery directly (aggregate return, possibility degree, threshold on eta)
and the hit fraction is compared with the probability level. Nothing here
uses the reduced coefficients; :func:`analytic_objective_chance` and
:func:`analytic_constraint_chance` give the closed-form counterparts.

Because every peak moves by ``t * R2``, the aggregate return at t is the
aggregate at 0 translated by ``t * sum(R2_j x_j)``. Possibility degrees are
translation invariant, so a whole chunk of samples is evaluated by shifting
the crisp threshold (or the target) instead of rebuilding LR numbers per
sample.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .frv import realize, sample
from .fuzzy import possibility_from_gap, possibility_ge_crisp
from .model import PortfolioInstance, aggregate_return, portfolio_shift

CHUNK = 1 << 15


@dataclass(frozen=True)
class Estimate:
    p_hat: float
    half_width: float
    n_samples: int

    def verdict(self, level: float) -> str:
        """``above``/``below`` the level, or ``boundary`` inside the 3-sigma band."""
        if abs(self.p_hat - level) <= self.half_width:
            return "boundary"
        return "above" if self.p_hat > level else "below"


def _estimate(hits: int, n: int) -> Estimate:
    p = hits / n
    return Estimate(p, 3.0 * math.sqrt(p * (1.0 - p) / n), n)


def _chunked_hits(inst: PortfolioInstance, n_samples: int, seed: int, count, workers: int) -> int:
    # chunk k always draws from stream (seed, k): result is independent of workers
    sizes = [min(CHUNK, n_samples - start) for start in range(0, n_samples, CHUNK)]

    def run(k: int) -> int:
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), k]))
        t = sample(inst.distribution, rng, sizes[k])
        return int(count(t))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(k) for k in range(len(sizes))]
    return sum(parts)


def _check(inst: PortfolioInstance, x: Sequence[float], n_samples: int) -> list[float]:
    x = [float(v) for v in x]
    if len(x) != inst.n:
        raise ValueError(f"allocation has {len(x)} entries, instance has {inst.n} assets")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    return x


def estimate_objective_chance(inst: PortfolioInstance, x: Sequence[float], f: float, eta: float,
                              n_samples: int, seed: int, workers: int = 1) -> Estimate:
    """Estimate ``Pr{t | possibility(Z(t) >= f) >= eta}``."""
    x = _check(inst, x, n_samples)
    z0 = aggregate_return(inst, x, 0.0)
    slope = portfolio_shift(inst, x)

    def count(t):
        return np.count_nonzero(possibility_ge_crisp(z0, f - t * slope) >= eta)

    return _estimate(_chunked_hits(inst, n_samples, seed, count, workers), n_samples)


def estimate_constraint_chance(inst: PortfolioInstance, x: Sequence[float], eta: float,
                               n_samples: int, seed: int, workers: int = 1) -> Estimate:
    """Estimate ``Pr{t | possibility(Z(t) >= target(t)) >= eta}`` with one t for both sides."""
    x = _check(inst, x, n_samples)
    z0 = aggregate_return(inst, x, 0.0)
    b0 = realize(inst.target, 0.0)
    slope = portfolio_shift(inst, x)
    drift = inst.target.peak_shift - slope

    def count(t):
        gap = (b0.peak_lo - z0.peak_hi) + t * drift
        pi = possibility_from_gap(gap, z0.spread_right, z0.right_ref, b0.spread_left, b0.left_ref)
        return np.count_nonzero(pi >= eta)

    return _estimate(_chunked_hits(inst, n_samples, seed, count, workers), n_samples)


def _prob_linear_event(base: float, slope: float, inst: PortfolioInstance) -> float:
    # Pr{base + slope * t >= 0} for continuous T
    if slope == 0.0:
        return 1.0 if base >= 0.0 else 0.0
    root = -base / slope
    below = inst.distribution.cdf(root)
    return 1.0 - below if slope > 0 else below


def analytic_objective_chance(inst: PortfolioInstance, x: Sequence[float], f: float, eta: float) -> float:
    """Closed-form probability matching :func:`estimate_objective_chance`."""
    z0 = aggregate_return(inst, x, 0.0)
    reach = z0.peak_hi + z0.spread_right * z0.right_ref.pseudo_inverse(eta)
    return _prob_linear_event(reach - f, portfolio_shift(inst, x), inst)


def analytic_constraint_chance(inst: PortfolioInstance, x: Sequence[float], eta: float) -> float:
    """Closed-form probability matching :func:`estimate_constraint_chance`."""
    z0 = aggregate_return(inst, x, 0.0)
    tgt = inst.target
    reach = z0.peak_hi + z0.spread_right * z0.right_ref.pseudo_inverse(eta)
    floor = tgt.peak_lo_base - tgt.spread_left * tgt.left_ref.pseudo_inverse(eta)
    return _prob_linear_event(reach - floor, portfolio_shift(inst, x) - tgt.peak_shift, inst)
