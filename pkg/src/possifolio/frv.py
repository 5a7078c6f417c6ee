"""Driving scalar distribution and fuzzy random returns.

A fuzzy random return is an LR number whose peak interval slides along the
real line by ``t * peak_shift``, with a single scalar ``t`` drawn from the
driving distribution and shared across every asset and the target.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Callable

import numpy as np

from .fuzzy import LINEAR, LRFuzzyNumber, ReferenceFunction

QUANTILE_MODES = ("exact", "paper_2dp")

_STD_NORMAL = NormalDist()


def normalize_mode(mode: str) -> str:
    """Accept ``paper-2dp`` (CLI spelling) as well as ``paper_2dp``."""
    mode = mode.replace("-", "_")
    if mode not in QUANTILE_MODES:
        raise ValueError(f"unknown quantile mode {mode!r}; expected one of {QUANTILE_MODES}")
    return mode


@dataclass(frozen=True)
class ScalarDistribution:
    kind: str = "standard_normal"
    cdf_fn: Callable[[float], float] | None = field(default=None, compare=False)
    quantile_fn: Callable[[float], float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("standard_normal", "custom"):
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.kind == "custom" and (self.cdf_fn is None or self.quantile_fn is None):
            raise ValueError("custom distributions need cdf and quantile maps")

    @classmethod
    def standard_normal(cls) -> ScalarDistribution:
        return cls("standard_normal")

    @classmethod
    def custom(cls, cdf, quantile) -> ScalarDistribution:
        return cls("custom", cdf, quantile)

    def cdf(self, t: float) -> float:
        if self.kind == "standard_normal":
            return _STD_NORMAL.cdf(t)
        return self.cdf_fn(t)

    def to_dict(self) -> dict:
        if self.kind != "standard_normal":
            raise ValueError("only the standard normal distribution is serialisable")
        return {"type": "standard_normal"}


STANDARD_NORMAL = ScalarDistribution.standard_normal()


def quantile(d: ScalarDistribution, p: float, mode: str = "exact") -> float:
    """Pseudo-inverse ``inf{t | cdf(t) >= p}``.

    The normal kind uses Wichura's AS241 rational approximation (via
    ``statistics.NormalDist``), good to roughly 1e-16. ``paper_2dp`` rounds
    the result to two decimals, which is what the published example tables
    were computed with.
    """
    mode = normalize_mode(mode)
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile level must lie in (0, 1), got {p}")
    if d.kind == "standard_normal":
        value = _STD_NORMAL.inv_cdf(p)
    else:
        value = float(d.quantile_fn(p))
    if mode == "paper_2dp":
        value = round(value, 2)
    return value


def sample(d: ScalarDistribution, rng: np.random.Generator, size: int | None = None):
    """Draw from ``d`` using ``rng`` (numpy PCG64 in this package)."""
    if d.kind == "standard_normal":
        return rng.standard_normal(size)
    u = rng.random(size)
    # open interval keeps the quantile map away from its infinite ends
    u = np.clip(u, np.finfo(float).tiny, 1.0 - np.finfo(float).eps)
    out = np.vectorize(d.quantile_fn, otypes=[float])(u)
    return out if size is not None else float(out)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


@dataclass(frozen=True)
class FuzzyRandomReturn:
    """Per-asset quintuple ``(R0, R1, R2, beta, gamma)``.

    Construction does not validate; use :meth:`problems` (the instance
    validator reports everything at once).
    """

    peak_lo_base: float
    peak_hi_base: float
    peak_shift: float = 0.0
    spread_left: float = 0.0
    spread_right: float = 0.0
    left_ref: ReferenceFunction = LINEAR
    right_ref: ReferenceFunction = LINEAR

    def problems(self) -> list[str]:
        out = []
        vals = (self.peak_lo_base, self.peak_hi_base, self.peak_shift,
                self.spread_left, self.spread_right)
        if not all(np.isfinite(vals)):
            out.append("non-finite parameter")
        if self.peak_lo_base > self.peak_hi_base:
            out.append("peak_lo_base > peak_hi_base")
        if self.spread_left < 0:
            out.append("negative spread_left")
        if self.spread_right < 0:
            out.append("negative spread_right")
        return out


def realize(r: FuzzyRandomReturn, t: float) -> LRFuzzyNumber:
    shift = t * r.peak_shift
    return LRFuzzyNumber(r.peak_lo_base + shift, r.peak_hi_base + shift,
                         r.spread_left, r.spread_right, r.left_ref, r.right_ref)
