"""LR fuzzy numbers, reference functions and possibility degrees.

All evaluation helpers accept either scalars or numpy arrays for the crisp
argument, so the Monte Carlo code can push a whole batch of samples through
the same formulas used for single evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class ReferenceFunction:
    """Shape of one shoulder of an LR fuzzy number.

    ``shape`` maps [0, 1] onto [0, 1] with shape(0) = 1, shape(1) = 0 and is
    strictly decreasing. ``inverse`` is the pseudo-inverse
    ``sup{t | shape(t) >= level}``. Custom functions must be supplied with
    their pseudo-inverse; nothing is inverted numerically.
    """

    kind: str = "linear"
    shape: Callable[[float], float] | None = field(default=None, compare=False)
    inverse: Callable[[float], float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("linear", "custom"):
            raise ValueError(f"unknown reference function kind {self.kind!r}")
        if self.kind == "custom" and (self.shape is None or self.inverse is None):
            raise ValueError("custom reference functions need both shape and inverse")

    @classmethod
    def linear(cls) -> ReferenceFunction:
        return cls("linear")

    @classmethod
    def custom(cls, shape, inverse) -> ReferenceFunction:
        return cls("custom", shape, inverse)

    def __call__(self, u):
        """Evaluate the shape at u (clipped to [0, 1])."""
        u = np.clip(u, 0.0, 1.0)
        if self.kind == "linear":
            out = 1.0 - u
        else:
            out = np.vectorize(self.shape, otypes=[float])(u)
        return out if np.ndim(out) else float(out)

    def pseudo_inverse(self, level):
        """``sup{t in [0, 1] | shape(t) >= level}`` for level in (0, 1]."""
        if self.kind == "linear":
            out = 1.0 - np.asarray(level, dtype=float)
        else:
            out = np.vectorize(self.inverse, otypes=[float])(level)
        return out if np.ndim(out) else float(out)


LINEAR = ReferenceFunction.linear()


@dataclass(frozen=True)
class LRFuzzyNumber:
    """Flat-topped fuzzy number ``(peak_lo, peak_hi, spread_left, spread_right)_LR``."""

    peak_lo: float
    peak_hi: float
    spread_left: float = 0.0
    spread_right: float = 0.0
    left_ref: ReferenceFunction = LINEAR
    right_ref: ReferenceFunction = LINEAR

    def __post_init__(self):
        vals = (self.peak_lo, self.peak_hi, self.spread_left, self.spread_right)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite LR parameters {vals}")
        if self.peak_lo > self.peak_hi:
            raise ValueError(f"peak_lo {self.peak_lo} > peak_hi {self.peak_hi}")
        if self.spread_left < 0 or self.spread_right < 0:
            raise ValueError("spreads must be non-negative")

    @property
    def support(self) -> tuple[float, float]:
        return self.peak_lo - self.spread_left, self.peak_hi + self.spread_right

    def params(self) -> tuple[float, float, float, float]:
        return self.peak_lo, self.peak_hi, self.spread_left, self.spread_right


def _shoulder(ref: ReferenceFunction, dist, spread: float):
    # dist >= 0 is the distance past the peak; zero spread means a hard cutoff
    dist = np.asarray(dist, dtype=float)
    if spread == 0.0:
        return np.where(dist <= 0.0, 1.0, 0.0)
    u = dist / spread
    return np.where(u <= 1.0, ref(np.minimum(u, 1.0)), 0.0)


def membership(a: LRFuzzyNumber, x):
    """Membership grade of x in ``a``; vectorised over x."""
    x = np.asarray(x, dtype=float)
    left = _shoulder(a.left_ref, a.peak_lo - x, a.spread_left)
    right = _shoulder(a.right_ref, x - a.peak_hi, a.spread_right)
    out = np.where(x < a.peak_lo, left, np.where(x > a.peak_hi, right, 1.0))
    return out if out.ndim else float(out)


def alpha_cut(a: LRFuzzyNumber, alpha: float) -> tuple[float, float]:
    """Closed interval ``{x | membership(a, x) >= alpha}``."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    lo = a.peak_lo - a.spread_left * a.left_ref.pseudo_inverse(alpha)
    hi = a.peak_hi + a.spread_right * a.right_ref.pseudo_inverse(alpha)
    return lo, hi


def possibility_ge_crisp(a: LRFuzzyNumber, f):
    """Possibility that ``a`` is at least the crisp value f; vectorised over f."""
    f = np.asarray(f, dtype=float)
    out = _shoulder(a.right_ref, np.maximum(f - a.peak_hi, 0.0), a.spread_right)
    return out if out.ndim else float(out)


def possibility_from_gap(gap, spread_right: float, right_ref: ReferenceFunction,
                         spread_left: float, left_ref: ReferenceFunction,
                         iterations: int = 60):
    """Height at which a right shoulder meets a left shoulder ``gap`` to its right.

    This is ``sup{h | spread_right*R*(h) + spread_left*L*(h) >= gap}`` and
    equals 1 whenever gap <= 0. Linear shoulders use the closed form; custom
    ones bisect on h, which is valid because both pseudo-inverses are
    non-increasing.
    """
    gap = np.asarray(gap, dtype=float)
    total = spread_right + spread_left
    if right_ref.kind == "linear" and left_ref.kind == "linear":
        if total == 0.0:
            out = np.where(gap <= 0.0, 1.0, 0.0)
        else:
            out = np.clip(1.0 - gap / total, 0.0, 1.0)
        return out if out.ndim else float(out)

    def reach(h):
        return spread_right * right_ref.pseudo_inverse(h) + spread_left * left_ref.pseudo_inverse(h)

    lo = np.zeros_like(gap)
    hi = np.ones_like(gap)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        ok = reach(mid) >= gap
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    out = np.where(gap <= 0.0, 1.0, lo)
    return out if out.ndim else float(out)


def possibility_ge_fuzzy(a: LRFuzzyNumber, b: LRFuzzyNumber) -> float:
    """Possibility that ``a`` is at least ``b`` (sup-min over y1 >= y2)."""
    return possibility_from_gap(b.peak_lo - a.peak_hi, a.spread_right, a.right_ref,
                                b.spread_left, b.left_ref)
