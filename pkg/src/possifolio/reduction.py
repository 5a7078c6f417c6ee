"""Deterministic equivalent of the probability-possibility chance constraints.

With a shared driving variable t ~ T and LR returns, the event
``Pr{pi(Z(t) >= f) >= eta} >= lam`` holds exactly when

    sum_j (R1_j + T*(1 - lam) R2_j) x_j + R*(eta) sum_j gamma_j x_j >= f

and the return-target constraint turns into the same left-hand side compared
against ``R0_0 + T*(1 - lam) R2_0 - beta_0 L*(eta)``. The spread term is folded
into per-asset coefficients, leaving a linear program with one budget
equality, one covering constraint and box bounds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from .frv import normalize_mode, quantile
from .model import PortfolioInstance, validate


@dataclass(frozen=True)
class ChanceLevels:
    lam: float
    eta: float

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"probability level must lie in (0, 1), got {self.lam}")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"possibility level must lie in (0, 1], got {self.eta}")


@dataclass(frozen=True)
class ReducedLP:
    """max c.x  s.t.  sum x = budget,  c.x >= rhs,  0 <= x <= bounds.

    ``rhs`` is ``-inf`` when the return constraint has been dropped.
    """

    c: tuple[float, ...]
    rhs: float
    budget: float
    bounds: tuple[float, ...]
    instance: str = ""
    lam: float | None = None
    eta: float | None = None
    quantile_mode: str = "exact"

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))
        object.__setattr__(self, "bounds", tuple(float(v) for v in self.bounds))
        if len(self.c) != len(self.bounds):
            raise ValueError("coefficient and bound vectors differ in length")
        if not all(math.isfinite(v) for v in self.c):
            raise ValueError("objective coefficients must be finite")

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def return_constraint(self) -> bool:
        return self.rhs != -math.inf

    def without_return_constraint(self) -> ReducedLP:
        return replace(self, rhs=-math.inf)

    def objective(self, x: Sequence[float]) -> float:
        return math.fsum(cj * float(xj) for cj, xj in zip(self.c, x))

    def violation(self, objective: float) -> float:
        """Shortfall of the return constraint (0 when satisfied)."""
        if not self.return_constraint:
            return 0.0
        return max(0.0, self.rhs - objective)

    def feasibility_tol(self) -> float:
        return 1e-9 * max(1.0, abs(self.rhs) if self.return_constraint else 1.0)

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "lambda": self.lam,
            "eta": self.eta,
            "quantile_mode": self.quantile_mode,
            "c": list(self.c),
            "rhs": self.rhs if self.return_constraint else None,
            "budget": self.budget,
            "bounds": list(self.bounds),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> ReducedLP:
        try:
            rhs = doc["rhs"]
            return cls(
                c=tuple(doc["c"]),
                rhs=-math.inf if rhs is None else float(rhs),
                budget=float(doc["budget"]),
                bounds=tuple(doc["bounds"]),
                instance=doc.get("instance", ""),
                lam=doc.get("lambda"),
                eta=doc.get("eta"),
                quantile_mode=doc.get("quantile_mode", "exact"),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed reduced LP document: {exc!r}") from exc


def reduce(inst: PortfolioInstance, levels: ChanceLevels, mode: str = "exact") -> ReducedLP:
    issues = validate(inst)
    if issues:
        raise ValueError("invalid instance: " + "; ".join(issues))
    mode = normalize_mode(mode)
    shift = quantile(inst.distribution, 1.0 - levels.lam, mode)
    c = [a.peak_hi_base + shift * a.peak_shift + a.right_ref.pseudo_inverse(levels.eta) * a.spread_right
         for a in inst.assets]
    tgt = inst.target
    rhs = tgt.peak_lo_base + shift * tgt.peak_shift - tgt.spread_left * tgt.left_ref.pseudo_inverse(levels.eta)
    return ReducedLP(tuple(c), rhs, inst.budget, inst.upper_bounds,
                     instance=inst.name, lam=levels.lam, eta=levels.eta, quantile_mode=mode)


def save_lp(lp: ReducedLP, path) -> None:
    Path(path).write_text(json.dumps(lp.to_dict(), indent=2) + "\n")


def load_lp(path) -> ReducedLP:
    return ReducedLP.from_dict(json.loads(Path(path).read_text()))
