"""Portfolio instances: definition, validation, return aggregation and file I/O.

Instance files are JSON documents::

    {
      "name": "table1",
      "n": 5,
      "budget": 200,
      "distribution": {"type": "standard_normal"},
      "assets": [{"R0": 1.2, "R1": 1.35, "R2": 0.5, "beta": 0.15, "gamma": 0.15, "U": 60}, ...],
      "target": {"R0": 250, "R1": 250, "R2": 50, "beta": 40, "gamma": 40}
    }

Numeric fields may also be given as decimal strings ("1.35"); either way the
text is parsed to a float exactly once.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

from .frv import STANDARD_NORMAL, FuzzyRandomReturn, ScalarDistribution, realize
from .fuzzy import LRFuzzyNumber


class InstanceFormatError(ValueError):
    """Malformed instance document; the message names the offending field."""


@dataclass(frozen=True)
class PortfolioInstance:
    assets: tuple[FuzzyRandomReturn, ...]
    upper_bounds: tuple[float, ...]
    budget: float
    target: FuzzyRandomReturn
    distribution: ScalarDistribution = STANDARD_NORMAL
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "assets", tuple(self.assets))
        object.__setattr__(self, "upper_bounds", tuple(float(u) for u in self.upper_bounds))

    @property
    def n(self) -> int:
        return len(self.assets)


def validate(inst: PortfolioInstance) -> list[str]:
    """Return every invariant violation (empty list means the instance is valid)."""
    issues = []
    if inst.n < 1:
        issues.append("instance has no assets")
    if len(inst.upper_bounds) != inst.n:
        issues.append(f"{len(inst.upper_bounds)} upper bounds for {inst.n} assets")
    for j, u in enumerate(inst.upper_bounds, start=1):
        if not (u >= 0 and math.isfinite(u)):
            issues.append(f"asset {j}: upper bound {u} must be finite and >= 0")
    if not (inst.budget > 0 and math.isfinite(inst.budget)):
        issues.append(f"budget {inst.budget} must be finite and > 0")
    for j, a in enumerate(inst.assets, start=1):
        issues.extend(f"asset {j}: {p}" for p in a.problems())
    issues.extend(f"target: {p}" for p in inst.target.problems())
    if math.fsum(inst.upper_bounds) < inst.budget:
        issues.append(f"budget unattainable: sum of upper bounds "
                      f"{math.fsum(inst.upper_bounds)} < budget {inst.budget}")
    return issues


def aggregate_return(inst: PortfolioInstance, x: Sequence[float], t: float) -> LRFuzzyNumber:
    """Fuzzy portfolio return for allocation x when the driving variable equals t."""
    x = [float(v) for v in x]
    if len(x) != inst.n:
        raise ValueError(f"allocation has {len(x)} entries, instance has {inst.n} assets")
    first = inst.assets[0]
    if any((a.left_ref, a.right_ref) != (first.left_ref, first.right_ref) for a in inst.assets):
        raise ValueError("assets with different reference functions do not sum to an LR number")
    realized = [realize(a, t) for a in inst.assets]
    return LRFuzzyNumber(
        math.fsum(r.peak_lo * xj for r, xj in zip(realized, x)),
        math.fsum(r.peak_hi * xj for r, xj in zip(realized, x)),
        math.fsum(r.spread_left * xj for r, xj in zip(realized, x)),
        math.fsum(r.spread_right * xj for r, xj in zip(realized, x)),
        first.left_ref, first.right_ref,
    )


def portfolio_shift(inst: PortfolioInstance, x: Sequence[float]) -> float:
    """Rate at which the aggregate return's peaks move per unit of t."""
    return math.fsum(a.peak_shift * float(xj) for a, xj in zip(inst.assets, x))


# -- file I/O ---------------------------------------------------------------

_ASSET_KEYS = ("R0", "R1", "R2", "beta", "gamma", "U")
_TARGET_KEYS = ("R0", "R1", "R2", "beta", "gamma")


def _number(value, where: str) -> float:
    if isinstance(value, bool):
        raise InstanceFormatError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            pass
    raise InstanceFormatError(f"{where}: expected a number, got {value!r}")


def _frv(row, where: str, keys) -> tuple[FuzzyRandomReturn, dict]:
    if not isinstance(row, dict):
        raise InstanceFormatError(f"{where}: expected an object, got {type(row).__name__}")
    missing = [k for k in keys if k not in row]
    if missing:
        raise InstanceFormatError(f"{where}: missing field(s) {', '.join(missing)}")
    vals = {k: _number(row[k], f"{where}.{k}") for k in keys}
    frv = FuzzyRandomReturn(vals["R0"], vals["R1"], vals["R2"], vals["beta"], vals["gamma"])
    return frv, vals


def instance_from_dict(doc: dict, name: str = "") -> PortfolioInstance:
    if not isinstance(doc, dict):
        raise InstanceFormatError("top level: expected an object")
    for key in ("budget", "assets", "target"):
        if key not in doc:
            raise InstanceFormatError(f"top level: missing field {key}")
    dist = doc.get("distribution", {"type": "standard_normal"})
    if not isinstance(dist, dict) or dist.get("type") != "standard_normal":
        raise InstanceFormatError(f"distribution: unsupported value {dist!r}")
    if not isinstance(doc["assets"], list):
        raise InstanceFormatError("assets: expected a list")
    assets, bounds = [], []
    for j, row in enumerate(doc["assets"]):
        frv, vals = _frv(row, f"assets[{j}]", _ASSET_KEYS)
        assets.append(frv)
        bounds.append(vals["U"])
    if "n" in doc:
        n = doc["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise InstanceFormatError(f"n: expected an integer, got {n!r}")
        if n != len(assets):
            raise InstanceFormatError(f"n: declares {n} assets but {len(assets)} are listed")
    target, _ = _frv(doc["target"], "target", _TARGET_KEYS)
    return PortfolioInstance(
        assets=tuple(assets),
        upper_bounds=tuple(bounds),
        budget=_number(doc["budget"], "budget"),
        target=target,
        distribution=STANDARD_NORMAL,
        name=str(doc.get("name", name)),
    )


def instance_to_dict(inst: PortfolioInstance) -> dict:
    def row(a: FuzzyRandomReturn) -> dict:
        if a.left_ref.kind != "linear" or a.right_ref.kind != "linear":
            raise ValueError("only linear reference functions are serialisable")
        return {"R0": a.peak_lo_base, "R1": a.peak_hi_base, "R2": a.peak_shift,
                "beta": a.spread_left, "gamma": a.spread_right}

    doc = {"n": inst.n, "budget": inst.budget, "distribution": inst.distribution.to_dict()}
    if inst.name:
        doc = {"name": inst.name, **doc}
    doc["assets"] = [{**row(a), "U": u} for a, u in zip(inst.assets, inst.upper_bounds)]
    doc["target"] = row(inst.target)
    return doc


def load_instance(path) -> PortfolioInstance:
    path = Path(path)
    text = path.read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    try:
        return instance_from_dict(doc, name=path.name.split(".")[0])
    except InstanceFormatError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc


def save_instance(inst: PortfolioInstance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=2) + "\n")


PAPER_FIXTURES = ("table1", "table1-prose")


def fixture_path(name: str = "table1") -> Path:
    """Path of a bundled instance (``table1`` or ``table1-prose``)."""
    with resources.as_file(resources.files("possifolio") / "data" / f"{name}.instance") as p:
        return Path(p)


def load_fixture(name: str = "table1") -> PortfolioInstance:
    return load_instance(fixture_path(name))
