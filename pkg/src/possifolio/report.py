"""Grid sweeps over chance levels, written as CSV.

Columns (one row per grid cell and HS replica; ``x`` vectors are
``;``-separated, numbers use 6 significant digits, empty means not
applicable):

    instance, lambda, eta, quantile_mode, return_constraint, coefficients,
    rhs, exact_status, exact_objective, exact_x, replica, hs_seed,
    hs_status, hs_objective, hs_x, hs_minus_exact, paper_objective,
    paper_x, exact_minus_paper, notes, error
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .exact import INFEASIBLE, solve_exact
from .harmony import HSParams, solve_hs
from .model import PAPER_FIXTURES, PortfolioInstance
from .reduction import ChanceLevels, reduce

COLUMNS = (
    "instance", "lambda", "eta", "quantile_mode", "return_constraint", "coefficients",
    "rhs", "exact_status", "exact_objective", "exact_x", "replica", "hs_seed",
    "hs_status", "hs_objective", "hs_x", "hs_minus_exact", "paper_objective",
    "paper_x", "exact_minus_paper", "notes", "error",
)

# Published optimum per diagonal cell (lambda = eta) of the five-asset example.
PAPER_TABLE = {
    0.1: ((20, 60, 60, 0, 60), 451.22),
    0.4: ((0, 60, 60, 20, 60), 331.85),
    0.7: ((0, 20, 60, 60, 60), 244.39),
    0.9: ((20, 0, 60, 60, 60), 164.44),
}
DIAGONAL = tuple((v, v) for v in PAPER_TABLE)


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (tuple, list)):
        return ";".join(fmt(e) for e in v)
    v = float(v)
    if math.isinf(v) or math.isnan(v):
        return ""
    out = f"{v:.6g}"
    return "0" if out == "-0" else out


def derive_seed(master: int, cell: int, replica: int) -> int:
    """64-bit HS seed for one (cell, replica) of a sweep."""
    lo, hi = np.random.SeedSequence([int(master), cell, replica]).generate_state(2, np.uint32)
    return int(hi) << 32 | int(lo)


def parse_grid(text: str) -> list[tuple[float, float]]:
    """``"0.1,0.4"`` means lambda = eta per entry; ``"0.1:0.4"`` sets them separately."""
    cells = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        if ":" in item:
            lam, eta = item.split(":", 1)
            cells.append((float(lam), float(eta)))
        else:
            cells.append((float(item), float(item)))
    return cells


def allocation_notes(exact_x, paper_x) -> list[str]:
    ex = [round(v, 9) for v in exact_x]
    pa = [float(v) for v in paper_x]
    if ex == pa:
        return []
    n = len(ex)
    for i in range(n):
        for j in range(i + 1, n):
            swapped = list(pa)
            swapped[i], swapped[j] = swapped[j], swapped[i]
            if swapped == ex:
                return [f"paper allocation lists x{i + 1}/x{j + 1} transposed"]
    return ["paper allocation differs from exact optimum"]


@dataclass(frozen=True)
class SweepConfig:
    quantile_mode: str = "exact"
    ignore_return_constraint: bool = False
    master_seed: int = 0
    replicas: int = 1
    hs: HSParams = HSParams()


def run_cell(inst: PortfolioInstance, cell_index: int, lam: float, eta: float,
             cfg: SweepConfig) -> list[dict]:
    base = {"instance": inst.name, "lambda": fmt(lam), "eta": fmt(eta),
            "quantile_mode": cfg.quantile_mode,
            "return_constraint": "ignored" if cfg.ignore_return_constraint else "enforced"}
    try:
        lp = reduce(inst, ChanceLevels(lam, eta), cfg.quantile_mode)
        if cfg.ignore_return_constraint:
            lp = lp.without_return_constraint()
        ex = solve_exact(lp)
    except (ValueError, ArithmeticError) as exc:
        return [{**base, "error": str(exc)}]

    notes = []
    if ex.status == INFEASIBLE:
        notes.append(f"return constraint unattainable: best {fmt(ex.objective)} < rhs {fmt(lp.rhs)}")
    row = {**base, "coefficients": fmt(lp.c), "rhs": fmt(lp.rhs), "exact_status": ex.status,
           "exact_objective": fmt(ex.objective), "exact_x": fmt(ex.x)}

    if inst.name in PAPER_FIXTURES and lam == eta and lam in PAPER_TABLE and inst.n == 5:
        paper_x, paper_obj = PAPER_TABLE[lam]
        delta = ex.objective - paper_obj
        row.update(paper_objective=fmt(paper_obj), paper_x=fmt(paper_x),
                   exact_minus_paper=fmt(round(delta, 9)))
        notes.extend(allocation_notes(ex.x, paper_x))
        if abs(delta) > 0.005:
            notes.append("paper objective not reproduced")
    row["notes"] = "; ".join(notes)

    rows = []
    for rep in range(cfg.replicas):
        seed = derive_seed(cfg.master_seed, cell_index, rep)
        hs_row = dict(row, replica=str(rep), hs_seed=str(seed))
        try:
            hs = solve_hs(lp, replace(cfg.hs, seed=seed))
            hs_row.update(hs_status=hs.status, hs_objective=fmt(hs.objective), hs_x=fmt(hs.x),
                          hs_minus_exact=fmt(hs.objective - ex.objective))
        except ValueError as exc:
            hs_row["error"] = str(exc)
        rows.append(hs_row)
    return rows or [row]


def reproduce_table(inst: PortfolioInstance, grid, cfg: SweepConfig, workers: int = 1) -> str:
    """Run every grid cell and return the CSV report as text."""
    grid = list(grid)
    jobs = [(inst, i, lam, eta, cfg) for i, (lam, eta) in enumerate(grid)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(run_cell, *zip(*jobs)))
    else:
        results = [run_cell(*job) for job in jobs]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, restval="", lineterminator="\n")
    writer.writeheader()
    for rows in results:
        writer.writerows(rows)
    return buf.getvalue()
