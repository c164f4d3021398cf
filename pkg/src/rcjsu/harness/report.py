"""Percentage-to-best summaries over experiment rows."""
from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable


def percentage_diff(a: float, best: float) -> float:
    """Relative gap ``(a - best) / a`` of a result to the best known value.

    Returns a fraction; tables multiply by 100.  A zero result that matches a
    zero best counts as no gap.
    """
    if a == 0 and best == 0:
        return 0.0
    if a <= 0:
        raise ValueError(f"percentage difference undefined for a={a}")
    if best > a:
        raise ValueError(f"best {best} exceeds the compared value {a}")
    return (a - best) / a


@dataclass
class ReportCell:
    instance: str
    multiplier: float
    solver: str
    runs: int
    mean_twt: float
    best_run_twt: float
    best_of_means: float
    best_of_runs: float
    pct_vs_best_mean: float
    pct_vs_best_run: float
    is_best: bool


@dataclass
class Report:
    cells: list[ReportCell]
    best_counts: dict[str, int] = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["instance", "multiplier", "solver", "runs", "mean_twt", "best_run_twt",
                    "best_of_means", "best_of_runs", "pct_vs_best_mean", "pct_vs_best_run",
                    "is_best"])
        for c in self.cells:
            w.writerow([c.instance, repr(c.multiplier), c.solver, c.runs,
                        f"{c.mean_twt:.6f}", f"{c.best_run_twt:.6f}", f"{c.best_of_means:.6f}",
                        f"{c.best_of_runs:.6f}", f"{c.pct_vs_best_mean:.3f}",
                        f"{c.pct_vs_best_run:.3f}", int(c.is_best)])
        for solver, count in self.best_counts.items():
            w.writerow(["# best", "", solver, "", "", "", "", "", "", "", count])
        return buf.getvalue()


def summarise(rows: Iterable) -> Report:
    """Group successful rows by (instance, multiplier) and compare solvers.

    Two reference values are reported per cell: the best solver mean and the
    best single run.  A solver scores a "# best" whenever its mean equals the
    best mean; ties count for every solver that attains it.
    """
    grouped: dict[tuple[str, float], dict[str, list[float]]] = defaultdict(lambda: defaultdict(list))
    solvers: list[str] = []
    for row in rows:
        if row.status != "ok":
            continue
        grouped[(row.instance, row.multiplier)][row.solver].append(row.best_mean_twt)
        if row.solver not in solvers:
            solvers.append(row.solver)
    if not grouped:
        raise ValueError("no successful rows to summarise")

    cells = []
    counts = {s: 0 for s in solvers}
    for (inst, mult) in sorted(grouped):
        by_solver = grouped[(inst, mult)]
        means = {s: math.fsum(v) / len(v) for s, v in by_solver.items()}
        best_mean = min(means.values())
        best_run = min(min(v) for v in by_solver.values())
        for s in solvers:
            if s not in by_solver:
                continue
            vals = by_solver[s]
            is_best = means[s] == best_mean
            counts[s] += is_best
            cells.append(ReportCell(
                inst, mult, s, len(vals), means[s], min(vals), best_mean, best_run,
                100.0 * percentage_diff(means[s], best_mean),
                100.0 * percentage_diff(means[s], best_run),
                is_best,
            ))
    return Report(cells, counts)
