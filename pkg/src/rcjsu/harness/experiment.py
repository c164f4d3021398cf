"""Batch experiments: instances x uncertainty levels x solvers x repetitions.

Rows are appended to a CSV as each cell finishes, and cells already present
in the output are skipped, so an interrupted run resumes where it stopped.
"""
from __future__ import annotations

import csv
import hashlib
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, fields, replace
from typing import Iterator, Optional

from ..apsa import ApsaParams, run_apsa
from ..instance import Instance, InstanceError, generate_scenario, read_instance
from ..metropolis import MhParams
from .oracle import DEFAULT_MAX_N, brute_force_oracle

log = logging.getLogger(__name__)

SOLVERS = ("apsa", "sa1", "oracle")
ROW_FIELDS = ("instance", "multiplier", "solver", "rep", "seed", "best_mean_twt", "elapsed",
              "iterations", "status", "message")


@dataclass
class ExperimentConfig:
    instances: list[str]
    multipliers: list[float] = field(default_factory=lambda: [0.5, 0.6, 0.7, 0.8, 0.9, 1.0])
    samples: int = 10
    repetitions: int = 25
    time_limit: float = 600.0
    solvers: list[str] = field(default_factory=lambda: ["apsa"])
    base_seed: int = 0
    output: str = "results.csv"
    pop_size: int = 10
    rho: float = 0.9
    t0: float = 1500.0
    iters: int = 1000
    gamma: float = 0.5
    beta_len: int = 5
    eval_rate: Optional[float] = None
    jobs: int = 1
    oracle_max_n: int = DEFAULT_MAX_N

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if not self.multipliers:
            raise ValueError("at least one multiplier is required")
        if not self.instances:
            raise ValueError("at least one instance is required")
        for s in self.solvers:
            if s not in SOLVERS:
                raise ValueError(f"unknown solver {s!r}; choose from {SOLVERS}")

    def apsa_params(self, solver: str, seed: int) -> ApsaParams:
        return ApsaParams(
            pop_size=1 if solver == "sa1" else self.pop_size,
            time_limit=self.time_limit,
            rho=self.rho,
            mh=MhParams(self.t0, self.iters, self.gamma),
            beta_len=self.beta_len,
            seed=seed,
            eval_rate=self.eval_rate,
        )


_LIST_KEYS = {"instances": str, "multipliers": float, "solvers": str}


def parse_config(text: str, base_dir: str = ".") -> ExperimentConfig:
    """Read ``key = value`` lines; list values are comma separated and
    instance paths are resolved against ``base_dir``."""
    kinds = {f.name: f.type for f in fields(ExperimentConfig)}
    kw = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in kinds:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        if key in _LIST_KEYS:
            items = [v.strip() for v in value.split(",") if v.strip()]
            kw[key] = [_LIST_KEYS[key](v) for v in items]
        elif key == "eval_rate":
            kw[key] = None if value.lower() in ("", "none") else float(value)
        elif key == "output":
            kw[key] = value
        else:
            kw[key] = float(value) if key in ("time_limit", "rho", "t0", "gamma") else int(value)
    if "instances" in kw:
        kw["instances"] = [p if os.path.isabs(p) else os.path.join(base_dir, p)
                           for p in kw["instances"]]
    if "output" in kw and not os.path.isabs(kw["output"]):
        kw["output"] = os.path.join(base_dir, kw["output"])
    return ExperimentConfig(**kw)


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), os.path.dirname(os.path.abspath(path)))


@dataclass(frozen=True)
class ResultRow:
    instance: str
    multiplier: float
    solver: str
    rep: int
    seed: int
    best_mean_twt: float
    elapsed: float
    iterations: int
    status: str = "ok"
    message: str = ""

    @property
    def key(self) -> tuple[str, float, str, int]:
        return (self.instance, self.multiplier, self.solver, self.rep)

    def as_record(self) -> list[str]:
        twt = "" if math.isnan(self.best_mean_twt) else repr(self.best_mean_twt)
        return [self.instance, repr(self.multiplier), self.solver, str(self.rep), str(self.seed),
                twt, f"{self.elapsed:.3f}", str(self.iterations), self.status, self.message]

    @classmethod
    def from_record(cls, rec: dict) -> "ResultRow":
        return cls(rec["instance"], float(rec["multiplier"]), rec["solver"], int(rec["rep"]),
                   int(rec["seed"]), float(rec["best_mean_twt"] or "nan"),
                   float(rec["elapsed"]), int(rec["iterations"]), rec["status"], rec["message"])


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from arbitrary parts (independent of PYTHONHASHSEED)."""
    text = "|".join(repr(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "big") >> 1


def read_rows(path) -> list[ResultRow]:
    if not os.path.exists(path):
        return []
    with open(path, newline="", encoding="utf-8") as fh:
        return [ResultRow.from_record(r) for r in csv.DictReader(fh)]


def write_rows(path, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ROW_FIELDS)
        for row in rows:
            w.writerow(row.as_record())


@dataclass(frozen=True)
class Cell:
    instance: Instance
    multiplier: float
    solver: str
    rep: int


def _cells(cfg: ExperimentConfig, instances: list[Instance]) -> Iterator[Cell]:
    for inst in instances:
        for mult in cfg.multipliers:
            for solver in cfg.solvers:
                reps = 1 if solver == "oracle" else cfg.repetitions
                for rep in range(reps):
                    yield Cell(inst, float(mult), solver, rep)


def run_cell(cfg: ExperimentConfig, cell: Cell) -> ResultRow:
    inst = cell.instance
    seed = derive_seed(cfg.base_seed, inst.name, cell.multiplier, cell.rep)
    base = ResultRow(inst.name, cell.multiplier, cell.solver, cell.rep, seed, math.nan, 0.0, 0)
    try:
        # one scenario per (instance, level), shared by every solver and repetition
        scen = generate_scenario(inst, cell.multiplier, cfg.samples,
                                 derive_seed(cfg.base_seed, inst.name, cell.multiplier))
    except InstanceError as exc:
        return replace(base, status="skipped", message=str(exc))
    try:
        t = time.perf_counter()
        if cell.solver == "oracle":
            _, value = brute_force_oracle(inst, scen, cfg.oracle_max_n)
            iterations = math.factorial(inst.n)
            elapsed = time.perf_counter() - t
        else:
            res = run_apsa(inst, scen, cfg.apsa_params(cell.solver, seed))
            value, iterations, elapsed = res.best_value, res.evaluations, res.elapsed
        return replace(base, best_mean_twt=value.mean_twt, elapsed=elapsed, iterations=iterations)
    except Exception as exc:  # recorded per row; the batch continues
        log.exception("cell %s failed", cell)
        return replace(base, status="error", message=f"{type(exc).__name__}: {exc}")


def run_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    """Run every missing cell, appending rows to ``cfg.output``.

    Returns all rows in the output file, including ones from earlier runs.
    """
    instances = [read_instance(p) for p in cfg.instances]
    done = read_rows(cfg.output)
    seen = {r.key for r in done}
    todo = [c for c in _cells(cfg, instances)
            if (c.instance.name, c.multiplier, c.solver, c.rep) not in seen]
    log.info("%d cells done, %d to run", len(done), len(todo))

    fresh = not os.path.exists(cfg.output)
    with open(cfg.output, "a", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if fresh:
            w.writerow(ROW_FIELDS)
            fh.flush()

        def emit(row: ResultRow):
            w.writerow(row.as_record())
            fh.flush()

        if cfg.jobs <= 1:
            for cell in todo:
                emit(run_cell(cfg, cell))
        else:
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                futures = [pool.submit(run_cell, cfg, cell) for cell in todo]
                for fut in as_completed(futures):
                    emit(fut.result())
    # reread so callers see exactly what a resumed run would see
    return read_rows(cfg.output)
