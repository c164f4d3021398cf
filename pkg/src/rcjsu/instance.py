"""Problem instances for resource constrained job scheduling under uncertainty.

An instance is a set of jobs, each bound to one machine, sharing a single
renewable resource of nominal capacity ``G``.  Uncertainty enters only through
the resource: a scenario is a list of per-sample capacities drawn from
``[u_min, multiplier * G]``.

Text format (UTF-8, line oriented, ``#`` starts a comment)::

    NAME <string>
    MACHINES <l>
    CAPACITY <G>
    JOBS <n>
    JOB <id> <machine> <release> <proc> <due> <weight> <resource>
    PREC <a> <b>

Job ids in the file are arbitrary tokens; after parsing jobs are numbered
densely ``0..n-1`` in file order and the original tokens are kept as names.
"""
from __future__ import annotations

import graphlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class InstanceError(ValueError):
    """Raised for malformed or semantically invalid instances."""


class InstanceSyntaxError(InstanceError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class InstanceValidationError(InstanceError):
    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class Job:
    id: int
    machine: int
    release: int
    proc: int
    due: int
    weight: float
    resource: float
    name: str = ""


@dataclass(frozen=True)
class Instance:
    name: str
    machines: int
    jobs: tuple[Job, ...]
    precedences: tuple[tuple[int, int], ...]
    capacity: float

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple(self.jobs))
        object.__setattr__(
            self, "precedences", tuple(sorted({(int(a), int(b)) for a, b in self.precedences}))
        )

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def job_names(self) -> tuple[str, ...]:
        return tuple(j.name or str(j.id) for j in self.jobs)

    def job_index(self, name: str) -> int:
        return self.job_names.index(name)

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        preds: list[list[int]] = [[] for _ in self.jobs]
        for a, b in self.precedences:
            preds[b].append(a)
        return tuple(tuple(p) for p in preds)

    @cached_property
    def arrays(self) -> "InstanceArrays":
        """Flat numpy view used by the decoding kernel."""
        preds = self.predecessors
        ptr = np.zeros(self.n + 1, dtype=np.int64)
        ptr[1:] = np.cumsum([len(p) for p in preds])
        idx = np.array([a for p in preds for a in p], dtype=np.int64)
        return InstanceArrays(
            machine=np.array([j.machine for j in self.jobs], dtype=np.int64),
            release=np.array([j.release for j in self.jobs], dtype=np.int64),
            proc=np.array([j.proc for j in self.jobs], dtype=np.int64),
            due=np.array([j.due for j in self.jobs], dtype=np.int64),
            weight=np.array([j.weight for j in self.jobs], dtype=np.float64),
            resource=np.array([j.resource for j in self.jobs], dtype=np.float64),
            pred_ptr=ptr,
            pred_idx=idx,
        )


@dataclass(frozen=True)
class InstanceArrays:
    machine: np.ndarray
    release: np.ndarray
    proc: np.ndarray
    due: np.ndarray
    weight: np.ndarray
    resource: np.ndarray
    pred_ptr: np.ndarray
    pred_idx: np.ndarray


@dataclass(frozen=True)
class UncertaintyScenario:
    capacities: tuple[float, ...]
    multiplier: float
    seed: int
    u_min: float

    def __post_init__(self):
        object.__setattr__(self, "capacities", tuple(float(c) for c in self.capacities))

    @property
    def samples(self) -> int:
        return len(self.capacities)

    @cached_property
    def capacity_array(self) -> np.ndarray:
        return np.array(self.capacities, dtype=np.float64)


# ---------------------------------------------------------------------------
# validation


def validate_instance(inst: Instance) -> list[str]:
    """Return every violation found in ``inst``; an empty list means valid."""
    violations = []
    if inst.n == 0:
        violations.append("no jobs")
    if inst.machines < 1:
        violations.append(f"machine count must be positive, got {inst.machines}")
    if inst.capacity < 0:
        violations.append(f"negative nominal capacity {inst.capacity}")
    for pos, job in enumerate(inst.jobs):
        tag = f"job {job.name or job.id}"
        if job.id != pos:
            violations.append(f"{tag}: id {job.id} is not its position {pos}")
        if not 0 <= job.machine < inst.machines:
            violations.append(f"{tag}: machine {job.machine} out of range [0, {inst.machines})")
        if job.proc <= 0:
            violations.append(f"{tag}: nonpositive processing time {job.proc}")
        if job.release < 0:
            violations.append(f"{tag}: negative release time {job.release}")
        if job.weight < 0:
            violations.append(f"{tag}: negative weight {job.weight}")
        if job.resource < 0:
            violations.append(f"{tag}: negative resource {job.resource}")
        if job.resource > inst.capacity:
            violations.append(
                f"{tag}: job exceeds nominal capacity ({job.resource} > {inst.capacity})"
            )

    graph: dict[int, set[int]] = {j: set() for j in range(inst.n)}
    for a, b in inst.precedences:
        if not (0 <= a < inst.n and 0 <= b < inst.n):
            violations.append(f"precedence ({a}, {b}) names an unknown job")
            continue
        if a == b:
            violations.append(f"precedence cycle: job {a} precedes itself")
            continue
        if inst.jobs[a].machine != inst.jobs[b].machine:
            violations.append(f"cross-machine precedence ({a}, {b})")
        graph[b].add(a)
    try:
        tuple(graphlib.TopologicalSorter(graph).static_order())
    except graphlib.CycleError as exc:
        violations.append(f"precedence cycle through jobs {sorted(set(exc.args[1]))}")
    return violations


def u_min(inst: Instance) -> float:
    """Largest single-job resource requirement."""
    if inst.n == 0:
        raise InstanceError("u_min of an empty instance")
    return max(job.resource for job in inst.jobs)


def generate_scenario(
    inst: Instance, multiplier: float, samples: int, seed: int
) -> UncertaintyScenario:
    """Draw ``samples`` capacities i.i.d. uniform on ``[u_min, multiplier * G]``."""
    if not 0 < multiplier <= 1:
        raise InstanceError(f"multiplier must lie in (0, 1], got {multiplier}")
    if samples < 1:
        raise InstanceError(f"need at least one sample, got {samples}")
    lo = u_min(inst)
    hi = multiplier * inst.capacity
    if hi < lo:
        raise InstanceError(
            f"infeasible range: multiplier {multiplier} gives capacity {hi} < u_min {lo}"
        )
    rng = np.random.default_rng(seed)
    caps = lo + (hi - lo) * rng.random(samples)
    # guard the closed interval against rounding at the top end
    caps = np.clip(caps, lo, hi)
    return UncertaintyScenario(tuple(caps.tolist()), float(multiplier), int(seed), float(lo))


def nominal_scenario(inst: Instance) -> UncertaintyScenario:
    """Single sample at the nominal capacity: the deterministic problem."""
    return UncertaintyScenario((float(inst.capacity),), 1.0, 0, float(u_min(inst)))


# ---------------------------------------------------------------------------
# text format


def _parse_number(token: str, kind: type, line: int, col: int, what: str):
    try:
        if kind is int:
            value = int(token)
        else:
            value = float(token)
            if not np.isfinite(value):
                raise ValueError
    except ValueError:
        raise InstanceSyntaxError(f"expected {kind.__name__} for {what}, got {token!r}", line, col)
    return value


def _tokens(text: str) -> Iterable[tuple[int, list[tuple[int, str]]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = []
        pos = 0
        for tok in line.split():
            pos = line.index(tok, pos)
            toks.append((pos + 1, tok))
            pos += len(tok)
        if toks:
            yield lineno, toks


def parse_instance(text: str) -> Instance:
    """Parse and validate an instance in the text format described above."""
    header: dict[str, object] = {}
    job_rows = []
    prec_rows = []
    arity = {"NAME": None, "MACHINES": 1, "CAPACITY": 1, "JOBS": 1, "JOB": 7, "PREC": 2}
    last_line = 0
    for lineno, toks in _tokens(text):
        last_line = lineno
        col, key = toks[0]
        args = toks[1:]
        if key not in arity:
            raise InstanceSyntaxError(f"unknown keyword {key!r}", lineno, col)
        if key == "NAME":
            if not args:
                raise InstanceSyntaxError("NAME needs a value", lineno, col)
            header["NAME"] = " ".join(t for _, t in args)
            continue
        if len(args) != arity[key]:
            raise InstanceSyntaxError(
                f"{key} takes {arity[key]} fields, got {len(args)}", lineno, col
            )
        if key in ("MACHINES", "JOBS"):
            if key in header:
                raise InstanceSyntaxError(f"duplicate {key}", lineno, col)
            header[key] = _parse_number(args[0][1], int, lineno, args[0][0], key)
        elif key == "CAPACITY":
            if key in header:
                raise InstanceSyntaxError("duplicate CAPACITY", lineno, col)
            header[key] = _parse_number(args[0][1], float, lineno, args[0][0], key)
        elif key == "JOB":
            kinds = [str, int, int, int, int, float, float]
            names = ["id", "machine", "release", "proc", "due", "weight", "resource"]
            values = [
                tok if kind is str else _parse_number(tok, kind, lineno, c, name)
                for (c, tok), kind, name in zip(args, kinds, names)
            ]
            job_rows.append((lineno, values))
        else:
            prec_rows.append((lineno, args))

    for key in ("MACHINES", "CAPACITY", "JOBS"):
        if key not in header:
            raise InstanceSyntaxError(f"missing {key} header", last_line + 1)
    if header["JOBS"] != len(job_rows):
        raise InstanceSyntaxError(
            f"JOBS declares {header['JOBS']} jobs but {len(job_rows)} JOB lines follow",
            last_line + 1,
        )
    if not job_rows:
        raise InstanceValidationError(["no jobs"])

    ids: dict[str, int] = {}
    jobs = []
    for lineno, (name, machine, release, proc, due, weight, resource) in job_rows:
        if name in ids:
            raise InstanceSyntaxError(f"duplicate job id {name!r}", lineno, 5)
        ids[name] = len(jobs)
        jobs.append(Job(len(jobs), machine, release, proc, due, weight, resource, name))

    precs = []
    for lineno, args in prec_rows:
        pair = []
        for col, tok in args:
            if tok not in ids:
                raise InstanceSyntaxError(f"PREC names unknown job {tok!r}", lineno, col)
            pair.append(ids[tok])
        precs.append(tuple(pair))

    inst = Instance(
        name=str(header.get("NAME", "unnamed")),
        machines=int(header["MACHINES"]),
        jobs=tuple(jobs),
        precedences=tuple(precs),
        capacity=float(header["CAPACITY"]),
    )
    violations = validate_instance(inst)
    if violations:
        raise InstanceValidationError(violations)
    return inst


def format_instance(inst: Instance) -> str:
    lines = [
        f"NAME {inst.name}",
        f"MACHINES {inst.machines}",
        f"CAPACITY {inst.capacity!r}",
        f"JOBS {inst.n}",
    ]
    names = inst.job_names
    for job, name in zip(inst.jobs, names):
        lines.append(
            f"JOB {name} {job.machine} {job.release} {job.proc} {job.due} "
            f"{job.weight!r} {job.resource!r}"
        )
    for a, b in inst.precedences:
        lines.append(f"PREC {names[a]} {names[b]}")
    return "\n".join(lines) + "\n"


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def format_scenario(scen: UncertaintyScenario) -> str:
    lines = [
        f"MULTIPLIER {scen.multiplier!r}",
        f"SEED {scen.seed}",
        f"UMIN {scen.u_min!r}",
    ]
    lines += [f"SAMPLE {s} {c!r}" for s, c in enumerate(scen.capacities)]
    return "\n".join(lines) + "\n"


def parse_scenario(text: str) -> UncertaintyScenario:
    header = {}
    samples = {}
    for lineno, toks in _tokens(text):
        key = toks[0][1]
        vals = [t for _, t in toks[1:]]
        if key == "SAMPLE" and len(vals) == 2:
            samples[int(vals[0])] = float(vals[1])
        elif key in ("MULTIPLIER", "SEED", "UMIN") and len(vals) == 1:
            header[key] = vals[0]
        else:
            raise InstanceSyntaxError(f"bad scenario line {key!r}", lineno, toks[0][0])
    if sorted(samples) != list(range(len(samples))) or not samples:
        raise InstanceError("scenario samples must be numbered 0..u-1")
    return UncertaintyScenario(
        tuple(samples[s] for s in range(len(samples))),
        float(header.get("MULTIPLIER", 1.0)),
        int(header.get("SEED", 0)),
        float(header.get("UMIN", min(samples.values()))),
    )


# ---------------------------------------------------------------------------
# synthetic instances


@dataclass
class InstanceShape:
    """Knobs for :func:`random_instance`.

    Defaults loosely follow the public RCJS benchmark: around a dozen jobs per
    machine, processing times up to 10 and a resource that binds when every
    machine runs at once.
    """

    n: int = 12
    machines: int = 3
    proc: tuple[int, int] = (1, 10)
    weight: tuple[float, float] = (0.1, 1.0)
    prec_prob: float = 0.15
    release_spread: float = 0.4
    due_slack: float = 0.8
    resource: tuple[float, float] = (1.0, 10.0)
    capacity_ratio: float = 0.5
    integer_resources: bool = True
    # capacity is at least this multiple of the largest job, so that every
    # uncertainty level down to 1/min_capacity_factor stays feasible
    min_capacity_factor: float = 2.0
    name: str = field(default="")


def random_instance(shape: InstanceShape, rng: np.random.Generator) -> Instance:
    """Sample a valid instance.

    Precedences are only drawn between jobs on the same machine, from the
    earlier to the later job in that machine's random order, so the relation
    is acyclic by construction.  Capacity is ``capacity_ratio`` times the
    summed resource of the heaviest job on each machine, floored at the
    largest single requirement.
    """
    n, l = shape.n, shape.machines
    machine = rng.integers(0, l, size=n)
    machine[: min(n, l)] = np.arange(min(n, l))
    rng.shuffle(machine)
    proc = rng.integers(shape.proc[0], shape.proc[1] + 1, size=n)
    if shape.integer_resources:
        res = rng.integers(int(shape.resource[0]), int(shape.resource[1]) + 1, size=n).astype(float)
    else:
        res = rng.uniform(*shape.resource, size=n)
    weight = np.round(rng.uniform(*shape.weight, size=n), 2)

    per_machine_load = np.bincount(machine, weights=proc, minlength=l)
    span = int(per_machine_load.max())
    release = rng.integers(0, max(1, int(shape.release_spread * span)) + 1, size=n)
    due = release + proc + rng.integers(0, max(1, int(shape.due_slack * span)) + 1, size=n)

    precs = []
    for m in range(l):
        members = rng.permutation(np.flatnonzero(machine == m))
        for i in range(len(members)):
            for k in range(i + 1, len(members)):
                if rng.random() < shape.prec_prob:
                    precs.append((int(members[i]), int(members[k])))

    peak = sum(res[machine == m].max() for m in range(l) if np.any(machine == m))
    capacity = max(float(np.ceil(shape.min_capacity_factor * res.max())),
                   float(np.ceil(shape.capacity_ratio * peak)))

    jobs = tuple(
        Job(i, int(machine[i]), int(release[i]), int(proc[i]), int(due[i]),
            float(weight[i]), float(res[i]), str(i))
        for i in range(n)
    )
    return Instance(shape.name or f"rand-{n}x{l}", l, jobs, tuple(precs), capacity)
