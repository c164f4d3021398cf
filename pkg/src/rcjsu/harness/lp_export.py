"""Time-indexed integer program in CPLEX LP text format.

Variable ``z_s{s}_j{j}_t{t}`` is 1 when, in sample ``s``, job ``j`` has
finished by the end of period ``t`` (its last occupied period is at most
``t``), for ``t`` in ``0..D``.  A job started at ``S`` with processing time
``p`` occupies periods ``S..S+p-1``, so it runs in period ``t`` exactly when
``z[t+p-1] - z[t-1] = 1``.  Out-of-range indices are constants: ``z[t] = 0``
for ``t < 0`` and ``z[t] = 1`` for ``t > D``.

Constraint families, each repeated per sample:

* ``done``     every job is finished by ``D``
* ``mono``     once finished, stays finished
* ``rel``      no job finishes before period ``r + p - 1``
* ``prec``     ``z_b[t] <= z_a[t - p_b]`` for each precedence ``a -> b``
* ``mach``     at most one running job per machine and period
* ``res``      running jobs use at most the sample capacity per period

The objective is the sample mean of the weighted tardiness, charging
``w * max(0, t + 1 - d)`` to a job whose last period is ``t``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from ..instance import Instance, InstanceError, UncertaintyScenario
from ..scheduler import horizon as schedule_horizon

DEFAULT_MAX_VARS = 2_000_000
TERMS_PER_LINE = 6


@dataclass
class LpModel:
    text: str
    horizon: int
    n_vars: int
    counts: dict[str, int]


def var(s: int, j: int, t: int) -> str:
    return f"z_s{s}_j{j}_t{t}"


def _fmt(c: float) -> str:
    c = float(c)
    return str(int(c)) if c.is_integer() else repr(c)


def _expr(terms: dict[str, float]) -> str:
    parts = []
    for i, (name, c) in enumerate(terms.items()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = name if mag == 1 else f"{_fmt(mag)} {name}"
        if i == 0:
            parts.append(f"- {body}" if c < 0 else body)
        else:
            parts.append(f"{sign} {body}")
    lines = [" ".join(parts[k:k + TERMS_PER_LINE]) for k in range(0, len(parts), TERMS_PER_LINE)]
    return "\n   ".join(lines)


def export_ip(inst: Instance, scen: UncertaintyScenario, horizon: int | None = None,
              max_vars: int = DEFAULT_MAX_VARS) -> LpModel:
    D = schedule_horizon(inst) if horizon is None else int(horizon)
    u = scen.samples
    n_vars = u * inst.n * (D + 1)
    if n_vars > max_vars:
        raise InstanceError(f"model needs {n_vars} variables, above the cap of {max_vars}")
    jobs = inst.jobs

    def z(s, j, t, terms, coef, const):
        """Add ``coef * z[s, j, t]`` to ``terms``; out-of-range terms go to ``const``."""
        if t < 0:
            return const
        if t > D:
            return const + coef
        name = var(s, j, t)
        terms[name] = terms.get(name, 0.0) + coef
        if terms[name] == 0:
            del terms[name]
        return const

    out = [
        f"\\ instance {inst.name}: {inst.n} jobs, {u} samples, horizon D={D}",
        "\\ z_s<s>_j<j>_t<t> = 1 once job j (dense id) of sample s has finished by period t",
        "Minimize",
    ]
    obj: dict[str, float] = {}
    for s in range(u):
        for j, job in enumerate(jobs):
            cost = [job.weight * max(0, t + 1 - job.due) for t in range(D + 2)]
            for t in range(D + 1):
                c = cost[t] - cost[t + 1] if t < D else cost[D]
                if c:
                    obj[var(s, j, t)] = obj.get(var(s, j, t), 0.0) + c / u
    out.append(" obj: " + (_expr(obj) if obj else "0 " + var(0, 0, D)))
    out.append("Subject To")

    counts: dict[str, int] = defaultdict(int)

    def row(family, name, terms, sense, rhs):
        if not terms:
            return
        counts[family] += 1
        out.append(f" {family}_{name}: {_expr(terms)} {sense} {_fmt(rhs)}")

    by_machine = defaultdict(list)
    for j, job in enumerate(jobs):
        by_machine[job.machine].append(j)

    for s in range(u):
        for j in range(inst.n):
            row("done", f"s{s}_j{j}", {var(s, j, D): 1.0}, "=", 1)
        for j in range(inst.n):
            for t in range(1, D + 1):
                row("mono", f"s{s}_j{j}_t{t}", {var(s, j, t): 1.0, var(s, j, t - 1): -1.0}, ">=", 0)
        for j, job in enumerate(jobs):
            for t in range(job.release + job.proc - 1):
                row("rel", f"s{s}_j{j}_t{t}", {var(s, j, t): 1.0}, "=", 0)
        for a, b in inst.precedences:
            for t in range(D + 1):
                terms: dict[str, float] = {}
                const = z(s, b, t, terms, 1.0, 0.0)
                const = z(s, a, t - jobs[b].proc, terms, -1.0, const)
                row("prec", f"s{s}_a{a}_b{b}_t{t}", terms, "<=", -const)
        for m in sorted(by_machine):
            for t in range(D + 1):
                terms, const = {}, 0.0
                for j in by_machine[m]:
                    const = z(s, j, t + jobs[j].proc - 1, terms, 1.0, const)
                    const = z(s, j, t - 1, terms, -1.0, const)
                row("mach", f"s{s}_m{m}_t{t}", terms, "<=", 1 - const)
        cap = scen.capacities[s]
        for t in range(D + 1):
            terms, const = {}, 0.0
            for j, job in enumerate(jobs):
                if job.resource == 0:
                    continue
                const = z(s, j, t + job.proc - 1, terms, job.resource, const)
                const = z(s, j, t - 1, terms, -job.resource, const)
            row("res", f"s{s}_t{t}", terms, "<=", cap - const)

    out.append("Binaries")
    names = [var(s, j, t) for s in range(u) for j in range(inst.n) for t in range(D + 1)]
    for k in range(0, len(names), 8):
        out.append(" " + " ".join(names[k:k + 8]))
    out.append("End")
    return LpModel("\n".join(out) + "\n", D, n_vars, dict(counts))
