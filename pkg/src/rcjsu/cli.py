"""Command line entry point: ``rcjsu <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import prob_dynamics
from .apsa import ApsaParams, OperatorProbs, run_apsa
from .harness.experiment import load_config, read_rows, run_experiment
from .harness.lp_export import DEFAULT_MAX_VARS, export_ip
from .harness.oracle import DEFAULT_MAX_N, brute_force_oracle
from .harness.report import summarise
from .instance import InstanceError, format_scenario, generate_scenario, read_instance
from .metropolis import MhParams
from .scheduler import format_schedules


def _scenario_args(p: argparse.ArgumentParser):
    p.add_argument("--instance", required=True, help="instance file")
    p.add_argument("--multiplier", type=float, default=1.0, help="uncertainty level U_l")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--scenario-seed", type=int, default=None,
                   help="seed for the capacity samples (defaults to --seed)")


def _scenario(args):
    inst = read_instance(args.instance)
    seed = args.scenario_seed if args.scenario_seed is not None else args.seed
    return inst, generate_scenario(inst, args.multiplier, args.samples, seed)


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_solve(args) -> int:
    inst, scen = _scenario(args)
    params = ApsaParams(
        pop_size=args.pop_size, time_limit=args.time_limit, rho=args.rho,
        mh=MhParams(args.t0, args.iters, args.gamma, literal_acceptance=args.literal_acceptance),
        beta_len=args.beta_len, seed=args.seed, eval_rate=args.eval_rate,
    )
    res = run_apsa(inst, scen, params)
    names = inst.job_names
    result = {
        "instance": inst.name,
        "multiplier": scen.multiplier,
        "samples": scen.samples,
        "seed": args.seed,
        "best_mean_twt": res.best_value.mean_twt,
        "per_sample": list(res.best_value.per_sample),
        "permutation": [names[j] for j in res.best_pi.tolist()],
        "evaluations": res.evaluations,
        "generations": res.generations,
        "operator_counts": {op.value: c for op, c in res.operator_counts.items()},
        "elapsed": res.elapsed,
    }
    _write(args.output, json.dumps(result, indent=2) + "\n")
    if args.trace:
        _write(args.trace, res.trace_csv())
    if args.scenario_out:
        _write(args.scenario_out, format_scenario(scen))
    if args.schedule_out:
        _write(args.schedule_out, format_schedules(inst, scen, res.best_pi))
    return 0


def cmd_bench(args) -> int:
    cfg = load_config(args.config)
    if args.jobs is not None:
        cfg.jobs = args.jobs
    rows = run_experiment(cfg)
    bad = [r for r in rows if r.status == "error"]
    print(f"{len(rows)} rows in {cfg.output} ({len(bad)} errors)")
    return 0


def cmd_report(args) -> int:
    report = summarise(read_rows(args.rows))
    _write(args.output, report.to_csv())
    return 0


def cmd_oracle(args) -> int:
    inst, scen = _scenario(args)
    pi, value = brute_force_oracle(inst, scen, args.max_n)
    names = inst.job_names
    _write(args.output, json.dumps({
        "instance": inst.name,
        "permutation": [names[j] for j in pi.tolist()],
        "best_mean_twt": value.mean_twt,
        "per_sample": list(value.per_sample),
    }, indent=2) + "\n")
    return 0


def cmd_export_lp(args) -> int:
    inst, scen = _scenario(args)
    model = export_ip(inst, scen, horizon=args.horizon, max_vars=args.max_vars)
    _write(args.output, model.text)
    return 0


def cmd_probsim(args) -> int:
    p0 = OperatorProbs(*args.p0)
    traj = prob_dynamics.integrate(np.array(p0.as_tuple()), args.steps, args.rho)
    _write(args.output, prob_dynamics.trajectory_csv(traj))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rcjsu", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run APSA once")
    _scenario_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-limit", type=float, default=600.0)
    p.add_argument("--pop-size", type=int, default=10)
    p.add_argument("--rho", type=float, default=0.9)
    p.add_argument("--t0", type=float, default=1500.0)
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--beta-len", type=int, default=5)
    p.add_argument("--literal-acceptance", action="store_true",
                   help="accept worse moves when exp(-delta/T) <= rand()")
    p.add_argument("--eval-rate", type=float, default=None,
                   help="count time as evaluations / RATE instead of wall-clock seconds")
    p.add_argument("--trace", help="write the progress trace CSV here")
    p.add_argument("--scenario-out", help="write the capacity samples here")
    p.add_argument("--schedule-out", help="write per-sample start times here")
    p.add_argument("-o", "--output", help="result JSON (default stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run an experiment config")
    p.add_argument("config")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="summarise result rows")
    p.add_argument("rows")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("oracle", help="exhaustive optimum for small instances")
    _scenario_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("export-lp", help="write the time-indexed IP as LP text")
    _scenario_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--max-vars", type=int, default=DEFAULT_MAX_VARS)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_lp)

    p = sub.add_parser("probsim", help="expected operator-probability trajectory")
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--rho", type=float, default=0.9)
    p.add_argument("--p0", type=float, nargs=3, default=(0.65, 0.3, 0.05),
                   metavar=("P_B", "P_J", "P_R"))
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_probsim)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (InstanceError, ValueError, OSError) as exc:
        print(f"rcjsu {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
