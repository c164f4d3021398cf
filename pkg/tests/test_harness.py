import math
import re

import numpy as np
import pytest

from rcjsu.feasibility import is_feasible
from rcjsu.harness import (
    ExperimentConfig,
    ResultRow,
    brute_force_oracle,
    export_ip,
    parse_config,
    percentage_diff,
    read_rows,
    run_experiment,
    summarise,
)
from rcjsu.harness.experiment import derive_seed
from rcjsu.instance import (Instance, InstanceError, InstanceShape, Job, UncertaintyScenario,
                            generate_scenario, random_instance)
from rcjsu.scheduler import decode, evaluate, horizon

from .conftest import DATA


# -- percentage_diff ---------------------------------------------------------

def test_percentage_diff_examples():
    assert percentage_diff(110, 100) == pytest.approx(0.0909, abs=1e-4)
    assert percentage_diff(42.5, 42.5) == 0
    assert percentage_diff(0, 0) == 0


@pytest.mark.parametrize("a,best", [(0, -1), (-1, -2), (5, 6)])
def test_percentage_diff_rejects(a, best):
    with pytest.raises(ValueError):
        percentage_diff(a, best)


# -- oracle ------------------------------------------------------------------

def test_oracle_toy(toy, toy_scen):
    pi, value = brute_force_oracle(toy, toy_scen)
    assert [toy.job_names[j] for j in pi] == ["3", "2", "1"]
    assert value.mean_twt == pytest.approx(0.1)


def test_oracle_single_job():
    inst = Instance("one", 1, (Job(0, 0, 0, 3, 1, 2.0, 1.0),), (), 1.0)
    pi, value = brute_force_oracle(inst, UncertaintyScenario((1.0,), 1.0, 0, 1.0))
    assert pi.tolist() == [0]
    assert value.mean_twt == 4.0


def test_oracle_tie_prefers_lexicographic_order():
    jobs = (Job(0, 0, 0, 1, 5, 1.0, 1.0), Job(1, 1, 0, 1, 5, 1.0, 1.0))
    inst = Instance("tie", 2, jobs, (), 2.0)
    pi, value = brute_force_oracle(inst, UncertaintyScenario((2.0,), 1.0, 0, 1.0))
    assert pi.tolist() == [0, 1]
    assert value.mean_twt == 0


def test_oracle_size_limit():
    inst = random_instance(InstanceShape(n=10, machines=2), np.random.default_rng(0))
    with pytest.raises(InstanceError):
        brute_force_oracle(inst, generate_scenario(inst, 1.0, 1, 0))


def test_oracle_minimiser_feasible_and_dominant():
    rng = np.random.default_rng(4)
    for _ in range(5):
        inst = random_instance(InstanceShape(n=6, machines=2), rng)
        scen = generate_scenario(inst, 0.8, 3, int(rng.integers(1 << 30)))
        pi, value = brute_force_oracle(inst, scen)
        for cap in scen.capacities:
            assert is_feasible(inst, decode(inst, cap, pi).starts, cap)
        for _ in range(30):
            assert evaluate(inst, scen, rng.permutation(inst.n)).mean_twt >= value.mean_twt


# -- summarise ---------------------------------------------------------------

def _row(solver, rep, value, inst="i", mult=0.5, status="ok"):
    return ResultRow(inst, mult, solver, rep, 0, value, 1.0, 10, status)


def test_summarise_single_solver():
    rep = summarise([_row("apsa", r, 10.0 + r) for r in range(3)] +
                    [_row("apsa", 0, 4.0, inst="j")])
    assert all(c.pct_vs_best_mean == 0 for c in rep.cells)
    assert rep.best_counts == {"apsa": 2}


def test_summarise_ties_count_for_both():
    rows = [_row(s, r, 5.0) for s in ("a", "b") for r in range(2)]
    assert summarise(rows).best_counts == {"a": 1, "b": 1}


def test_summarise_percentages():
    rows = [_row("A", 0, 110.0), _row("B", 0, 100.0)]
    cells = {c.solver: c for c in summarise(rows).cells}
    assert cells["A"].pct_vs_best_mean == pytest.approx(9.0909, abs=1e-4)
    assert cells["B"].pct_vs_best_mean == 0
    assert summarise(rows).best_counts == {"A": 0, "B": 1}
    assert "9.091" in summarise(rows).to_csv()


def test_summarise_ignores_failed_rows_and_is_pure():
    rows = [_row("A", 0, 3.0), _row("A", 1, math.nan, status="skipped")]
    assert summarise(rows).cells[0].runs == 1
    assert summarise(rows).to_csv() == summarise(list(rows)).to_csv()
    with pytest.raises(ValueError):
        summarise([_row("A", 1, math.nan, status="error")])


# -- experiments -------------------------------------------------------------

def test_derive_seed_stable():
    assert derive_seed(0, "a", 0.5, 1) == derive_seed(0, "a", 0.5, 1)
    assert derive_seed(0, "a", 0.5, 1) != derive_seed(0, "a", 0.5, 2)
    assert 0 <= derive_seed("x") < 2 ** 63


def _config(tmp_path, **kw):
    base = dict(instances=[str(DATA / "rand-8x2.rcj")], multipliers=[0.9], samples=3,
                repetitions=3, time_limit=0.2, iters=50, eval_rate=2000.0,
                output=str(tmp_path / "rows.csv"))
    base.update(kw)
    return ExperimentConfig(**base)


def test_experiment_rows_and_resume(tmp_path):
    cfg = _config(tmp_path)
    rows = run_experiment(cfg)
    assert len(rows) == 3
    assert {r.status for r in rows} == {"ok"}
    assert len({r.seed for r in rows}) == 3
    first = (tmp_path / "rows.csv").read_text()
    assert run_experiment(cfg) == rows
    assert (tmp_path / "rows.csv").read_text() == first


def test_experiment_fresh_rerun_is_identical(tmp_path):
    a = run_experiment(_config(tmp_path, output=str(tmp_path / "a.csv")))
    b = run_experiment(_config(tmp_path, output=str(tmp_path / "b.csv")))
    assert [(r.key, r.best_mean_twt) for r in a] == [(r.key, r.best_mean_twt) for r in b]


def test_experiment_resumes_partial_output(tmp_path):
    cfg = _config(tmp_path)
    full = run_experiment(cfg)
    path = tmp_path / "rows.csv"
    lines = path.read_text().splitlines(keepends=True)
    path.write_text("".join(lines[:2]))  # keep header and the first row
    resumed = run_experiment(cfg)
    assert sorted((r.key, r.best_mean_twt) for r in resumed) == \
           sorted((r.key, r.best_mean_twt) for r in full)


def test_infeasible_level_is_skipped(tmp_path):
    cfg = _config(tmp_path, multipliers=[0.05, 0.9], repetitions=1)
    rows = run_experiment(cfg)
    status = {r.multiplier: r for r in rows}
    assert status[0.05].status == "skipped"
    assert "infeasible" in status[0.05].message
    assert status[0.9].status == "ok"
    assert len(read_rows(cfg.output)) == 2


def test_experiment_oracle_and_baseline(tmp_path):
    cfg = _config(tmp_path, solvers=["apsa", "sa1", "oracle"], repetitions=2)
    rows = run_experiment(cfg)
    assert len(rows) == 5
    oracle = [r for r in rows if r.solver == "oracle"][0].best_mean_twt
    assert all(r.best_mean_twt >= oracle - 1e-9 for r in rows)
    report = summarise(rows)
    assert sum(report.best_counts.values()) >= 1


def test_parse_config(tmp_path):
    cfg = parse_config("""
        # comment
        instances = a.rcj, b.rcj
        multipliers = 0.5, 1.0
        solvers = apsa, sa1
        repetitions = 2
        time_limit = 1.5
        eval_rate = none
        output = out.csv
    """, str(tmp_path))
    assert cfg.instances == [str(tmp_path / "a.rcj"), str(tmp_path / "b.rcj")]
    assert cfg.multipliers == [0.5, 1.0]
    assert cfg.time_limit == 1.5 and cfg.eval_rate is None
    assert cfg.output == str(tmp_path / "out.csv")
    assert cfg.apsa_params("sa1", 3).pop_size == 1


@pytest.mark.parametrize("text", ["bogus = 1", "no equals sign", "instances = a\nsolvers = cplex",
                                  "instances = a\nrepetitions = 0"])
def test_parse_config_errors(text):
    with pytest.raises(ValueError):
        parse_config(text)


# -- LP export ---------------------------------------------------------------

def _single(inst, cap):
    return UncertaintyScenario((float(cap),), 1.0, 0, cap)


def test_lp_counts(toy):
    scen = UncertaintyScenario((10.0, 10.0), 1.0, 0, 10.0)
    model = export_ip(toy, scen)
    D = horizon(toy)
    assert D == 3
    assert model.n_vars == 2 * 3 * (D + 1)
    assert model.counts["done"] == 2 * 3
    assert model.counts["mono"] == 2 * 3 * D
    assert "rel" not in model.counts  # every job has e_j = 0
    assert model.counts["res"] == 2 * (D + 1)
    names = re.findall(r"z_s\d+_j\d+_t\d+", model.text.split("Binaries")[1])
    assert len(names) == model.n_vars


def test_lp_release_rows():
    jobs = (Job(0, 0, 2, 3, 9, 1.0, 1.0), Job(1, 0, 0, 1, 9, 1.0, 1.0))
    inst = Instance("rel", 1, jobs, (), 1.0)
    model = export_ip(inst, UncertaintyScenario((1.0, 1.0, 1.0), 1.0, 0, 1.0))
    # e_0 = 2 + 3 - 1 = 4 zero-fixing rows for job 0, none for job 1, per sample
    assert model.counts["rel"] == 3 * 4


def test_lp_variable_cap(toy):
    with pytest.raises(InstanceError):
        export_ip(toy, _single(toy, 10), max_vars=5)


highspy = pytest.importorskip("highspy")


def _solve(model, tmp_path):
    path = tmp_path / "model.lp"
    path.write_text(model.text)
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    assert h.readModel(str(path)) == highspy.HighsStatus.kOk
    h.run()
    assert h.getModelStatus() == highspy.HighsModelStatus.kOptimal
    return h.getInfo().objective_function_value


def test_lp_toy_optimum(toy, tmp_path):
    assert _solve(export_ip(toy, _single(toy, 10)), tmp_path) == pytest.approx(0.1, abs=1e-7)


@pytest.mark.parametrize("seed", range(4))
def test_lp_matches_oracle_single_sample(seed, tmp_path):
    rng = np.random.default_rng(100 + seed)
    inst = random_instance(InstanceShape(n=5, machines=2, proc=(1, 3)), rng)
    scen = generate_scenario(inst, 0.7, 1, seed)
    _, value = brute_force_oracle(inst, scen)
    assert _solve(export_ip(inst, scen), tmp_path) == pytest.approx(value.mean_twt, abs=1e-6)
