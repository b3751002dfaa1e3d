import csv
import io
import json
import math

import pytest

from streament.cli import main
from streament.distributions import FamilySpec, materialize
from streament.harness import (
    SWEEP_COLUMNS,
    Constants,
    RunConfig,
    RunReport,
    build_params,
    predicted_samples,
    run_config,
    run_one,
    sweep_rows,
    trial_rng,
    write_sweep_csv,
)


def config(**kw):
    base = dict(family=FamilySpec("zipf", 8), estimator="simple", eps=1.0, trials=4, seed=3)
    base.update(kw)
    return RunConfig(**base)


def test_report_round_trip_and_schema():
    report = run_config(config())
    back = RunReport.from_json(report.to_json())
    assert back.to_json() == report.to_json()
    data = json.loads(report.to_json())
    assert list(data) == list(RunReport.FIELDS)
    assert data["units"] == "nats"
    assert set(data["trials"][0]) == set(RunReport.TRIAL_FIELDS)
    assert set(data["aggregates"]) == set(RunReport.AGGREGATE_FIELDS)


def test_report_rejects_missing_fields():
    data = json.loads(run_config(config()).to_json())
    del data["aggregates"]
    with pytest.raises(ValueError):
        RunReport.from_json(json.dumps(data))


@pytest.mark.parametrize("est", ["simple", "two-interval", "general", "plug-in"])
def test_reports_are_byte_identical_across_runs(est):
    cfg = config(estimator=est, family=FamilySpec("uniform", 16), trials=3)
    assert run_config(cfg).to_json() == run_config(cfg).to_json()


def test_different_seeds_differ():
    a = run_config(config(seed=1)).trials
    b = run_config(config(seed=2)).trials
    assert [t["estimate"] for t in a] != [t["estimate"] for t in b]


def test_workers_do_not_change_results():
    cfg = config(trials=6)
    serial = run_config(cfg).to_json()
    pooled = run_config(RunConfig(**{**cfg.__dict__, "workers": 2})).to_json()
    assert serial == pooled


def test_simple_samples_match_prediction():
    report = run_config(config())
    assert all(t["samples_consumed"] == report.predicted_worst_case_samples
               for t in report.trials)


def test_dirac_trial_record():
    pmf = materialize(FamilySpec("dirac", 4))
    params = build_params("general", 4, 0.5, Constants())
    rec = run_one("general", params, pmf, trial_rng(0, 0))
    assert rec.error is None
    assert rec.degenerate_intervals == tuple(range(2, params.T + 1))
    assert rec.abs_error < 0.5


def test_memory_contrast():
    rows = list(sweep_rows(config(family=FamilySpec("uniform", 64), trials=1, eps=1.0),
                           [64], [1.0], ["plug-in", "two-interval", "general"]))
    regs = {r["estimator"]: r["max_registers"] for r in rows}
    assert regs["plug-in"] > 20
    assert regs["two-interval"] <= 20 and regs["general"] <= 20


def test_sweep_rows_and_csv():
    rows = list(sweep_rows(config(trials=2), [4, 8], [1.0, 0.5], ["simple", "general"]))
    assert len(rows) == 8
    text = write_sweep_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert tuple(parsed[0]) == SWEEP_COLUMNS
    assert all(r["error"] == "" for r in parsed)


def test_sweep_records_errors_per_row():
    base = config(trials=1, constants=Constants(beta=20))
    rows = list(sweep_rows(base, [8], [1.0], ["two-interval", "simple"]))
    assert rows[0]["error"].startswith("VacuousPartition")
    assert rows[1]["error"] == ""


def test_mean_samples_grow_as_eps_shrinks():
    rows = list(sweep_rows(config(trials=1), [8], [1.0, 0.5, 0.25], ["simple"]))
    samples = [r["mean_samples"] for r in rows]
    assert samples[0] < samples[1] < samples[2]


@pytest.mark.parametrize("est", ["two-interval", "general"])
def test_predicted_samples_grow_as_eps_shrinks(est):
    vals = [predicted_samples(est, build_params(est, 1000, e, Constants())) for e in (1, .5, .25)]
    assert vals[0] < vals[1] < vals[2]


def test_config_validation():
    with pytest.raises(ValueError):
        config(estimator="nope")
    with pytest.raises(ValueError):
        config(eps=0)
    with pytest.raises(ValueError):
        config(trials=0)


def test_run_config_dict_round_trip():
    cfg = config(constants=Constants.tuned())
    assert RunConfig.from_dict(cfg.to_dict()) == cfg


# CLI


def test_cli_params(capsys):
    assert main(["params", "--k", "1024", "--estimator", "general"]) == 0
    out = capsys.readouterr().out
    assert "T = 3" in out and "0.0469192396404" in out


def test_cli_params_theory_print(capsys):
    assert main(["params", "--k", "64", "--estimator", "general",
                 "--mode", "theory-print"]) == 0
    out = capsys.readouterr().out
    assert "[FAIL] beta > 16" in out


def test_cli_vacuous_partition_hint(capsys):
    assert main(["params", "--k", "8", "--estimator", "two-interval", "--beta", "20"]) == 2
    assert "lower --beta" in capsys.readouterr().err


def test_cli_estimate_writes_report(tmp_path):
    out = tmp_path / "r.json"
    assert main(["estimate", "--k", "8", "--eps", "1", "--family", "zipf:1",
                 "--trials", "2", "--out", str(out)]) == 0
    report = RunReport.from_json(out.read_text())
    assert report.config["family"] == {"family": "zipf", "k": 8, "s": 1.0}
    assert len(report.trials) == 2


def test_cli_bits_only_change_summary(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["estimate", "--k", "4", "--eps", "1", "--trials", "2", "--out", str(a)])
    main(["estimate", "--k", "4", "--eps", "1", "--trials", "2", "--out", str(b),
          "--units", "bits"])
    assert a.read_text() == b.read_text()
    assert "bits" in capsys.readouterr().err


def test_cli_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"family": "uniform", "k": 4, "eps": 1.0, "trials": 2,
                               "constants": {"C1": 3}}))
    out = tmp_path / "r.json"
    assert main(["estimate", "--config", str(cfg), "--trials", "3", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["config"]["trials"] == 3
    assert data["config"]["constants"]["C1"] == 3


def test_cli_tuned_preset(tmp_path):
    out = tmp_path / "r.json"
    main(["estimate", "--k", "4", "--eps", "1", "--preset", "tuned", "--cr", "5",
          "--out", str(out)])
    consts = json.loads(out.read_text())["config"]["constants"]
    assert consts["C_N"] == 2 and consts["C_R"] == 5


def test_cli_verify_suites(capsys):
    for suite in ("lemmas", "decomposition"):
        assert main(["verify", suite]) == 0
    assert "checks passed" in capsys.readouterr().out


def test_cli_sweep(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--k", "4,8", "--eps", "1", "--estimator", "simple,general",
                 "--trials", "1", "--out", str(out)]) == 0
    assert len(list(csv.DictReader(out.open()))) == 4


@pytest.mark.parametrize("argv", [
    ["estimate", "--k", "4", "--eps", "-1"],
    ["estimate", "--k", "4", "--family", "zipf:0"],
    ["estimate", "--family", "custom:0.5,0.6"],
    ["estimate", "--k", "4", "--estimator", "magic"],
    ["sweep", "--k", "4", "--estimator", "simple,magic"],
    ["params"],
])
def test_cli_config_errors_exit_two(argv):
    assert main(argv) == 2
