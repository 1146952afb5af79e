import json
import math
import os

import pytest

from fpplab.cli import (
    CSV_COLUMNS,
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_OK,
    ConfigError,
    ExperimentConfig,
    ResultRow,
    emit_plot_data,
    main,
    parse_config,
    read_rows,
    run_experiment,
)


def test_happy_path():
    cfg = parse_config("three-point-gap --dist uniform:1:1.5 --n 8,16,32 --reps 100 --seed 7".split())
    assert cfg.experiment == "three-point-gap"
    assert cfg.n_values == (8, 16, 32)
    assert cfg.replicates == 100 and cfg.master_seed == 7


def test_defaults():
    cfg = parse_config(["goal-chain"])
    assert cfg.kappa == 0.1 and cfg.mask_factor == 2.0 and cfg.replicates == 1000


@pytest.mark.parametrize("argv, field", [
    (["claim1", "--kappa", "0.6"], "kappa"),
    (["goal-chain", "--kappa", "0"], "kappa"),
    (["bogus"], "experiment"),
    (["midpoint", "--dist", "uniform:2:1"], "dist"),
    (["midpoint", "--dist", "cauchy:0:1"], "dist"),
    (["midpoint", "--reps", "0"], "replicates"),
    (["midpoint", "--n", "8,x"], "n_values"),
    (["midpoint", "--delta", "-1"], "delta"),
])
def test_errors_name_the_field(argv, field):
    with pytest.raises(ConfigError, match=field):
        parse_config(argv)


def test_kappa_out_of_range_is_fine_without_tau():
    assert parse_config(["midpoint", "--kappa", "0.6"]).kappa == 0.6


def test_file_then_flags(tmp_path):
    f = tmp_path / "exp.cfg"
    f.write_text("# comment\nreps = 100\nseed=3\ndist = uniform:0.1:1\nn = 8, 16\n")
    cfg = parse_config(["midpoint", "--reps", "500"], f)
    assert cfg.replicates == 500
    assert cfg.master_seed == 3 and cfg.dist == "uniform:0.1:1" and cfg.n_values == (8, 16)
    cfg2 = parse_config(["midpoint", "--config", str(f)])
    assert cfg2.replicates == 100


def test_bad_file(tmp_path):
    f = tmp_path / "exp.cfg"
    f.write_text("reps 100\n")
    with pytest.raises(ConfigError):
        parse_config(["midpoint"], f)
    f.write_text("colour = blue\n")
    with pytest.raises(ConfigError, match="colour"):
        parse_config(["midpoint"], f)
    with pytest.raises(ConfigError):
        parse_config(["midpoint"], tmp_path / "missing.cfg")


def test_param_hash_ignores_runtime_fields():
    a = ExperimentConfig("midpoint", out="a.csv", workers=1)
    b = ExperimentConfig("midpoint", out="b.csv", workers=4, max_seconds=10.0)
    assert a.param_hash() == b.param_hash()
    assert a.param_hash() != ExperimentConfig("midpoint", master_seed=1).param_hash()


def test_run_writes_csv_and_sidecar(tmp_path):
    out = tmp_path / "gap.csv"
    code = main(["run", "three-point-gap", "--n", "0,8", "--reps", "10", "--out", str(out)])
    assert code == EXIT_OK
    header = out.read_text().splitlines()[0]
    assert header == ",".join(CSV_COLUMNS)
    rows = read_rows(out)
    assert {(r.n, r.statistic) for r in rows} == {
        (0, "three_point_gap"), (0, "three_point_gap_min"), (8, "three_point_gap"), (8, "three_point_gap_min")}
    side = json.loads(out.with_suffix(".json").read_text())
    assert side["complete"] and side["exit_code"] == 0
    assert side["config"]["replicates"] == 10
    assert all(r.param_json_ref == side["param_json_ref"] for r in rows)


def test_goal_chain_end_to_end(tmp_path):
    out = tmp_path / "chain.csv"
    code = main(["run", "goal-chain", "--n", "32", "--reps", "50", "--dist", "uniform:0.1:1", "--out", str(out)])
    assert code == EXIT_OK
    stats = {r.statistic for r in read_rows(out)}
    assert {"event_frequency", "conditional_gap", "chain_margin_min"} <= stats


def test_claim2_forced_hit_exits_ok(tmp_path):
    out = tmp_path / "c2.csv"
    code = main(["run", "claim2", "--fixture", "forced-hit", "--n", "32", "--m", "4", "--reps", "3",
                 "--out", str(out)])
    assert code == EXIT_OK
    rows = {r.statistic: r for r in read_rows(out)}
    assert rows["claim2_applicable"].value == 0.0
    assert rows["claim2_pass"].value == 1.0


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_unwritable_directory(tmp_path):
    locked = tmp_path / "locked"
    locked.mkdir()
    locked.chmod(0o500)
    assert main(["run", "tau-norm", "--n", "10", "--out", str(locked / "x.csv")]) == EXIT_IO


def test_unwritable_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["run", "tau-norm", "--n", "10", "--out", str(blocker / "sub" / "x.csv")]) == EXIT_IO


def test_config_error_exit_code(tmp_path):
    assert main(["run", "claim1", "--kappa", "0.6", "--out", str(tmp_path / "x.csv")]) == EXIT_CONFIG
    assert main(["run", "claim1", "--n", "8", "--m", "8", "--reps", "1", "--out", str(tmp_path / "x.csv")]) \
        == EXIT_CONFIG


def test_max_seconds_marks_partial(tmp_path):
    out = tmp_path / "t.csv"
    code = main(["run", "midpoint", "--n", "16,32", "--reps", "100000", "--max-seconds", "0.5", "--out", str(out)])
    assert code == EXIT_OK
    side = json.loads(out.with_suffix(".json").read_text())
    assert side["complete"] is False


def test_tau_norm_and_mw(tmp_path):
    out = tmp_path / "tau.csv"
    assert main(["run", "tau-norm", "--n", "10,100", "--out", str(out)]) == EXIT_OK
    vals = [r.value for r in read_rows(out)]
    assert vals[0] < vals[1]
    out = tmp_path / "mw.csv"
    assert main(["run", "mw-certificate", "--reps", "20", "--dist", "uniform:0:1", "--out", str(out)]) == EXIT_OK
    rows = {r.statistic: r for r in read_rows(out)}
    assert rows["mw_pass"].value == 1.0 and rows["mw_min_slack"].value >= -1e-8


def _rows(ns, stat="three_point_gap"):
    return [ResultRow("x", "ref", n, stat, float(n) / 10, 0.1, 5, 0, 1) for n in ns]


def test_plot_abscissae():
    rows = _rows([100, 10, 1000])
    logs = emit_plot_data(rows, "logn", "three_point_gap")
    assert [x for x, _ in logs] == sorted(x for x, _ in logs)
    pw = emit_plot_data(rows, "logn-pow", "three_point_gap", kappa=0.1)
    assert pw[1][0] == pytest.approx(math.log(100) ** 0.4)
    assert pw[1][0] == pytest.approx(1.842037, abs=1e-6)
    assert abs(pw[1][0] - 1.841) < 2e-3
    assert emit_plot_data(rows, "n", "three_point_gap")[0] == (10.0, 1.0)


def test_plot_errors():
    with pytest.raises(ValueError):
        emit_plot_data([], "n", "three_point_gap")
    with pytest.raises(ValueError):
        emit_plot_data(_rows([10]), "n", "missing")


def test_plot_command(tmp_path):
    out = tmp_path / "gap.csv"
    main(["run", "three-point-gap", "--n", "8,16", "--reps", "5", "--out", str(out)])
    dat = tmp_path / "plot.csv"
    assert main(["plot", "--in", str(out), "--x", "logn-pow", "--y", "three_point_gap", "--out", str(dat)]) == 0
    lines = dat.read_text().splitlines()
    assert lines[0] == "log(n)^0.4,three_point_gap" and len(lines) == 3
    assert main(["plot", "--in", str(out), "--y", "nope", "--out", str(dat)]) == EXIT_CONFIG


def test_run_experiment_returns_code(tmp_path):
    cfg = parse_config(["tau-norm", "--n", "5", "--out", str(tmp_path / "t.csv")])
    assert run_experiment(cfg) == EXIT_OK
