import json
import os

import numpy as np
import pytest

from dp3.artifacts import read_snapshot, read_table
from dp3.cli import main
from dp3.config import build_grid, load_config, validate
from dp3.errors import ConfigError

CONFIGS = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def cfg_path(name):
    return os.path.join(CONFIGS, f"{name}.json")


def load(name):
    with open(cfg_path(name)) as fh:
        return json.load(fh)


def write_cfg(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def short(name, t_end):
    cfg = load(name)
    cfg["time"]["t_end"] = t_end
    return cfg


def test_zero_simulate(tmp_path):
    out = tmp_path / "run"
    assert main(["simulate", cfg_path("zero"), "--out", str(out)]) == 0
    for name in ("manifest.json", "series.csv", "blowup_report.json", "snapshots/index.json"):
        assert (out / name).exists()
    cols = read_table(str(out / "series.csv"))
    for key, col in cols.items():
        if key not in ("t", "criterion_integrand", "criterion_integral"):
            assert np.all(col == 0), key
    assert np.all(cols["criterion_integrand"] == 1.0)
    report = json.loads((out / "blowup_report.json").read_text())
    assert report["detected"] is False
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["domain"]["n_points"] == 64
    assert {"version", "backend", "grid", "scheme", "created"} <= set(manifest)


def test_snapshots_round_trip(tmp_path):
    out = tmp_path / "run"
    assert main(["simulate", cfg_path("dp_reduction"), "--out", str(out)]) == 0
    index = json.loads((out / "snapshots" / "index.json").read_text())
    grid = build_grid(load_config(cfg_path("dp_reduction")))
    first = read_snapshot(str(out / "snapshots" / index[0]["file"]), grid)
    u0 = 0.5 * np.exp(-grid.x**2)
    assert np.array_equal(first.u, u0) and np.all(first.v == 1.0) and np.all(first.eta == -1.0)
    series = read_table(str(out / "series.csv"))
    assert np.max(series["res_dp"]) <= 1e-10
    assert len(series["t"]) == len(index)


@pytest.mark.parametrize("patch", [
    lambda c: c["time"].update(dt_max=-0.01),
    lambda c: c["domain"].update(n_points=100),
    lambda c: c["init"].update(kind="square"),
    lambda c: c.update(extra=1),
    lambda c: c["time"].update(dt_min=1.0),
    lambda c: c["init"]["params"]["u"].update(width=-1.0),
])
def test_config_errors_exit_2(tmp_path, patch):
    cfg = load("dp_reduction")
    patch(cfg)
    assert main(["simulate", write_cfg(tmp_path, cfg), "--out", str(tmp_path / "o")]) == 2


def test_unreadable_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["simulate", str(bad), "--out", str(tmp_path)]) == 2
    assert main(["certify", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == 2


def test_validate_applies_defaults():
    cfg = validate(load("zero"))
    assert cfg["model"]["form"] == "convolution"
    assert cfg["thresholds"]["classify"] == {"o_drop": 0.5, "O_factor": 2.0}
    with pytest.raises(ConfigError):
        validate({"domain": {"L": 1.0}})


def test_certify_exit_codes(tmp_path):
    assert main(["certify", cfg_path("zero"), "--out", str(tmp_path / "z")]) == 4
    assert main(["certify", cfg_path("blowup_candidate"), "--out", str(tmp_path / "b")]) == 0
    cert = json.loads((tmp_path / "b" / "certificate.json").read_text())
    assert cert["verdict"] is True and cert["T0"] > 0 and cert["f0"] < cert["rhs14"]
    assert main(["certify", cfg_path("dp_reduction"), "--out", str(tmp_path / "d")]) == 0
    cert = json.loads((tmp_path / "d" / "certificate.json").read_text())
    assert cert["verdict"] is False and cert["cond14_ok"] is False


def test_check_reductions_novikov(tmp_path):
    assert main(["check-reductions", cfg_path("novikov"), "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "reductions.json").read_text())
    assert rep["max_residual"]["novikov"] <= 1e-8
    assert rep["max_residual"]["swap"] <= 1e-10


def test_mollify_and_persist_guards(tmp_path):
    cfg = write_cfg(tmp_path, short("gaussian", 0.05))
    assert main(["mollify", cfg, "--eps", "0.1", "--out", str(tmp_path / "m")]) == 2
    assert main(["mollify", cfg, "--eps", "0.1", "0.2", "0.05", "--out", str(tmp_path / "m")]) == 2
    assert main(["persist", cfg, "--profile", "--out", str(tmp_path / "p")]) == 2
    bad = short("gaussian", 0.05)
    bad["persist"]["N_ladder"] = [4.0, 30.0]
    assert main(["persist", write_cfg(tmp_path, bad, "bad.json"), "--out", str(tmp_path / "p")]) == 2


def test_mollify_report(tmp_path):
    cfg = write_cfg(tmp_path, short("gaussian", 0.1))
    assert main(["mollify", cfg, "--out", str(tmp_path), "--workers", "2"]) == 0
    rep = json.loads((tmp_path / "mollify_report.json").read_text())
    assert rep["ladder"]["epsilons"] == [0.4, 0.2, 0.1, 0.05]
    assert len(rep["ladder"]["distances"]) == 3 and "max_ratio" in rep["size_estimate"]


def test_persist_report(tmp_path):
    cfg = write_cfg(tmp_path, short("gaussian", 0.1))
    assert main(["persist", cfg, "--out", str(tmp_path), "--profile", "algebraic:1:15"]) == 0
    rep = json.loads((tmp_path / "persistence_report.json").read_text())
    prof = rep["profiles"]["algebraic_b1_N15"]
    assert prof["classification"] in ("little_o", "big_O", "unbounded")
    assert len(prof["sup"]) == len(rep["t"]) and prof["kappa"] >= 0
    assert prof["ladder"]["N"] == [4.0, 8.0, 16.0] and "flux_audit" in prof


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_numeric_failure_exit_3(tmp_path):
    cfg = load("dp_reduction")
    cfg["init"]["params"]["eta"] = {"amp": 1e200}
    assert main(["simulate", write_cfg(tmp_path, cfg), "--out", str(tmp_path / "o")]) == 3
    report = json.loads((tmp_path / "o" / "blowup_report.json").read_text())
    assert report["reason"] == "non_finite"


def test_trace_output(tmp_path):
    cfg = short("gaussian", 0.1)
    assert main(["simulate", write_cfg(tmp_path, cfg), "--out", str(tmp_path)]) == 0
    traces = sorted(p.name for p in tmp_path.glob("trace_*.csv"))
    assert traces == ["trace_00.csv", "trace_01.csv", "trace_02.csv"]
    cols = read_table(str(tmp_path / "trace_01.csv"))
    assert list(cols) == ["t", "q", "f", "v_at_q", "margin"] and np.all(np.isfinite(cols["margin"]))


@pytest.mark.parametrize("cmd,name,files", [
    ("simulate", "blowup_candidate", ["series.csv"]),
    ("certify", "blowup_candidate", ["certificate.json"]),
    ("simulate", "gaussian", ["series.csv"]),
])
def test_byte_reproducible(tmp_path, cmd, name, files):
    cfg = write_cfg(tmp_path, short(name, 0.1) if name == "gaussian" else load(name))
    assert main([cmd, cfg, "--out", str(tmp_path / "a")]) == 0
    assert main([cmd, cfg, "--out", str(tmp_path / "b")]) == 0
    for f in files:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
