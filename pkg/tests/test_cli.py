import json
import os

import numpy as np
import pytest

from mcflow.cli import main
from mcflow.scenarios import (ConfigError, ScenarioConfig,
                              read_diagnostics_csv, read_snapshot_csv,
                              run_scenario_config)


def write_config(tmp_path, name, cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def smoke_flow_config(out_dir, t_end=0.5):
    return {
        "scenario": "flow_1d",
        "metric": {"family": "euclidean", "n": 1},
        "domain": {"lo": -10.0, "hi": 10.0},
        "initial_data": {"family": "gaussian", "height": 0.4, "sigma": 1.0},
        "solver": {"h": 0.1, "t_end": t_end, "snapshot_every": 0.25,
                   "record_every": 0.05},
        "output_dir": out_dir,
    }


# ---------------------------------------------------------------------------
# config validation
# ---------------------------------------------------------------------------

def test_missing_field_names_path(tmp_path, capsys):
    cfg = smoke_flow_config(str(tmp_path / "out"))
    del cfg["solver"]["h"]
    path = write_config(tmp_path, "bad.json", cfg)
    assert main(["simulate", path]) == 2
    assert "solver.h" in capsys.readouterr().err


def test_bad_json_is_config_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["simulate", str(path)]) == 2
    assert "config" in capsys.readouterr().err


def test_unknown_scenario_rejected(tmp_path):
    cfg = smoke_flow_config(str(tmp_path / "out"))
    cfg["scenario"] = "warp_drive"
    with pytest.raises(ConfigError):
        ScenarioConfig.from_dict(cfg)


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def test_simulate_zero_run_exit_zero(tmp_path, capsys):
    out = str(tmp_path / "out")
    cfg = smoke_flow_config(out)
    cfg["initial_data"] = {"family": "zero"}
    path = write_config(tmp_path, "zero.json", cfg)
    assert main(["simulate", path]) == 0
    assert os.path.exists(os.path.join(out, "diagnostics.csv"))
    assert os.path.exists(os.path.join(out, "summary.json"))
    recs = read_diagnostics_csv(os.path.join(out, "diagnostics.csv"))
    assert all(r.sup_u == 0.0 for r in recs)
    snaps = sorted(os.listdir(os.path.join(out, "snapshots")))
    assert snaps[0] == "t0.000000.csv"
    coord, data = read_snapshot_csv(os.path.join(out, "snapshots", snaps[0]))
    assert coord == "x"
    assert np.all(data[:, 1] == 0.0)


def test_simulate_outputs_are_deterministic(tmp_path):
    out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
    p1 = write_config(tmp_path, "c1.json", smoke_flow_config(out1))
    p2 = write_config(tmp_path, "c2.json", smoke_flow_config(out2))
    assert main(["simulate", p1]) == 0
    assert main(["simulate", p2]) == 0
    for name in ("diagnostics.csv", os.path.join("snapshots", "t0.250000.csv")):
        b1 = open(os.path.join(out1, name), "rb").read()
        b2 = open(os.path.join(out2, name), "rb").read()
        assert b1 == b2


def test_simulate_output_dir_flag_overrides(tmp_path):
    out = str(tmp_path / "flagged")
    path = write_config(tmp_path, "c.json",
                        smoke_flow_config(str(tmp_path / "ignored")))
    assert main(["simulate", path, "--output-dir", out]) == 0
    assert os.path.exists(os.path.join(out, "summary.json"))


def test_simulate_diagnostics_roundtrip(tmp_path):
    out = str(tmp_path / "out")
    path = write_config(tmp_path, "c.json", smoke_flow_config(out))
    assert main(["simulate", path]) == 0
    recs = read_diagnostics_csv(os.path.join(out, "diagnostics.csv"))
    summary = json.load(open(os.path.join(out, "summary.json")))
    assert summary["pass"] is True
    assert summary["records"] == len(recs)
    assert recs[0].sup_phi is None and recs[0].barrier_margin is None


def test_tabulated_initial_data(tmp_path):
    table = tmp_path / "profile.csv"
    xs = np.linspace(-10, 10, 201)
    lines = ["x,u"] + [f"{x},{0.3 * np.exp(-x * x)}" for x in xs]
    table.write_text("\n".join(lines))
    cfg = smoke_flow_config(str(tmp_path / "out"))
    cfg["initial_data"] = {"family": "tabulated", "path": str(table)}
    path = write_config(tmp_path, "tab.json", cfg)
    assert main(["simulate", path]) == 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_passes(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "maximal_surface_residual" in out
    assert "FAIL" not in out


def test_verify_inject_fault_fails(capsys):
    assert main(["verify", "--inject-fault", "graph_gradient_identity"]) == 1
    captured = capsys.readouterr()
    assert "graph_gradient_identity" in captured.err


def test_verify_empty_sweep_exit_two(capsys):
    assert main(["verify", "--dimensions", ""]) == 2
    assert "nothing to verify" in capsys.readouterr().err


def test_verify_bad_fault_name(capsys):
    assert main(["verify", "--inject-fault", "not_a_check"]) == 2


def test_verify_seed_changes_samples_not_outcome():
    assert main(["verify", "--seed", "7"]) == 0


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def dirichlet_sweep_config(out_dir, values):
    return {
        "scenario": "dirichlet",
        "sweep": {"parameter": "R", "values": values},
        "metric": {"family": "euclidean", "n": 3},
        "domain": {"lo": 0.0},
        "initial_data": {"family": "bump", "height": 0.3, "plateau": 0.25,
                         "support": 1.0},
        "solver": {"h": 0.1, "t_end": 2.0, "snapshot_every": 0.5,
                   "record_every": 0.5},
        "output_dir": out_dir,
    }


def test_sweep_single_point_exit_two(tmp_path, capsys):
    cfg = dirichlet_sweep_config(str(tmp_path / "out"), [4])
    path = write_config(tmp_path, "c.json", cfg)
    assert main(["sweep", path]) == 2
    assert ">= 2" in capsys.readouterr().err


def test_sweep_dirichlet_small(tmp_path):
    out = str(tmp_path / "out")
    cfg = dirichlet_sweep_config(out, [2, 3])
    path = write_config(tmp_path, "c.json", cfg)
    assert main(["sweep", path]) == 0
    from mcflow.scenarios import read_sweep_csv
    rows = read_sweep_csv(os.path.join(out, "sweep.csv"))
    assert [r["R"] for r in rows] == [2.0, 3.0]
    assert all(r["pass"] for r in rows)
    summary = json.load(open(os.path.join(out, "sweep_summary.json")))
    assert summary["fits"]["bound_exponent"] is not None
    assert os.path.exists(os.path.join(out, "run_R2", "summary.json"))


def test_sweep_dirichlet_parallel_workers(tmp_path):
    out = str(tmp_path / "out")
    cfg = dirichlet_sweep_config(out, [2, 3])
    path = write_config(tmp_path, "c.json", cfg)
    assert main(["sweep", path, "--workers", "2"]) == 0
    from mcflow.scenarios import read_sweep_csv
    rows = read_sweep_csv(os.path.join(out, "sweep.csv"))
    assert [r["R"] for r in rows] == [2.0, 3.0]


def test_simulate_numeric_failure_exit_three(tmp_path, capsys):
    # data with nearly null slope trip the strict spacelikeness guard on the
    # first step; the run halts and the CLI reports a numeric failure
    xs = np.arange(-10.0, 10.0 + 1e-9, 0.1)
    slope = 1.0 - 1e-13
    peak = 2.0
    vals = np.maximum(peak - slope * np.abs(xs), 0.0)
    table = tmp_path / "steep.csv"
    table.write_text("x,u\n" + "\n".join(f"{x},{u}" for x, u in zip(xs, vals)))
    cfg = smoke_flow_config(str(tmp_path / "out"))
    cfg["initial_data"] = {"family": "tabulated", "path": str(table)}
    path = write_config(tmp_path, "steep.json", cfg)
    assert main(["simulate", path]) == 3
    assert "spacelikeness" in capsys.readouterr().err
    summary = json.load(open(os.path.join(str(tmp_path / "out"),
                                          "summary.json")))
    assert summary["termination"] == "spacelike_violation"


def test_no_lift_off_artifacts_with_monitor_columns(tmp_path):
    out = str(tmp_path / "out")
    cfg = {
        "scenario": "no_lift_off",
        "metric": {"family": "conformal_power", "n": 3, "a": 0.5, "tau": 1.0},
        "domain": {"lo": 0.5, "hi": 20.0},
        "initial_data": {"family": "radial_bump", "height": 0.3,
                         "rise": [1.0, 2.0], "fall": [3.0, 5.0]},
        "solver": {"h": 0.1, "t_end": 1.0, "snapshot_every": 0.5,
                   "record_every": 0.25},
        "barrier": {"eps": 0.05, "r1_min": 1.0},
        "output_dir": out,
    }
    path = write_config(tmp_path, "nlo.json", cfg)
    assert main(["simulate", path]) == 0
    recs = read_diagnostics_csv(os.path.join(out, "diagnostics.csv"))
    assert all(r.sup_phi is not None and r.barrier_margin is not None
               for r in recs)
    assert all(r.barrier_margin > 0 for r in recs)
    summary = json.load(open(os.path.join(out, "summary.json")))
    assert summary["ricci_constant"] > 0


def test_sweep_nested_balls(tmp_path, capsys):
    out = str(tmp_path / "out")
    cfg = {
        "scenario": "nested_balls",
        "sweep": {"parameter": "R", "values": [2, 3]},
        "metric": {"family": "euclidean", "n": 3},
        "domain": {"lo": 0.0},
        "initial_data": {"family": "bump", "height": 0.3, "plateau": 0.25,
                         "support": 1.0},
        "solver": {"h": 0.1, "t_end": 1.0, "snapshot_every": 0.25},
        "output_dir": out,
    }
    path = write_config(tmp_path, "c.json", cfg)
    assert main(["sweep", path]) == 0
    assert "max difference" in capsys.readouterr().out
    summary = json.load(open(os.path.join(out, "sweep_summary.json")))
    assert len(summary["rows"]) == 1


def test_sweep_unknown_parameter(tmp_path, capsys):
    cfg = dirichlet_sweep_config(str(tmp_path / "out"), [2, 3])
    cfg["sweep"]["parameter"] = "h"
    path = write_config(tmp_path, "c.json", cfg)
    assert main(["sweep", path]) == 2


# ---------------------------------------------------------------------------
# scenario runners against shipped configs (downscaled)
# ---------------------------------------------------------------------------

def test_shipped_configs_parse():
    here = os.path.join(os.path.dirname(__file__), "..", "configs")
    for name in os.listdir(here):
        raw = json.load(open(os.path.join(here, name)))
        ScenarioConfig.from_dict(raw)


def test_barrier_verify_scenario_runs():
    raw = {
        "scenario": "barrier_verify",
        "metric": {"family": "conformal_power", "n": 3, "a": 0.5, "tau": 1.0},
        "barrier": {"r1_min": 5.0, "h": 1.0, "eps": 0.0},
        "sample_radii": 64,
    }
    result = run_scenario_config(ScenarioConfig.from_dict(raw))
    assert result.all_passed
    assert len(result.summary["rows"]) == 64


def test_translating_verify_scenario_runs():
    raw = {
        "scenario": "translating_verify",
        "metric": {"family": "euclidean", "n": 3},
        "translating": {"t0": -4.0, "mu": 0.5, "alpha": 0.1},
    }
    result = run_scenario_config(ScenarioConfig.from_dict(raw))
    assert result.all_passed
    cert = result.summary["certificate"]
    assert cert["rho"] == pytest.approx(12.0)
