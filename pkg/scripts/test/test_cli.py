"""
Tests for the spa command line: outputs, exit codes and configuration layering
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

import json

import pytest

from interface.cli import build_run_config, main, read_series_csv, reset_settings
from interface.cli.config import Settings

SUPERCRITICAL = ["--a", "0.5", "--alpha", "0.3", "--d", "2"]


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch, tmp_path):
    """No SPA_* variables or .env file leak into a test."""
    for name in ("SPA_LOG_LEVEL", "SPA_JOBS", "SPA_TORUS_DELTA", "SPA_OUTPUT_DIR", "SPA_PROGRESS"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    reset_settings()
    yield
    reset_settings()


def test_solve_prints_fixed_point(capsys):
    assert main(["solve", *SUPERCRITICAL, "--m-dist", "1.0"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["K"] == 1
    assert result["x_star"][0] == pytest.approx(1.111111, abs=1e-6)
    assert result["regime"] == "Supercritical"


def test_solve_two_giants(capsys):
    assert main(["solve", *SUPERCRITICAL, "--m-dist", "0,1"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["K"] == 2 and result["r_m"] == 2


def test_classify_critical(capsys):
    assert main(["classify", "--a", "0.4", "--alpha", "0.3", "--d", "2"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["regime"] == "Critical"
    assert result["critical_constant"] == pytest.approx(5.5556, abs=1e-4)
    assert result["x_star"] == []


def test_simulate_zero_steps(tmp_path):
    out = tmp_path / "run"
    assert main(["simulate", *SUPERCRITICAL, "--steps", "0", "--out", str(out)]) == 0
    lines = (out / "series.csv").read_text().splitlines()
    assert lines == ["n,E,M_1", "0,0,0"]
    summary = json.loads((out / "summary.json").read_text())
    assert summary["final"] == {"n": 0, "E": 0, "ranks": [0], "ratios": []}
    assert "wall_clock_seconds" not in summary


def test_simulate_is_byte_identical(tmp_path):
    """Same parameters and seed give identical files."""
    args = [*SUPERCRITICAL, "--steps", "400", "--seed", "11", "--track-k", "2"]
    for name in ("first", "second"):
        assert main(["simulate", *args, "--out", str(tmp_path / name)]) == 0
    for filename in ("series.csv", "summary.json"):
        assert (tmp_path / "first" / filename).read_bytes() == (tmp_path / "second" / filename).read_bytes()
    series = read_series_csv(tmp_path / "first" / "series.csv")
    assert series.last.n == 400 and series.track_k == 2


def test_simulate_records_timing_and_edge_log(tmp_path):
    out = tmp_path / "run"
    edges = tmp_path / "edges.csv"
    code = main([
        "simulate", *SUPERCRITICAL, "--steps", "50", "--out", str(out),
        "--record-timing", "--edge-log", str(edges),
    ])
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["wall_clock_seconds"] >= 0.0
    assert len(edges.read_text().splitlines()) == summary["final"]["E"] + 1


@pytest.mark.parametrize("argv", [
    ["solve", "--a", "0.7", "--alpha", "0.3"],
    ["solve", "--alpha", "0.3"],
    ["solve", *SUPERCRITICAL, "--m-dist", "0.5,0.4"],
    ["solve", *SUPERCRITICAL, "--m-dist", "one"],
    ["simulate", *SUPERCRITICAL, "--log-level", "LOUD"],
    ["solve", *SUPERCRITICAL, "--no-such-flag"],
    ["verify", "--profile", "hypercritical"],
])
def test_invalid_usage_exits_2(argv):
    assert main(argv) == 2


def test_config_file_precedence(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"a": 0.45, "alpha": 0.3, "d": 2, "steps": 50, "torus-delta": 0.02}))
    settings = Settings(torus_delta=0.05, jobs=3)

    merged = build_run_config({"config": str(config), "steps": 20}, settings=settings)
    assert merged.params.steps == 20, "flags beat the config file"
    assert merged.params.torus_delta == 0.02, "the config file beats the environment"
    assert merged.params.a == 0.45
    assert merged.jobs == 3, "the environment beats the defaults"
    assert merged.params.n0 == 8 and merged.params.b == 1.0


def test_environment_settings_are_read(monkeypatch, tmp_path):
    monkeypatch.setenv("SPA_OUTPUT_DIR", str(tmp_path / "from-env"))
    monkeypatch.setenv("SPA_TORUS_DELTA", "0.03")
    reset_settings()
    assert main(["simulate", *SUPERCRITICAL, "--steps", "5"]) == 0
    summary = json.loads((tmp_path / "from-env" / "summary.json").read_text())
    assert summary["params"]["torus_delta"] == 0.03


def test_unknown_config_key_is_rejected(tmp_path):
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"a": 0.5, "alpha": 0.3, "gamma": 1}))
    assert main(["solve", "--config", str(config)]) == 2


def test_missing_config_file_is_io_error(tmp_path):
    assert main(["solve", "--config", str(tmp_path / "absent.json")]) == 3


def test_replicas_writes_one_csv_per_replica(tmp_path):
    out = tmp_path / "ensemble"
    assert main(["replicas", *SUPERCRITICAL, "--steps", "100", "--replicas", "2", "--out", str(out)]) == 0
    assert (out / "replica_000.csv").exists() and (out / "replica_001.csv").exists()
    report = json.loads((out / "ensemble.json").read_text())
    assert report["ensemble"]["replica_count"] == 2
    assert [r["replica_id"] for r in report["replicas"]] == [0, 1]
    assert "series" not in report["replicas"][0]


@pytest.mark.parametrize("kind", ["ratio", "loglog"])
def test_plot_writes_svg(tmp_path, kind):
    run_dir = tmp_path / "run"
    assert main(["simulate", *SUPERCRITICAL, "--steps", "300", "--track-k", "2", "--out", str(run_dir)]) == 0
    figure = tmp_path / f"{kind}.svg"
    code = main(["plot", "--input", str(run_dir / "series.csv"), "--kind", kind, "--out", str(figure), *SUPERCRITICAL])
    assert code == 0
    assert figure.read_text().lstrip().startswith("<?xml")

    again = tmp_path / "again"
    assert main(["plot", "--input", str(run_dir / "series.csv"), "--kind", kind, "--out", str(again)]) == 0
    assert (again / "plot.svg").exists()


def test_verify_smoke_scaled_down(tmp_path, capsys):
    out = tmp_path / "verify"
    code = main(["verify", "--profile", "smoke", "--steps", "1500", "--replicas", "1", "--out", str(out)])
    report = json.loads((out / "verify.json").read_text())
    assert code == (0 if report["passed"] else 1)
    assert report["steps"] == 1500 and report["replicas"] == 1
    assert "profile smoke" in capsys.readouterr().out


def test_run_config_json_round_trip(tmp_path):
    config = build_run_config(
        {"a": 0.45, "alpha": 0.35, "d": 2, "m_dist": "0.2,0.8", "steps": 10, "out": str(tmp_path)},
        settings=Settings(),
    )
    restored = type(config).model_validate_json(config.model_dump_json())
    assert restored == config
    assert restored.params.m_dist == [0.2, 0.8] and restored.params.M == 2
