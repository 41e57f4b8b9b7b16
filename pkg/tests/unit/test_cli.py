"""
test_cli.py
Pipeline outputs, the CSV/JSON writers and the exit-code contract of the CLI.
"""
import json
from pathlib import Path

import numpy as np
import pytest
from loguru import logger

from qmexchange.analysis.exporter import emit_plot_data, format_summary, read_plot_data
from qmexchange.cli import main
from qmexchange.data.trajectory import Trajectory
from qmexchange.errors import OutputError
from qmexchange.pipeline import run_scenario
from qmexchange.utils.config_loader import parse_config

SAMPLES = Path(__file__).resolve().parents[2] / "scenarios"
SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)


@pytest.fixture(autouse=True)
def _reset_logger():
    yield
    logger.remove()


def _cli(tmp_path: Path, *args: str) -> int:
    return main(["--log-dir", str(tmp_path / "logs"), *args])


def _sample(name: str, write_config, **changes) -> Path:
    doc = json.loads((SAMPLES / name).read_text(encoding="utf-8"))
    doc.update(changes)
    return write_config(doc, name=name)


# ---------------------------------------------------------------------------
# Writers
# ---------------------------------------------------------------------------

def test_empty_trajectory_gives_header_only(tmp_path):
    traj = Trajectory.from_states(np.empty(0), np.empty((0, 2, 2)))
    path = emit_plot_data(traj, tmp_path / "empty.csv")
    assert path.read_text(encoding="utf-8") == "t,purity,S_lin,S_vn\n"


def test_csv_round_trip_keeps_twelve_digits(tmp_path, rng):
    from qmexchange.utils.sampling import random_density_matrix

    states = np.stack([random_density_matrix(2, rng) for _ in range(5)])
    traj = Trajectory.from_states(np.linspace(0.0, 1.0, 5), states, extras={"x": np.arange(5.0) / 3})
    frame = read_plot_data(emit_plot_data(traj, tmp_path / "t.csv"))
    assert list(frame.columns) == ["t", "purity", "S_lin", "S_vn", "x"]
    assert np.allclose(frame["purity"], traj.purity, rtol=1e-11, atol=0)
    assert np.allclose(frame["x"], np.arange(5.0) / 3, rtol=1e-11, atol=0)


def test_writer_failure_is_an_output_error(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    traj = Trajectory.from_states(np.zeros(1), (np.eye(2) / 2)[np.newaxis])
    with pytest.raises(OutputError):
        emit_plot_data(traj, blocker / "t.csv")


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

def test_optimal_run_writes_report(write_config, tmp_path):
    config = parse_config(_sample("optimal.json", write_config))
    report = run_scenario(config, tmp_path / "out")

    assert report.quantities["delta_i"] == pytest.approx(1 / 6)
    assert report.quantities["eta"] == pytest.approx(0.6)
    doc = json.loads((tmp_path / "out" / "report.json").read_text(encoding="utf-8"))
    assert doc["status"] == "ok"
    assert doc["exit_code"] == 0
    assert doc["details"]["exchange"]["eta"] == pytest.approx(0.6)
    header = (tmp_path / "out" / "trajectory.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header == "t,purity,S_lin,S_vn,E_R,E_S,S_R,S_S,dI"
    assert "delta_i" in format_summary(report)


def test_runs_are_byte_identical(write_config, tmp_path):
    config = parse_config(_sample("optimal.json", write_config, record_every=100))
    run_scenario(config, tmp_path / "a")
    run_scenario(config, tmp_path / "b")
    for name in ("trajectory.csv", "report.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_isoenergetic_without_coherence_omits_eta(write_config, tmp_path):
    doc = {
        "scenario": "isoenergetic",
        "t_final": 5.0,
        "record_every": 100,
        "matrices": {"h_r": SIGMA_Z, "u": np.eye(2), "rho_s0": np.diag([1.0, 0.0])},
    }
    report = run_scenario(parse_config(write_config(doc)), tmp_path / "out")
    assert report.quantities["eta"] is None
    written = json.loads((tmp_path / "out" / "report.json").read_text(encoding="utf-8"))
    assert written["quantities"]["eta"] is None
    assert "eta" not in written["details"]["exchange"]


@pytest.mark.parametrize(
    "name, changes",
    [
        ("attractor.json", {"record_every": 100}),
        ("swap_exchange.json", {"record_every": 100}),
        ("isoenergetic.json", {"record_every": 100}),
        ("additive.json", {"t_final": 2, "record_every": 100}),
        ("multiplicative.json", {"t_final": 2, "record_every": 100}),
        ("neutron_spin.json", {"t_final": 5, "record_every": 100}),
    ],
)
def test_sample_configs_run(write_config, tmp_path, name, changes):
    report = run_scenario(parse_config(_sample(name, write_config, **changes)), tmp_path / "out")
    assert report.status == "ok"
    assert (tmp_path / "out" / "trajectory.csv").exists()


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------

def test_cli_run_prints_summary(write_config, tmp_path, capsys):
    path = _sample("optimal.json", write_config, record_every=100)
    code = _cli(tmp_path, "run", str(path), "--out-dir", str(tmp_path / "out"), "--t-final", "10")
    assert code == 0
    out = capsys.readouterr().out
    assert "scenario: optimal" in out
    assert "delta_i" in out
    report = json.loads((tmp_path / "out" / "report.json").read_text(encoding="utf-8"))
    assert report["config"]["t_final"] == 10.0


def test_cli_validate_and_list(write_config, tmp_path, capsys):
    path = _sample("neutron_spin.json", write_config)
    assert _cli(tmp_path, "validate", str(path)) == 0
    assert _cli(tmp_path, "list-scenarios") == 0
    out = capsys.readouterr().out
    assert "valid 'neutron-spin'" in out
    for name in ("attractor", "swap-exchange", "optimal", "isoenergetic", "additive",
                 "multiplicative", "neutron-spin"):
        assert name in out


def test_exit_code_parse_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    assert _cli(tmp_path, "run", str(path)) == 1


def test_exit_code_validation_error(write_config, tmp_path):
    doc = {"scenario": "optimal", "matrices": {"h_r": SIGMA_Z, "u": np.eye(2), "rho_s0": np.diag([1.5, -0.5])}}
    assert _cli(tmp_path, "validate", str(write_config(doc))) == 2


def test_exit_code_for_infinite_horizon(write_config, tmp_path, capsys):
    path = write_config({"scenario": "attractor", "t_final": float("inf"), "dt": 0.1})
    assert _cli(tmp_path, "run", str(path), "--out-dir", str(tmp_path / "out")) == 2
    assert capsys.readouterr().out == ""
    assert not (tmp_path / "out").exists()


def test_exit_code_numerical_guard(write_config, tmp_path):
    path = write_config({"scenario": "attractor", "t_final": 20, "dt": 5})
    assert _cli(tmp_path, "run", str(path), "--out-dir", str(tmp_path / "out")) == 3


def test_exit_code_infeasible_regime(write_config, tmp_path, capsys):
    doc = {
        "scenario": "isoenergetic",
        "n": 3,
        "matrices": {
            "h_r": np.diag([1.0, -1.0, 0.0]),
            "u": np.eye(3),
            "rho_s0": np.diag([1.0, 0.0, 0.0]),
        },
    }
    assert _cli(tmp_path, "run", str(write_config(doc)), "--out-dir", str(tmp_path / "out")) == 4
    assert capsys.readouterr().out == ""


def test_exit_code_output_error(write_config, tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    path = write_config({"scenario": "attractor", "t_final": 1, "dt": 0.01})
    assert _cli(tmp_path, "run", str(path), "--out-dir", str(blocker)) == 5
