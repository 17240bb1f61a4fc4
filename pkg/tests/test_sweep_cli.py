"""Sweep artifact and command line contract checks.

The CSV header, the SVG series ids and the exit codes are read by
downstream tooling, so they are asserted verbatim here.  Heavy solves
reuse the session sweep fixture; the command line paths run on a
deliberately coarse mesh to stay fast.
"""

import dataclasses
import json
import math
import xml.etree.ElementTree as ET

import pytest

from slotbrillouin.cli import main
from slotbrillouin.config import SweepConfig, save_config
from slotbrillouin.sweep import CSV_HEADER, emit_csv, emit_svg, load_csv, run_sweep

_EXPECTED_HEADER = (
    "width_m, bc, n_eff, eta_slot, m_opt, m_ac, omega_B_Hz, g0_Hz, kappa_Hz, "
    "Q_ac, Gamma_Hz, C0, P_th_W, T_K, n_m, sideband_resolved, status"
)

# coarse mesh and a two-point grid: seconds instead of minutes
_FAST_OVERRIDES = dict(
    background_m=120e-9,
    core_cell_m=10e-9,
    slot_cells=8,
    width_min_m=40e-9,
    width_max_m=60e-9,
    width_count=2,
    boundaries=("sealed",),
)


def _fast_config(**extra) -> SweepConfig:
    return dataclasses.replace(SweepConfig(), **{**_FAST_OVERRIDES, **extra})


def _broken_config(**extra) -> SweepConfig:
    # a cell budget no mesh fits inside: every point fails while meshing
    return _fast_config(cell_budget=2000, **extra)


@pytest.fixture(scope="module")
def fast_reports():
    return run_sweep(_fast_config())


def test_csv_header_is_verbatim():
    assert CSV_HEADER == _EXPECTED_HEADER


def test_csv_layout(tmp_path, fast_reports):
    path = tmp_path / "sweep.csv"
    emit_csv(fast_reports, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# slotbrillouin sweep v1"
    assert lines[1] == _EXPECTED_HEADER
    assert len(lines) == 2 + len(fast_reports)


def test_csv_round_trip(tmp_path, fast_reports):
    path = tmp_path / "sweep.csv"
    emit_csv(fast_reports, path)
    loaded = load_csv(path)
    assert len(loaded) == len(fast_reports)
    for orig, back in zip(fast_reports, loaded):
        assert back.bc == orig.bc
        assert back.status == orig.status
        assert back.m_opt == orig.m_opt
        assert back.m_acoustic == orig.m_acoustic
        assert back.sideband_resolved == orig.sideband_resolved
        assert back.width == pytest.approx(orig.width, rel=1e-8)
        assert back.n_eff == pytest.approx(orig.n_eff, rel=1e-8)
        assert back.g0 == pytest.approx(orig.g0, rel=1e-8)
        assert back.p_threshold == pytest.approx(orig.p_threshold, rel=1e-8)
    # a second emit of the parsed rows reproduces the file byte for byte
    again = tmp_path / "again.csv"
    emit_csv(loaded, again)
    assert again.read_bytes() == path.read_bytes()


def test_reports_internally_consistent(fast_reports):
    assert all(r.consistent() for r in fast_reports)
    assert all(r.capillary_filled in ("yes", "no", "unknown") for r in fast_reports)


def test_failed_points_keep_their_rows(tmp_path):
    config = _broken_config(width_count=3)
    reports = run_sweep(config)
    assert len(reports) == 3
    assert all(r.status == "mesh-budget" for r in reports)
    assert all(math.isnan(r.g0) for r in reports)
    path = tmp_path / "failed.csv"
    emit_csv(reports, path)
    rows = path.read_text(encoding="utf-8").splitlines()[2:]
    assert len(rows) == 3
    assert all(r.endswith("mesh-budget") for r in rows)


def test_svg_structure(tmp_path, fast_reports):
    path = tmp_path / "sweep.svg"
    emit_svg(fast_reports, path)
    root = ET.parse(path).getroot()
    assert root.tag.endswith("svg")
    ids = {el.get("id") for el in root.iter() if el.get("id")}
    assert "g0-sealed" in ids
    assert "eta-slot" in ids


def test_svg_renders_even_when_everything_failed(tmp_path):
    reports = run_sweep(_broken_config())
    path = tmp_path / "empty.svg"
    emit_svg(reports, path)
    root = ET.parse(path).getroot()
    ids = {el.get("id") for el in root.iter() if el.get("id")}
    assert "g0-sealed" in ids


def test_cli_sweep_writes_artifacts_and_json(tmp_path, capsys):
    config_path = tmp_path / "run.toml"
    save_config(_fast_config(), config_path)
    csv_path = tmp_path / "out.csv"
    svg_path = tmp_path / "out.svg"
    code = main(
        [
            "sweep",
            "--config",
            str(config_path),
            "--out-csv",
            str(csv_path),
            "--out-svg",
            str(svg_path),
        ]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["points"] == 2
    assert payload["ok"] == 2
    assert payload["failed"] == 0
    assert csv_path.exists()
    assert svg_path.exists()


def test_cli_sweep_env_overrides(tmp_path, capsys, monkeypatch):
    config_path = tmp_path / "run.toml"
    save_config(_fast_config(), config_path)
    env_csv = tmp_path / "env.csv"
    env_svg = tmp_path / "env.svg"
    monkeypatch.setenv("SLOTBRILLOUIN_OUT_CSV", str(env_csv))
    monkeypatch.setenv("SLOTBRILLOUIN_OUT_SVG", str(env_svg))
    monkeypatch.setenv("SLOTBRILLOUIN_WORKERS", "1")
    monkeypatch.chdir(tmp_path)
    code = main(["sweep", "--config", str(config_path)])
    assert code == 0
    capsys.readouterr()
    assert env_csv.exists()
    assert env_svg.exists()
    # a config-file path is never used once the environment names one
    assert not (tmp_path / "sweep.csv").exists()


def test_cli_flag_beats_environment(tmp_path, capsys, monkeypatch):
    config_path = tmp_path / "run.toml"
    save_config(_broken_config(), config_path)
    flag_csv = tmp_path / "flag.csv"
    env_csv = tmp_path / "env.csv"
    monkeypatch.setenv("SLOTBRILLOUIN_OUT_CSV", str(env_csv))
    monkeypatch.setenv("SLOTBRILLOUIN_OUT_SVG", str(tmp_path / "x.svg"))
    code = main(["sweep", "--config", str(config_path), "--out-csv", str(flag_csv)])
    assert code == 1  # every point failed
    capsys.readouterr()
    assert flag_csv.exists()
    assert not env_csv.exists()


def test_cli_rejects_bad_workers_env(tmp_path, capsys, monkeypatch):
    config_path = tmp_path / "run.toml"
    save_config(_fast_config(), config_path)
    monkeypatch.setenv("SLOTBRILLOUIN_WORKERS", "many")
    code = main(["sweep", "--config", str(config_path)])
    assert code == 2
    assert "SLOTBRILLOUIN_WORKERS" in capsys.readouterr().err


def test_cli_bad_config_exits_2(tmp_path, capsys):
    config_path = tmp_path / "bad.toml"
    config_path.write_text("[optical]\nwavelenght_m = 1.55e-6\n", encoding="utf-8")
    code = main(["config", "--config", str(config_path)])
    assert code == 2
    assert "configuration error" in capsys.readouterr().err


def test_cli_missing_config_exits_3(tmp_path, capsys):
    code = main(["config", "--config", str(tmp_path / "nope.toml")])
    assert code == 3
    assert "i/o error" in capsys.readouterr().err


def test_cli_config_round_trip(capsys):
    from slotbrillouin.config import to_toml

    assert main(["config"]) == 0
    assert capsys.readouterr().out == to_toml(SweepConfig())


def test_cli_metrics_reference_point(capsys):
    code = main(["metrics", "--g0-hz", "250e3", "--omega-b-hz", "400e6", "--q", "1e4"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["C0"] == pytest.approx(6.25e-3, rel=1e-9)
    assert payload["P_th_W"] == pytest.approx(64.4e-9, rel=1e-2)
    assert payload["sideband_resolved"] is False


def test_cli_capillary_reports_transition(capsys):
    code = main(["capillary", "--width", "50e-9"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "transition"
    assert payload["critical_thickness_m"] == pytest.approx(7.95e-10, rel=1e-2)


def test_cli_acoustic_mode(tmp_path, capsys):
    dump = tmp_path / "mode.txt"
    code = main(
        ["acoustic-mode", "--width", "50e-9", "--m", "130", "--dump", str(dump)]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["omega_Hz"] == pytest.approx(506.35e6, rel=1e-3)
    assert payload["p_zp_Pa"] == pytest.approx(2.0248, rel=1e-3)
    assert payload["propagating"] is True
    assert dump.exists()


def test_cli_couple_single_width(tmp_path, capsys):
    config_path = tmp_path / "run.toml"
    save_config(_fast_config(), config_path)
    code = main(["couple", "--config", str(config_path), "--width", "50e-9"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload) == 1  # one boundary x one quality factor
    row = payload[0]
    assert row["status"] == "ok"
    assert row["bc"] == "sealed"
    assert row["g0_Hz"] > 0.0
