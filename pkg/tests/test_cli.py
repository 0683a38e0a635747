import csv
import json

import numpy as np
import pytest

from slipchannel.cli import ENERGY_COLUMNS, SWEEP_COLUMNS, main
from slipchannel.coupling import SERIES_COLUMNS

from conftest import CONFIGS

GOLDEN_SERIES = ("t,min_h,argmin_x,q_in,q_out,flux_residual,energy_total,"
                 "penalty_deviation,h3_seminorm")
GOLDEN_ENERGY = ("t,kin_fluid,kin_plate,bending,d_visc,d_bottom,d_interface,d_plate,d_penalty,"
                 "work_pressure,work_penalty,energy,cum_dissipation,cum_work,audit_residual")
GOLDEN_SWEEP = "value,status,reason,contact_time,contact_x,flux_deviation,loglog_slope"


def _short(tmp_path, src="zero.ini", **edits):
    text = (CONFIGS / src).read_text()
    for k, v in edits.items():
        lines = [ln for ln in text.splitlines() if not ln.startswith(f"{k} =")]
        sec = "[time]" if k in ("t_end", "dt", "epsilon") else "[output]"
        text = "\n".join(lines).replace(sec, f"{sec}\n{k} = {v}", 1) + "\n"
    path = tmp_path / f"cfg_{len(list(tmp_path.iterdir()))}.ini"
    path.write_text(text)
    return path


def _header(path):
    with open(path, newline="") as fh:
        return next(csv.reader(fh))


def test_golden_headers():
    assert ",".join(SERIES_COLUMNS) == GOLDEN_SERIES
    assert ",".join(ENERGY_COLUMNS) == GOLDEN_ENERGY
    assert ",".join(SWEEP_COLUMNS) == GOLDEN_SWEEP


def test_run_zero_data(tmp_path):
    cfg = _short(tmp_path, t_end="0.02", cadence="5")
    out = tmp_path / "run"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    s = json.loads((out / "summary.json").read_text())
    assert s["termination"] == "t_end" and s["contact"] is None
    assert ",".join(_header(out / "timeseries.csv")) == GOLDEN_SERIES
    assert ",".join(_header(out / "energy.csv")) == GOLDEN_ENERGY
    with np.load(out / "states.npz") as z:
        assert z["t"].size == 5 and z["u1c"].shape[0] == 5


def test_run_is_byte_reproducible(tmp_path):
    cfg = _short(tmp_path, src="reference.ini", t_end="0.01")
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", str(cfg), "--out", str(a)]) == 0
    assert main(["run", "--config", str(cfg), "--out", str(b), "--seedless"]) == 0
    for name in ("timeseries.csv", "energy.csv", "summary.json", "states.npz", "config.ini"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_run_rejects_bad_config(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text((CONFIGS / "zero.ini").read_text().replace("beta_b = 1", "beta_b = -1"))
    assert main(["run", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1
    assert "positivity" in capsys.readouterr().err
    assert main(["run", "--config", str(tmp_path / "missing.ini"), "--out", str(tmp_path)]) == 1


def test_run_snapshots(tmp_path):
    cfg = _short(tmp_path, t_end="0.004", snapshot_every="2")
    out = tmp_path / "run"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    assert sorted(p.name for p in (out / "snapshots").iterdir()) == [
        "snapshot_0000002.txt", "snapshot_0000004.txt"]


@pytest.mark.parametrize("values", ["", "1e-2,1e-3,1e-2", "0,1"])
def test_sweep_rejects_values(tmp_path, values):
    code = main(["sweep", "--config", str(CONFIGS / "penalty.ini"), "--axis", "penalty",
                 "--values", values, "--out", str(tmp_path)])
    assert code == 1


def test_sweep_penalty_rows_sorted(tmp_path, monkeypatch):
    monkeypatch.setenv("SLIPCHANNEL_THREADS", "1")
    cfg = _short(tmp_path, src="penalty.ini", t_end="0.0005")
    assert main(["sweep", "--config", str(cfg), "--axis", "penalty", "--values",
                 "1e-2,1e-3", "--out", str(tmp_path / "sw")]) == 0
    with open(tmp_path / "sw" / "sweep.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [float(r["value"]) for r in rows] == [1e-3, 1e-2]
    assert all(r["status"] == "ok" for r in rows)
    assert rows[0]["loglog_slope"] == rows[1]["loglog_slope"] != ""


def test_pressure_sweep_needs_drop(tmp_path):
    code = main(["sweep", "--config", str(CONFIGS / "zero.ini"), "--axis", "pressure",
                 "--values", "1,2", "--out", str(tmp_path)])
    assert code == 1


def test_validate_coarse_grid_passes(tmp_path):
    assert main(["validate", "--out", str(tmp_path), "--grid", "8"]) == 0
    rep = json.loads((tmp_path / "validation.json").read_text())
    assert rep["passed"] and rep["tolerance_schedule"] == {"8": 0.064}


def test_validate_fault_hook_fails(tmp_path):
    assert main(["validate", "--out", str(tmp_path), "--grid", "16",
                 "--fault", "stress-sign"]) == 2
    rep = json.loads((tmp_path / "validation.json").read_text())
    failed = [c["name"] for c in rep["checks"] if not c["passed"]]
    assert failed == ["poiseuille"]


def test_diagnose_zero_run_is_degenerate(tmp_path):
    cfg = _short(tmp_path, t_end="0.01", cadence="2")
    out = tmp_path / "run"
    main(["run", "--config", str(cfg), "--out", str(out)])
    assert main(["diagnose", "--run", str(out)]) == 0
    d = json.loads((out / "diagnostics.json").read_text())
    assert d["contradiction"]["degenerate"] is True
    assert d["contradiction"]["exponent_lhs"] is None
    assert d["audit"]["passed"]


def test_diagnose_truncated_store(tmp_path, capsys):
    cfg = _short(tmp_path, t_end="0.01", cadence="100")
    out = tmp_path / "run"
    main(["run", "--config", str(cfg), "--out", str(out)])
    assert main(["diagnose", "--run", str(out)]) == 1
    assert "cadence" in capsys.readouterr().err


def test_diagnose_missing_dir(tmp_path):
    assert main(["diagnose", "--run", str(tmp_path / "nothing")]) == 1
