"""Command-line entry point: ``slipchannel run|sweep|validate|diagnose``.

Exit codes: 0 success, 1 rejected input, 2 runtime or validation failure.
Every artifact is written deterministically, so identical inputs give
byte-identical files.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import zipfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import (ConfigError, load_config, parse_config, pressure_eval, serialize_config,
                     validate_config)
from .coupling import SERIES_COLUMNS, run_simulation
from .energy import (EnergyRecord, flux_deviation_integral, ledger_audit,
                     pressure_work_constant)
from .testpairs import contradiction_diagnostic, regularity_diagnostic
from .validation import DEFAULT_GRIDS, poiseuille_tolerance, run_validation

__all__ = ["main", "cmd_run", "cmd_sweep", "cmd_validate", "cmd_diagnose", "CommandOutcome",
           "ENERGY_COLUMNS", "SWEEP_COLUMNS"]

ENERGY_COLUMNS = tuple(EnergyRecord.columns()) + ("energy", "cum_dissipation", "cum_work",
                                                   "audit_residual")
SWEEP_COLUMNS = ("value", "status", "reason", "contact_time", "contact_x", "flux_deviation",
                 "loglog_slope")
STATE_KEYS = ("t", "h", "v", "ht", "u1c", "u1b", "u1t", "u2", "p", "lam", "P_in", "P_out")
_ZIP_DATE = (1980, 1, 1, 0, 0, 0)


class CommandOutcome:
    """Exit code and the artifacts a command produced."""

    def __init__(self, code, paths=()):
        self.code = int(code)
        self.paths = [str(p) for p in paths]

    def __repr__(self):
        return f"CommandOutcome(code={self.code}, paths={self.paths})"


# ----------------------------------------------------------------- writers

def _num(v):
    if v is None:
        return ""
    v = float(v)
    return repr(v) if np.isfinite(v) else str(v)


def _clean(obj):
    """Make ``obj`` strict-JSON friendly (non-finite floats become null)."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if np.isfinite(obj) else None
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def write_json(path, obj):
    Path(path).write_text(json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False)
                          + "\n", encoding="utf-8")


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([v if isinstance(v, str) else _num(v) for v in r])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def write_npz(path, arrays):
    """``np.savez`` layout with a fixed member timestamp."""
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_STORED) as zf:
        for name in sorted(arrays):
            info = zipfile.ZipInfo(f"{name}.npy", date_time=_ZIP_DATE)
            buf = io.BytesIO()
            np.lib.format.write_array(buf, np.ascontiguousarray(arrays[name]),
                                      allow_pickle=False)
            zf.writestr(info, buf.getvalue())


def _digest(cfg):
    return hashlib.sha256(serialize_config(cfg).encode("utf-8")).hexdigest()


# ----------------------------------------------------------------- run

def _energy_rows(result):
    e0 = result.initial_energy
    recs = [EnergyRecord(0.0, *e0)] + list(result.records)
    E0 = float(sum(e0))
    D = W = 0.0
    rows = []
    for k, r in enumerate(recs):
        if k:
            D += r.dissipation
            W += r.work
        rows.append([getattr(r, c) for c in EnergyRecord.columns()]
                    + [r.energy, D, W, r.energy + D - E0 - W])
    return rows


def _states_arrays(stored):
    return {k: np.array([s[k] for s in stored]) for k in STATE_KEYS}


def write_run(out, result, cfg):
    """Write all run artifacts into ``out``; returns their paths."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / n for n in ("config.ini", "timeseries.csv", "energy.csv", "states.npz",
                               "summary.json")]
    paths[0].write_text(serialize_config(cfg), encoding="utf-8")
    ser = result.series
    write_csv(paths[1], SERIES_COLUMNS, zip(*(ser[c] for c in SERIES_COLUMNS)))
    write_csv(paths[2], ENERGY_COLUMNS, _energy_rows(result))
    if result.stored:
        write_npz(paths[3], _states_arrays(result.stored))
    else:
        paths.remove(paths[3])
    audit = result.audit()
    contact = None
    if result.contact is not None:
        contact = dict(zip(("t", "x", "h"), result.contact))
    summary = {
        "version": __version__,
        "config_sha256": _digest(cfg),
        "termination": result.reason.split(":")[0],
        "reason": result.reason,
        "contact": contact,
        "steps": len(result.records),
        "t_final": float(ser["t"][-1]),
        "min_h": float(ser["min_h"].min()),
        "max_flux_residual": float(np.abs(ser["flux_residual"]).max()),
        "flux_deviation_integral": flux_deviation_integral(ser["t"][1:], ser["q_out"][1:],
                                                           cfg.dt),
        "stored_states": len(result.stored),
        "pressure_work_constant": pressure_work_constant(
            result.records, [pressure_eval(cfg.pressure, r.t)[0] for r in result.records],
            cfg.dt),
        "advisories": list(result.advisories),
        "audit": {"passed": audit.passed, "max_abs_residual": audit.max_abs_residual,
                  "slack": audit.slack, "max_relative_violation": audit.max_relative_violation,
                  "constant": audit.constant, "negative_entries": list(audit.negative_entries)},
    }
    write_json(paths[-1], summary)
    return paths


def _load(path):
    """Parse and validate a config file; ConfigError or OSError propagate."""
    return validate_config(load_config(path))


def _reject(exc):
    if isinstance(exc, ConfigError):
        print(f"config rejected [{exc.clause}]: {exc}", file=sys.stderr)
    else:
        print(f"config rejected: {exc}", file=sys.stderr)
    return CommandOutcome(1)


def cmd_run(config, out, cadence=None):
    """Run one simulation and write its artifacts."""
    try:
        vcfg = _load(config)
        if cadence is not None:
            vcfg = validate_config(vcfg.config.replace(cadence=cadence))
    except (ConfigError, OSError) as exc:
        return _reject(exc)
    for a in vcfg.advisories:
        print(f"advisory: {a}", file=sys.stderr)
    out = Path(out)
    snap = None
    if vcfg.config.snapshot_every:
        snap = out / "snapshots"
        snap.mkdir(parents=True, exist_ok=True)
    result = run_simulation(vcfg, snapshot_dir=snap)
    paths = write_run(out, result, vcfg.config)
    if snap is not None:
        paths.append(snap)
    if result.reason.startswith("stage_failure"):
        print(f"run failed: {result.reason}", file=sys.stderr)
        return CommandOutcome(2, paths)
    return CommandOutcome(0, paths)


# ----------------------------------------------------------------- sweep

def _sweep_one(args):
    text, axis, value = args
    cfg = parse_config(text)
    try:
        if axis == "pressure":
            cfg = cfg.replace(pressure=cfg.pressure.scaled(value / cfg.pressure.p0))
        else:
            cfg = cfg.replace(epsilon=value)
        res = run_simulation(validate_config(cfg), keep_states=False)
    except (ConfigError, ValueError) as exc:
        return {"value": value, "status": "failed", "reason": str(exc)}
    ser = res.series
    row = {"value": value, "reason": res.reason,
           "status": "failed" if res.reason.startswith("stage_failure") else "ok",
           "flux_deviation": flux_deviation_integral(ser["t"][1:], ser["q_out"][1:], cfg.dt)}
    if res.contact is not None:
        row["contact_time"], row["contact_x"] = res.contact[0], res.contact[1]
    return row


def _workers(n):
    env = os.environ.get("SLIPCHANNEL_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            pass
    return max(1, min(cap, n))


def loglog_slope(values, integrals):
    v, I = np.asarray(values, float), np.asarray(integrals, float)
    ok = (v > 0) & (I > 0) & np.isfinite(I)
    if ok.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(v[ok]), np.log(I[ok]), 1)[0])


def cmd_sweep(config, axis, values, out):
    """One run per axis value; rows sorted by value with a log-log slope column."""
    values = [float(v) for v in values]
    if axis not in ("pressure", "penalty"):
        return _reject(ConfigError("sweep axis", f"unknown axis {axis!r}"))
    if not values:
        return _reject(ConfigError("sweep values", "empty values list"))
    d = np.diff(values)
    if values and not (np.all(d > 0) or np.all(d < 0)):
        return _reject(ConfigError("sweep values", "values must be strictly monotone"))
    if any(v <= 0 for v in values):
        return _reject(ConfigError("sweep values", "values must be positive"))
    try:
        vcfg = _load(config)
    except (ConfigError, OSError) as exc:
        return _reject(exc)
    if axis == "pressure" and vcfg.config.pressure.p0 == 0:
        return _reject(ConfigError("sweep axis", "pressure sweep needs a config with p0 != 0"))
    text = serialize_config(vcfg.config)
    jobs = [(text, axis, v) for v in values]
    n = _workers(len(jobs))
    if n == 1:
        rows = [_sweep_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n) as ex:
            rows = list(ex.map(_sweep_one, jobs))
    rows.sort(key=lambda r: r["value"])
    good = [r for r in rows if r["status"] == "ok"]
    slope = float("nan")
    if axis == "penalty":
        slope = loglog_slope([r["value"] for r in good], [r["flux_deviation"] for r in good])
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep.csv"
    table = []
    for r in rows:
        table.append([r["value"], r["status"], r.get("reason", ""), r.get("contact_time"),
                      r.get("contact_x"), r.get("flux_deviation"),
                      slope if axis == "penalty" else None])
    write_csv(path, SWEEP_COLUMNS, table)
    for r in rows:
        if r["status"] != "ok":
            print(f"sweep row {r['value']!r} failed: {r.get('reason')}", file=sys.stderr)
    return CommandOutcome(2 if not good else 0, [path])


# ----------------------------------------------------------------- validate

def cmd_validate(out, grid=None, fault=None):
    """Run the oracle suite and write ``validation.json`` and ``validation.txt``."""
    grids = DEFAULT_GRIDS if grid is None else (int(grid),)
    sign = -1.0 if fault == "stress-sign" else 1.0
    rep = run_validation(grids, stress_sign=sign)
    rep["tolerance_schedule"] = {str(n): poiseuille_tolerance(n) for n in grids}
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    jpath, tpath = out / "validation.json", out / "validation.txt"
    write_json(jpath, rep)
    lines = [f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}" for c in rep["checks"]]
    tpath.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print("\n".join(lines))
    return CommandOutcome(0 if rep["passed"] else 2, [jpath, tpath])


# ----------------------------------------------------------------- diagnose

def _read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    head, body = rows[0], rows[1:]
    return {h: np.array([float(r[i]) if r[i] else np.nan for r in body])
            for i, h in enumerate(head)}


def load_stored(path):
    with np.load(path, allow_pickle=False) as z:
        arr = {k: z[k] for k in z.files}
    K = len(arr["t"])
    return [{k: (float(arr[k][i]) if arr[k].ndim == 1 else arr[k][i]) for k in STATE_KEYS}
            for i in range(K)]


def cmd_diagnose(run_dir):
    """Weak-form, contradiction, regularity and audit report of a finished run."""
    run_dir = Path(run_dir)
    try:
        cfg = load_config(run_dir / "config.ini")
        summary = json.loads((run_dir / "summary.json").read_text(encoding="utf-8"))
        series = _read_csv(run_dir / "timeseries.csv")
        energy = _read_csv(run_dir / "energy.csv")
    except (OSError, ConfigError, ValueError) as exc:
        print(f"not a run directory: {exc}", file=sys.stderr)
        return CommandOutcome(1)
    states = run_dir / "states.npz"
    stored = load_stored(states) if states.exists() else []
    if len(stored) < 3:
        print(f"insufficient stored cadence: {len(stored)} stored states, need >= 3; "
              "rerun with a smaller --cadence", file=sys.stderr)
        return CommandOutcome(1)
    contact = summary.get("contact")
    tc = contact["t"] if contact else None
    try:
        con = contradiction_diagnostic(stored, cfg, tc)
    except ValueError as exc:
        print(f"diagnostic failed: {exc}", file=sys.stderr)
        return CommandOutcome(2)
    reg = regularity_diagnostic(series["t"], series["min_h"], series["h3_seminorm"],
                                cfg.params.H)
    names = EnergyRecord.columns()
    recs = [EnergyRecord(*(float(energy[c][k]) for c in names))
            for k in range(1, len(energy["t"]))]
    e0 = (energy["kin_fluid"][0], energy["kin_plate"][0], energy["bending"][0])
    audit = ledger_audit(recs, e0, cfg.dt, cfg.audit_c1)
    deltas = [d for d, _, _ in reg]
    vals = [v for _, v, _ in reg]
    diag = {
        "config_sha256": summary.get("config_sha256"),
        "contradiction": con,
        "regularity": {"per_delta": [{"delta": d, "value": v, "finite": f} for d, v, f in reg],
                       "nondecreasing": bool(all(b >= a for a, b in zip(vals, vals[1:]))),
                       "deltas": deltas},
        "audit": {"passed": audit.passed, "max_abs_residual": audit.max_abs_residual,
                  "slack": audit.slack, "constant": audit.constant,
                  "max_relative_violation": audit.max_relative_violation,
                  "negative_entries": list(audit.negative_entries)},
    }
    dpath = run_dir / "diagnostics.json"
    write_json(dpath, diag)
    apath = run_dir / "audit.txt"
    apath.write_text(
        f"audit {'PASS' if audit.passed else 'FAIL'}: max |residual| "
        f"{audit.max_abs_residual:.6e}, slack {audit.slack:.6e}, "
        f"relative violation {audit.max_relative_violation:.6e}\n", encoding="utf-8")
    if con["degenerate"]:
        print("contradiction diagnostic degenerate: no pressure forcing", file=sys.stderr)
    return CommandOutcome(0, [dpath, apath])


# ----------------------------------------------------------------- entry

def build_parser():
    ap = argparse.ArgumentParser(prog="slipchannel", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run one simulation")
    r.add_argument("--config", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--cadence", type=int, default=None, help="override state store cadence")
    r.add_argument("--seedless", action="store_true", help="reserved; runs are deterministic")
    s = sub.add_parser("sweep", help="parameter sweep over pressure scale or penalty")
    s.add_argument("--config", required=True)
    s.add_argument("--axis", required=True, choices=("pressure", "penalty"))
    s.add_argument("--values", default="", help="comma-separated axis values")
    s.add_argument("--out", required=True)
    s.add_argument("--seedless", action="store_true", help=argparse.SUPPRESS)
    v = sub.add_parser("validate", help="oracle and identity suite")
    v.add_argument("--out", required=True)
    v.add_argument("--grid", type=int, default=None, help="single square grid size")
    v.add_argument("--fault", choices=("stress-sign",), default=None, help=argparse.SUPPRESS)
    d = sub.add_parser("diagnose", help="diagnostics of a run directory")
    d.add_argument("--out", "--run", dest="run_dir", required=True)
    return ap


def _parse_values(text):
    items = [t for t in text.replace(";", ",").split(",") if t.strip()]
    return [float(t) for t in items]


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "run":
        res = cmd_run(args.config, args.out, args.cadence)
    elif args.command == "sweep":
        try:
            values = _parse_values(args.values)
        except ValueError:
            res = _reject(ConfigError("sweep values", f"unparsable values {args.values!r}"))
        else:
            res = cmd_sweep(args.config, args.axis, values, args.out)
    elif args.command == "validate":
        res = cmd_validate(args.out, args.grid, args.fault)
    else:
        res = cmd_diagnose(args.run_dir)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
