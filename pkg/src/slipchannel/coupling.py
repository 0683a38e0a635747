"""Split time stepping of the coupled plate-fluid system.

One step is plate -> geometry -> fluid: the plate advances under the load
left by the previous fluid step, the channel map is rebuilt from the new
height with ``h_t = (h' - h)/dt``, and the fluid is solved on the new map
with the interface moving at that velocity. The load for the next step is
the interface reaction of the fluid solve.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .config import pressure_eval
from .energy import dissipation_increment, energy_snapshot, ledger_audit
from .fluid import (boundary_fluxes, fluid_step, initial_fluid, interface_traction,
                    write_snapshot)
from .geometry import build_map, h3_seminorm
from .plate import StructureState, plate_step

__all__ = [
    "SystemState",
    "RunResult",
    "SERIES_COLUMNS",
    "initial_state",
    "lie_trotter_step",
    "run_simulation",
    "detect_contact",
    "flux_identity_residual",
    "stored_state",
    "ChannelClosed",
]

SERIES_COLUMNS = ("t", "min_h", "argmin_x", "q_in", "q_out", "flux_residual",
                  "energy_total", "penalty_deviation", "h3_seminorm")


@dataclass(frozen=True, eq=False)
class SystemState:
    """Plate, fluid and geometry at a common time plus the pending plate load."""

    s: StructureState
    fs: object
    map: object
    t: float
    load: np.ndarray


def initial_state(cfg):
    """State at ``t = 0`` with the pressure initialised by one fluid solve.

    The velocity is the projected initial field; the pressure and interface
    load come from a solve on the frozen initial geometry.
    """
    p = cfg.params
    s = StructureState(cfg.h0, cfg.v0, 0.0)
    amap = build_map(cfg.h0, cfg.v0, p.L)
    fs = initial_fluid(cfg.u0, amap, p, cfg.n_y)
    probe = fluid_step(fs, amap, pressure_eval(cfg.pressure, 0.0), cfg.epsilon, cfg.dt, p)
    fs = replace(fs, p=probe.p, lam=probe.lam, reaction=probe.reaction, r_dyn=probe.r_dyn)
    load = interface_traction(fs, amap, p).f
    return SystemState(s, fs, amap, 0.0, load)


class ChannelClosed(Exception):
    """The plate stage closed the gap; the fluid stage cannot be solved."""

    def __init__(self, s):
        super().__init__(f"plate reached h = {float(np.min(s.h)):.3e} at t = {s.t:.6g}")
        self.s = s


def lie_trotter_step(st, dt, cfg):
    """Advance the coupled state by ``dt``.

    Raises
    ------
    ChannelClosed
        When the plate stage ends with a non-positive height.
    """
    p = cfg.params
    t1 = st.t + dt
    s1 = plate_step(st.s, st.load, dt, p)
    if np.min(s1.h) <= 0.0:
        raise ChannelClosed(s1)
    amap = build_map(s1.h, (s1.h - st.s.h) / dt, p.L)
    fs1 = fluid_step(st.fs, amap, pressure_eval(cfg.pressure, t1), cfg.epsilon, dt, p)
    load = interface_traction(fs1, amap, p).f
    return SystemState(s1, fs1, amap, t1, load)


def detect_contact(s, h_stop_abs, L=1.0):
    """Lowest node at or below ``h_stop_abs`` as ``(x, h)``, else ``None``.

    Among equal minima the leftmost node is reported.
    """
    h = np.asarray(s.h)
    if not np.any(h <= h_stop_abs):
        return None
    k = int(np.argmin(h))  # argmin returns the first occurrence
    return float(L * k / (h.size - 1)), float(h[k])


def flux_identity_residual(st):
    """``q_out - q_in + q_interface`` of the current fluid state."""
    q_in, q_out, q_if = boundary_fluxes(st.fs, st.map)
    return q_out - q_in + q_if


def stored_state(st, cfg):
    """Compact copy of a state for the diagnostics store."""
    P_in, P_out = pressure_eval(cfg.pressure, st.t)
    return {"t": st.t, "h": np.array(st.s.h), "v": np.array(st.s.v),
            "ht": np.array(st.map.ht), "u1c": np.array(st.fs.u1c),
            "u1b": np.array(st.fs.u1b), "u1t": np.array(st.fs.u1t),
            "u2": np.array(st.fs.u2), "p": np.array(st.fs.p), "lam": st.fs.lam,
            "P_in": P_in, "P_out": P_out}


@dataclass
class RunResult:
    """Trajectory summary of one simulation."""

    config: object
    series: dict
    records: list
    initial_energy: tuple
    contact: tuple | None
    reason: str
    stored: list = field(default_factory=list)
    advisories: tuple = ()
    wall_time: float = 0.0

    def audit(self):
        return ledger_audit(self.records, self.initial_energy, self.config.dt,
                            self.config.audit_c1)


def _row(st, cfg, energy):
    p = cfg.params
    q_in, q_out, q_if = boundary_fluxes(st.fs, st.map)
    k = int(np.argmin(st.s.h))
    return (st.t, float(st.s.h[k]), float(st.map.x[k]), q_in, q_out, q_out - q_in + q_if,
            energy, (q_out - 1.0) ** 2, h3_seminorm(st.s.h, p.L))


def run_simulation(vcfg, snapshot_dir=None, keep_states=True):
    """Run the configured simulation until ``t_end``, contact or failure.

    Parameters
    ----------
    vcfg : ValidatedConfig
    snapshot_dir : path-like, optional
        Where grid snapshots go when ``snapshot_every > 0``.
    keep_states : bool
        Keep compact states every ``cadence`` steps for the diagnostics.

    Returns
    -------
    RunResult
    """
    cfg = vcfg.config
    p = cfg.params
    t0 = time.perf_counter()
    st = initial_state(cfg)
    e0 = energy_snapshot(st, p)
    rows = [_row(st, cfg, sum(e0))]
    records = []
    stored = [stored_state(st, cfg)] if keep_states else []
    n_steps = int(round(cfg.t_end / cfg.dt))
    threshold = cfg.h_stop * p.H
    contact, reason = None, "t_end"
    for n in range(1, n_steps + 1):
        try:
            new = lie_trotter_step(st, cfg.dt, cfg)
            if not np.all(np.isfinite(new.fs.u1c)) or not np.all(np.isfinite(new.s.h)):
                raise FloatingPointError("non-finite solution")
        except ChannelClosed as exc:
            # the gap closed inside the plate stage: contact at the step end
            x, hmin = detect_contact(exc.s, threshold, p.L)
            contact, reason = (exc.s.t, x, hmin), "contact"
            break
        except (ValueError, FloatingPointError, np.linalg.LinAlgError, RuntimeError) as exc:
            reason = f"stage_failure: {exc}"
            break
        rec = dissipation_increment(st, new, cfg.dt, cfg)
        records.append(rec)
        st = new
        rows.append(_row(st, cfg, rec.energy))
        hit = detect_contact(st.s, threshold, p.L)
        if keep_states and (n % cfg.cadence == 0 or hit is not None or n == n_steps):
            if stored[-1]["t"] != st.t:
                stored.append(stored_state(st, cfg))
        if snapshot_dir is not None and cfg.snapshot_every and n % cfg.snapshot_every == 0:
            write_snapshot(f"{snapshot_dir}/snapshot_{n:07d}.txt", st.fs, st.map)
        if hit is not None:
            contact = (st.t, hit[0], hit[1])
            reason = "contact"
            break
    series = {c: np.array([r[i] for r in rows]) for i, c in enumerate(SERIES_COLUMNS)}
    return RunResult(cfg, series, records, e0, contact, reason, stored, vcfg.advisories,
                     time.perf_counter() - t0)

