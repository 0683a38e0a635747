"""Energy ledger of the coupled system.

The continuous balance reads

    E(t) + int_0^t D = E(0) + int_0^t W

with ``E`` the fluid kinetic, plate kinetic and bending energies, ``D`` the
viscous, slip, plate and flux-penalty dissipation and ``W`` the work of the
boundary pressures. The penalty enters the step as a linear outlet pump with
multiplier ``lam = (Q - 1)/eps``; its power ``Q lam`` is split into the
quadratic dissipation ``(Q - 1)^2/(2 eps)`` and the pump work
``(1 - Q^2)/(2 eps)``, which is booked on the work side.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .config import pressure_eval
from .fluid import boundary_fluxes, fluid_dissipation_rates, fluid_kinetic_energy
from .plate import plate_dissipation, plate_energy

__all__ = [
    "EnergyRecord",
    "AuditReport",
    "energy_snapshot",
    "dissipation_increment",
    "ledger_audit",
    "flux_deviation_integral",
    "pressure_work_constant",
]


@dataclass(frozen=True)
class EnergyRecord:
    """Energies at the end of a step and the increments over the step."""

    t: float
    kin_fluid: float
    kin_plate: float
    bending: float
    d_visc: float = 0.0
    d_bottom: float = 0.0
    d_interface: float = 0.0
    d_plate: float = 0.0
    d_penalty: float = 0.0
    work_pressure: float = 0.0
    work_penalty: float = 0.0

    @property
    def energy(self):
        return self.kin_fluid + self.kin_plate + self.bending

    @property
    def dissipation(self):
        return self.d_visc + self.d_bottom + self.d_interface + self.d_plate + self.d_penalty

    @property
    def work(self):
        return self.work_pressure + self.work_penalty

    @classmethod
    def columns(cls):
        return [f.name for f in fields(cls)]

    def as_dict(self):
        return asdict(self)


def energy_snapshot(st, params):
    """``(kin_fluid, kin_plate, bending)`` of a system state."""
    kin_p, bend = plate_energy(st.s, params)
    return fluid_kinetic_energy(st.fs), kin_p, bend


def dissipation_increment(st_before, st_after, dt, cfg):
    """Ledger entry of one step.

    Dissipation is evaluated where the step evaluates it: fluid terms at the
    end-of-step velocity on the new geometry, plate damping at the step
    average velocity, pressures at the end of the step.
    """
    params = cfg.params
    kf, kp, bend = energy_snapshot(st_after, params)
    visc, bot, top = fluid_dissipation_rates(st_after.fs, st_after.map, params)
    vbar = 0.5 * (st_before.s.v + st_after.s.v)
    q_in, q_out, _ = boundary_fluxes(st_after.fs, st_after.map)
    P_in, P_out = pressure_eval(cfg.pressure, st_after.t)
    if np.isfinite(cfg.epsilon):
        d_pen = 0.5 * (q_out - 1.0) ** 2 / cfg.epsilon
        w_pen = d_pen - q_out * st_after.fs.lam
    else:
        d_pen = w_pen = 0.0
    return EnergyRecord(
        t=st_after.t, kin_fluid=kf, kin_plate=kp, bending=bend,
        d_visc=visc * dt, d_bottom=bot * dt, d_interface=top * dt,
        d_plate=plate_dissipation(vbar, params, dt), d_penalty=d_pen * dt,
        work_pressure=(P_in * q_in - P_out * q_out) * dt, work_penalty=w_pen * dt)


@dataclass(frozen=True)
class AuditReport:
    """Cumulative discrete energy inequality along a trajectory.

    ``residual[k] = E_k + sum D - E_0 - sum W``; the inequality holds when
    the residual stays below ``slack``. ``constant`` is the smallest
    ``c`` with ``residual <= c * dt`` on the whole run.
    """

    t: np.ndarray
    residual: np.ndarray
    cum_dissipation: np.ndarray
    cum_work: np.ndarray
    slack: float
    scale: float
    max_abs_residual: float
    max_relative_violation: float
    constant: float
    passed: bool
    negative_entries: tuple = ()


def ledger_audit(records, initial, dt, c1=None):
    """Audit the cumulative energy balance.

    Parameters
    ----------
    records : sequence of EnergyRecord
    initial : tuple of float
        ``(kin_fluid, kin_plate, bending)`` at ``t = 0``.
    dt : float
    c1 : float, optional
        Slack constant; default ``10 * (E_0 + max |cumulative work|)``.
    """
    E0 = float(sum(initial))
    if not records:
        z = np.zeros(0)
        return AuditReport(z, z, z, z, 0.0, E0, 0.0, 0.0, 0.0, True)
    t = np.array([r.t for r in records])
    E = np.array([r.energy for r in records])
    D = np.cumsum([r.dissipation for r in records])
    W = np.cumsum([r.work for r in records])
    res = E + D - E0 - W
    scale = E0 + float(np.abs(W).max()) + float(D[-1])
    if c1 is None:
        c1 = 10.0 * (E0 + float(np.abs(W).max()))
    slack = c1 * dt
    neg = tuple(sorted({f for r in records for f in ("d_visc", "d_bottom", "d_interface",
                                                     "d_plate", "d_penalty")
                        if getattr(r, f) < 0}))
    rel = float(np.maximum(res, 0.0).max() / scale) if scale > 0 else 0.0
    return AuditReport(t, res, D, W, slack, scale, float(np.abs(res).max()), rel,
                       float(max(res.max(), 0.0) / dt), bool(res.max() <= slack and not neg),
                       neg)


def flux_deviation_integral(t, q_out, dt=None):
    """``int (q_out - 1)^2 dt`` with the step-end rectangle rule.

    ``t`` are the step-end times; the first step is taken to start at
    ``t[0] - dt`` (``dt`` defaults to the first spacing).
    """
    t = np.asarray(t, dtype=float)
    q = np.asarray(q_out, dtype=float)
    if t.size == 0:
        return 0.0
    if dt is None:
        dt = t[1] - t[0] if t.size > 1 else t[0]
    steps = np.diff(np.r_[t[0] - dt, t])
    return float(np.sum((q - 1.0) ** 2 * steps))


def pressure_work_constant(records, P_in, dt):
    """Smallest ``C`` with ``sum W_p <= C int P_in^2 dt + 1/2 sum D_plate`` along a run.

    ``P_in`` are the inlet pressures at the record times. Reported only; the
    continuous constant is not known.
    """
    if not records:
        return 0.0
    W = np.cumsum([r.work_pressure for r in records])
    Dp = np.cumsum([r.d_plate for r in records])
    norm = np.cumsum(np.asarray(P_in, dtype=float) ** 2 * dt)
    excess = W - 0.5 * Dp
    ok = norm > 0
    if not np.any(ok):
        return 0.0 if np.all(excess <= 0) else float("inf")
    return float(max(0.0, (excess[ok] / norm[ok]).max()))
