"""Oracle suite: slip Poiseuille flow, profile coefficients, flux identity, rest state.

Every check returns a plain dict with ``name``, ``passed`` and the measured
quantities, so the suite can be serialised as-is.
"""
from __future__ import annotations

import numpy as np

from .config import PhysicalParams, PressureData, SimulationConfig, validate_config
from .coupling import run_simulation
from .fluid import (boundary_fluxes, fluid_step, interface_traction, rest_fluid,
                    slip_poiseuille)
from .geometry import build_map
from .plate import StructureState
from .testpairs import contact_testpair, cubic_coeffs, testpair_checks

__all__ = [
    "REFERENCE_PARAMS",
    "poiseuille_tolerance",
    "poiseuille_error",
    "poiseuille_check",
    "coefficient_check",
    "testpair_identity_check",
    "flux_identity_check",
    "rest_state_check",
    "run_validation",
]

REFERENCE_PARAMS = PhysicalParams(mu=1.0, alpha=1.0, gamma=1.0, beta_s=1.0, beta_b=1.0,
                                  L=1.0, H=0.5)
DEFAULT_GRIDS = (16, 32, 64)


def poiseuille_tolerance(n):
    """Relative L2 tolerance on an ``n x n`` grid: ``1e-3 (64/n)^2``."""
    return 1e-3 * (64.0 / n) ** 2


def poiseuille_error(n, params=REFERENCE_PARAMS, G=1e-6, steps=8, dt=10.0, stress_sign=1.0):
    """Steady rigid-lid run against the closed-form Robin-wall profile.

    A small pressure gradient keeps convection negligible and large steps
    reach the steady state in a few solves.

    Returns
    -------
    error : float
        Relative discrete L2 error of ``u1`` at the cell centres.
    flux_residual : float
    traction_ratio : float
        Interface load over the pressure below it, which is one for this flow.
    """
    H, L = params.H, params.L
    amap = build_map(np.full(n + 1, H), np.zeros(n + 1), L)
    fs = rest_fluid(n, n, L, H)
    for _ in range(steps):
        fs = fluid_step(fs, amap, (G * L, 0.0), np.inf, dt, params, stress_sign=stress_sign)
    exact = np.broadcast_to(slip_poiseuille(fs.grid.yc * H, H, params, G=G), fs.u1c.shape)
    err = float(np.linalg.norm(fs.u1c - exact) / np.linalg.norm(exact))
    q_in, q_out, q_if = boundary_fluxes(fs, amap)
    f = interface_traction(fs, amap, params, stress_sign).f
    mid = n // 2
    ratio = float(f[mid] / (0.5 * (fs.p[mid - 1, -1] + fs.p[mid, -1])))
    return err, float(q_out - q_in + q_if), ratio


def poiseuille_check(grids=DEFAULT_GRIDS, stress_sign=1.0):
    rows = []
    for n in grids:
        err, flux, ratio = poiseuille_error(n, stress_sign=stress_sign)
        tol = poiseuille_tolerance(n)
        rows.append({"n": int(n), "error": err, "tolerance": tol, "flux_residual": flux,
                     "traction_ratio": ratio, "passed": bool(np.isfinite(err) and err <= tol)})
    order = None
    if len(rows) > 1:
        e1, e2 = rows[-2]["error"], rows[-1]["error"]
        n1, n2 = rows[-2]["n"], rows[-1]["n"]
        if e1 > 0 and e2 > 0 and np.isfinite(e1) and np.isfinite(e2):
            order = float(np.log(e1 / e2) / np.log(n2 / n1))
    passed = all(r["passed"] for r in rows) and (order is None or order >= 1.8)
    return {"name": "poiseuille", "passed": bool(passed), "grids": rows, "order": order}


def coefficient_check(n=100, tol=1e-12):
    """Profile coefficients on an ``n x n`` log grid of wall numbers.

    The top Robin residual is measured relative to ``1 + lambda_s``, the size
    of the terms it balances.
    """
    lam = np.logspace(-4, 4, n)
    ls, lb = np.meshgrid(lam, lam)
    c = cubic_coeffs(ls, lb)
    s = np.abs(c.a + c.b + c.c - 1.0).max()
    rt = np.abs(c.robin_top() / (1.0 + ls)).max()
    rb = np.abs(c.robin_bottom()).max()
    big = [1e4, 1e6, 1e8]
    lim = [np.abs(np.array([float(v) for v in (cc.a, cc.b, cc.c)]) - [-2.0, 3.0, 0.0]).max()
           for cc in (cubic_coeffs(x, x) for x in big)]
    exact = cubic_coeffs(np.inf, np.inf)
    converging = all(b <= a for a, b in zip(lim, lim[1:])) and lim[-1] < 1e-6
    passed = max(s, rt, rb) <= tol and converging and (
        float(exact.a), float(exact.b), float(exact.c)) == (-2.0, 3.0, 0.0)
    return {"name": "coefficients", "passed": bool(passed), "pairs": int(n * n),
            "sum_residual": float(s), "robin_top": float(rt), "robin_bottom": float(rb),
            "no_slip_limit_error": [float(v) for v in lim]}


def testpair_identity_check(params=REFERENCE_PARAMS, n=64):
    x = np.linspace(0.0, params.L, n + 1)
    h = params.H - 0.3 * params.H * 16 * x**2 * (params.L - x) ** 2 / params.L**4
    rep = testpair_checks(contact_testpair(StructureState(h, np.zeros_like(h)), params))
    return {"name": "contact pair", "passed": rep.passed,
            "checks": {c.name: {"error": c.error, "tol": c.tol, "passed": c.passed}
                       for c in rep.checks}}


def _small_config(p_in, p_out, p0, t_end, epsilon, n=8):
    cfg = SimulationConfig(
        params=REFERENCE_PARAMS, pressure=PressureData.constant(p_in, p_out, p0),
        n_x=n, n_y=n // 2, t_end=t_end, dt=1e-3, epsilon=epsilon,
        h0=np.full(n + 1, REFERENCE_PARAMS.H), v0=np.zeros(n + 1), u0="zero")
    return validate_config(cfg)


def flux_identity_check(steps=50):
    """Per-step flux identity on a short driven coupled run."""
    res = run_simulation(_small_config(-150.0, -100.0, 50.0, steps * 1e-3, 1e-4),
                         keep_states=False)
    bound = 1e-8 * np.maximum(1.0, np.abs(res.series["q_out"]))
    worst = float(np.max(np.abs(res.series["flux_residual"]) / bound))
    return {"name": "flux identity", "passed": bool(worst <= 1.0), "steps": len(res.records),
            "max_residual": float(np.abs(res.series["flux_residual"]).max()),
            "worst_ratio_to_bound": worst}


def rest_state_check(steps=1000, tol=1e-12):
    """Zero data keep the system at rest."""
    res = run_simulation(_small_config(0.0, 0.0, 0.0, steps * 1e-3, np.inf))
    H = REFERENCE_PARAMS.H
    dev = 0.0
    for rec in res.stored:
        for k in ("u1c", "u1b", "u1t", "u2", "p", "v", "ht"):
            dev = max(dev, float(np.abs(rec[k]).max()))
        dev = max(dev, float(np.abs(rec["h"] - H).max()), abs(rec["lam"]))
    st = res.series
    energy = float(np.abs(st["energy_total"]).max())
    passed = res.reason == "t_end" and dev <= tol and energy <= tol
    return {"name": "rest state", "passed": bool(passed), "steps": len(res.records),
            "max_field_deviation": dev, "max_energy": energy}


def run_validation(grids=DEFAULT_GRIDS, stress_sign=1.0):
    """Run the full suite.

    Returns
    -------
    dict
        ``passed`` plus one entry per check under ``checks``.
    """
    checks = [poiseuille_check(grids, stress_sign), coefficient_check(),
              testpair_identity_check(), flux_identity_check(), rest_state_check()]
    return {"passed": all(c["passed"] for c in checks), "checks": checks}
