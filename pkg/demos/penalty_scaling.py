"""Outlet flux penalty: the flux deviation integral scales like epsilon.

With no pressure drop the penalty alone drives the outlet flux from zero
towards one. Takes about a minute and a half.
"""
from pathlib import Path

from slipchannel import load_config, run_simulation, validate_config
from slipchannel.cli import loglog_slope
from slipchannel.energy import flux_deviation_integral

root = Path(__file__).resolve().parents[1]
base = load_config(root / "configs" / "penalty.ini")
eps = [1e-2, 1e-3, 1e-4, 1e-5]
vals = []
for e in eps:
    res = run_simulation(validate_config(base.replace(epsilon=e)), keep_states=False)
    s = res.series
    vals.append(flux_deviation_integral(s["t"][1:], s["q_out"][1:], base.dt))
    print(f"eps = {e:.0e}: int (q_out - 1)^2 dt = {vals[-1]:.3e}, final q_out = {s['q_out'][-1]:.5f}")
print(f"log-log slope: {loglog_slope(eps, vals):.3f}")
