"""Reference contact run.

A sustained pressure drop on top of a suction level pulls the plate down
until it touches the bottom. The script prints the descent, the flux
identity and the energy audit, then writes the run artifacts.

Usage: python demos/contact_run.py [out_dir]
"""
import sys
from pathlib import Path

import numpy as np

from slipchannel import load_config, run_simulation, validate_config
from slipchannel.cli import write_run

root = Path(__file__).resolve().parents[1]
vcfg = validate_config(load_config(root / "configs" / "reference.ini"))
res = run_simulation(vcfg)
ser = res.series

print(f"termination: {res.reason} after {len(res.records)} steps ({res.wall_time:.1f} s)")
if res.contact:
    t, x, h = res.contact
    print(f"contact at t = {t:.4f}, x = {x:.4f}, h = {h:.2e}")

# plate descent every 20 steps
for k in range(0, ser["t"].size, 20):
    print(f"t = {ser['t'][k]:.3f}  min h = {ser['min_h'][k]:.4f}  q_out = {ser['q_out'][k]:.5f}")

print(f"max flux identity residual: {np.abs(ser['flux_residual']).max():.2e}")
a = res.audit()
print(f"energy audit: max residual {a.max_abs_residual:.3e}, slack {a.slack:.3e}, "
      f"{'holds' if a.passed else 'violated'}")

if len(sys.argv) > 1:
    for p in write_run(sys.argv[1], res, vcfg.config):
        print("wrote", p)
