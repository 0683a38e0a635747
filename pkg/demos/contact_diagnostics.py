"""Weak-form terms of the contact argument along the reference run.

The contact test pair is built on the computed plate at every stored state.
The pressure side grows linearly in the horizon while the sum of the other
terms grows more slowly, which is the mechanism that forces contact. The
closure column is the discrete balance residual of the tested equations.
"""
from pathlib import Path

from slipchannel import (contradiction_diagnostic, load_config, regularity_diagnostic,
                         run_simulation, validate_config, weakform_terms)

root = Path(__file__).resolve().parents[1]
vcfg = validate_config(load_config(root / "configs" / "reference.ini"))
res = run_simulation(vcfg)
cfg = vcfg.config

w = weakform_terms(res.stored, cfg)
names = ("I1", "I2", "I3", "I4", "I5", "I6", "I7", "I_pen", "lhs", "closure")
print("    t " + " ".join(f"{n:>8s}" for n in names))
for k in range(0, w["t"].size, 20):
    print(f"{w['t'][k]:.3f} " + " ".join(f"{w[n][k]:8.3f}" for n in names))

d = contradiction_diagnostic(res.stored, cfg, res.contact and res.contact[0])
print(f"growth exponent, pressure side: {d['exponent_lhs']:.3f}")
print(f"growth exponent, sum |I|:       {d['exponent_sum_I']:.3f}")

# H^3 norm of the plate up to the first time the gap falls below delta
for delta, val, finite in regularity_diagnostic(res.series["t"], res.series["min_h"],
                                                res.series["h3_seminorm"], cfg.params.H):
    print(f"delta = {delta:.4f}: int |h_xxx|^2 dt = {val:.2f}")
