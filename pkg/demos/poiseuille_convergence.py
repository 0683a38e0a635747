"""Slip Poiseuille flow on refined grids.

A rigid lid, a tiny pressure gradient and a few large implicit steps give the
steady flow, which is compared with the closed-form profile of
``mu u'' = -G`` with Navier slip on both walls.
"""
import numpy as np

from slipchannel.validation import poiseuille_error, poiseuille_tolerance

rows = []
for n in (8, 16, 32, 64):
    err, flux, ratio = poiseuille_error(n)
    rows.append((n, err))
    print(f"{n:3d}x{n:<3d} L2 error {err:.3e}  tol {poiseuille_tolerance(n):.1e}  "
          f"flux residual {flux:+.1e}  load/pressure {ratio:.6f}")

# observed order between consecutive grids
for (n1, e1), (n2, e2) in zip(rows, rows[1:]):
    print(f"order {n1}->{n2}: {np.log(e1 / e2) / np.log(n2 / n1):.3f}")
