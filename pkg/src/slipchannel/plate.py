"""Clamped viscoelastic plate ``h_tt + alpha h_xxxx - gamma h_xxt = f``.

Both ends are clamped (``h = H``, ``h_x = 0``). The fourth difference uses two
ghost nodes per end, eliminated by even reflection. The step is the
trapezoidal rule in ``(h, v)``, which makes the discrete energy balance exact:

    E' - E = dt * dx * (f . vbar - gamma |D vbar|^2),   vbar = (v + v') / 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

__all__ = [
    "StructureState",
    "fourth_difference_with_ghosts",
    "apply_clamped_bc",
    "plate_operators",
    "plate_step",
    "plate_energy",
    "plate_dissipation",
    "rest_structure",
]


@dataclass(frozen=True)
class StructureState:
    """Plate height and velocity on the ``n + 1`` nodes of ``[0, L]``."""

    h: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        for k in ("h", "v"):
            a = np.array(getattr(self, k), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, k, a)


def rest_structure(n, H, t=0.0):
    return StructureState(np.full(n + 1, float(H)), np.zeros(n + 1), t)


def fourth_difference_with_ghosts(n, dx):
    """Five-point fourth difference for nodes ``0..n``.

    Columns are ``[g-2, g-1, h_0, ..., h_n, g+1, g+2]``.
    """
    m = n + 1
    stencil = np.array([1.0, -4.0, 6.0, -4.0, 1.0]) / dx**4
    rows = np.repeat(np.arange(m), 5)
    cols = (np.arange(m)[:, None] + np.arange(5)[None, :]).ravel()
    return sp.csr_matrix((np.tile(stencil, m), (rows, cols)), shape=(m, m + 4))


def apply_clamped_bc(op):
    """Eliminate the ghost columns of ``op`` with the clamped reflection.

    Zero end slope is imposed by ``g-k = h_k`` and ``g+k = h_{n-k}``. Returns
    the operator acting on the node values ``h_0..h_n`` only.
    """
    op = sp.csc_matrix(op)
    m = op.shape[1] - 4
    n = m - 1
    # column map: ghost -> mirrored node
    target = np.concatenate([[2, 1], np.arange(m), [n - 1, n - 2]])
    P = sp.csr_matrix((np.ones(m + 4), (np.arange(m + 4), target)), shape=(m + 4, m))
    return (op @ P).tocsr()


@lru_cache(maxsize=16)
def plate_operators(n, L):
    """Interior stiffness ``A`` and damping ``G`` for ``n`` intervals.

    ``A`` is the clamped fourth difference on interior nodes (symmetric) and
    ``G`` the negative second difference with zero end values.
    """
    dx = L / n
    A = apply_clamped_bc(fourth_difference_with_ghosts(n, dx))[1:-1, 1:-1].tocsc()
    k = n - 1
    G = sp.diags([-np.ones(k - 1), 2 * np.ones(k), -np.ones(k - 1)], [-1, 0, 1]) / dx**2
    return A, G.tocsc(), dx


@lru_cache(maxsize=16)
def _factor(n, L, dt, alpha, gamma):
    A, G, _ = plate_operators(n, L)
    k = n - 1
    M = sp.identity(k, format="csc") / dt + (alpha * dt / 4) * A + (gamma / 2) * G
    return splu(M.tocsc())


def plate_step(s, f, dt, params):
    """One trapezoidal step under the load ``f`` held fixed over the step.

    Parameters
    ----------
    s : StructureState
    f : array_like
        Load per node (end values are ignored).
    dt : float
    params : PhysicalParams

    Returns
    -------
    StructureState
    """
    n = s.h.size - 1
    A, G, _ = plate_operators(n, params.L)
    eta = s.h[1:-1] - params.H
    v = s.v[1:-1]
    f = np.asarray(f, dtype=float)[1:-1]
    rhs = v / dt - params.alpha * (A @ (eta + 0.25 * dt * v)) - 0.5 * params.gamma * (G @ v) + f
    v_new = _factor(n, params.L, dt, params.alpha, params.gamma).solve(rhs)
    h = np.full(n + 1, params.H)
    h[1:-1] = params.H + eta + 0.5 * dt * (v + v_new)
    vv = np.zeros(n + 1)
    vv[1:-1] = v_new
    return StructureState(h, vv, s.t + dt)


def plate_energy(s, params):
    """Kinetic and bending energy ``(1/2 |v|^2, alpha/2 |h_xx|^2)``."""
    n = s.h.size - 1
    A, _, dx = plate_operators(n, params.L)
    eta = s.h[1:-1] - params.H
    kin = 0.5 * dx * float(s.v[1:-1] @ s.v[1:-1])
    bend = 0.5 * params.alpha * dx * float(eta @ (A @ eta))
    return kin, bend


def plate_dissipation(v_mid, params, dt):
    """``gamma int |v_x|^2 dt`` for the nodal velocity ``v_mid``."""
    n = v_mid.size - 1
    _, G, dx = plate_operators(n, params.L)
    w = np.asarray(v_mid)[1:-1]
    return params.gamma * dx * float(w @ (G @ w)) * dt
