"""Incompressible Navier-Stokes step on the stretched channel.

Unknowns live on a staggered grid of the reference rectangle
``(0, L) x (0, 1)`` with ``N`` columns and ``M`` rows:

* ``u1c[i, j]`` horizontal velocity at ``(x_i, yh_{j+1/2})``, ``i = 0..N``;
* ``u1b[i]``, ``u1t[i]`` horizontal velocity on the bottom and top walls;
* ``u2[i, j]`` vertical velocity at ``(x_{i+1/2}, yh_j)``, ``j = 0..M``;
* ``p[i, j]`` pressure at cell centres.

All velocities are physical components. Incompressibility is imposed on the
physical cells through face fluxes: ``u1 h dyh`` across the vertical faces and
``W dx`` across the stretched horizontal faces, where
``W = u2 - yh h_x u1`` is the flux velocity. ``W = 0`` on the bottom and
``W = dh/dt`` on the interface, which is the kinematic condition. Summing the
cell balances gives ``q_out - q_in + q_interface = 0`` exactly.

The momentum balance is the Galerkin form of ``mu grad u : grad v`` with
Navier slip on both walls, a skew-symmetric convection with lagged advecting
velocity ``u^n - w`` and an ALE mass term that makes the discrete kinetic
energy balance exact. The skew convection turns the inlet/outlet natural
condition into ``p + |u|^2/2 - mu d_n u1 = P``. The outlet flux penalty is a
bordered row ``Q - eps*lam = 1`` so that ``lam = (Q - 1)/eps``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from .geometry import build_map

__all__ = [
    "FluidGrid",
    "FluidState",
    "TractionProfile",
    "fluid_grid",
    "rest_fluid",
    "fluid_step",
    "interface_traction",
    "boundary_fluxes",
    "divergence",
    "fluid_kinetic_energy",
    "fluid_dissipation_rates",
    "slip_poiseuille",
    "initial_fluid",
    "grid_snapshot",
    "write_snapshot",
    "cell_center_fields",
]


def _coo(rows, cols, vals, shape):
    return sp.csr_matrix((np.asarray(vals, float), (np.asarray(rows), np.asarray(cols))),
                         shape=shape)


@dataclass(frozen=True, eq=False)
class FluidGrid:
    """Reference-grid index maps and geometry-free difference operators."""

    N: int
    M: int
    L: float
    dx: float
    dy: float
    n1: int
    nX: int
    nz: int
    ops: dict

    @property
    def yc(self):
        return (np.arange(self.M) + 0.5) * self.dy

    @property
    def yn(self):
        return np.arange(self.M + 1) * self.dy

    def u1c(self, i, j):
        return i * self.M + j

    def u1b(self, i):
        return self.n1 + i

    def u1t(self, i):
        return self.n1 + self.N + 1 + i

    def u2(self, i, j):
        return self.n1 + 2 * (self.N + 1) + i * (self.M + 1) + j


@lru_cache(maxsize=32)
def fluid_grid(N, M, L):
    """Build (and cache) the reference operators for an ``N x M`` grid."""
    N, M = int(N), int(M)
    dx, dy = L / N, 1.0 / M
    n1 = (N + 1) * M
    o2 = n1 + 2 * (N + 1)
    nX = o2 + N * (M + 1)
    nz = n1 + 2 * (N + 1) + N * M
    g = FluidGrid(N, M, L, dx, dy, n1, nX, nz, {})
    I, J = np.meshgrid(np.arange(N), np.arange(M), indexing="ij")
    I, J = I.ravel(), J.ravel()
    nc = N * M
    cen = I * M + J
    IC, JC = np.meshgrid(np.arange(N + 1), np.arange(M + 1), indexing="ij")
    IC, JC = IC.ravel(), JC.ravel()
    ncor = (N + 1) * (M + 1)
    cor = IC * (M + 1) + JC
    ops = g.ops

    ops["Dx1"] = _coo(np.r_[cen, cen], np.r_[g.u1c(I + 1, J), g.u1c(I, J)],
                      np.r_[np.ones(nc), -np.ones(nc)] / dx, (nc, nX))

    rows, cols, vals = [], [], []
    for i in range(N + 1):
        for j in range(M + 1):
            k = i * (M + 1) + j
            if j == 0:
                rows += [k, k]; cols += [g.u1c(i, 0), g.u1b(i)]; vals += [2 / dy, -2 / dy]
            elif j == M:
                rows += [k, k]; cols += [g.u1t(i), g.u1c(i, M - 1)]; vals += [2 / dy, -2 / dy]
            else:
                rows += [k, k]; cols += [g.u1c(i, j), g.u1c(i, j - 1)]; vals += [1 / dy, -1 / dy]
    ops["Dy1"] = _coo(rows, cols, vals, (ncor, nX))

    rows, cols, vals = [], [], []
    for i in range(N + 1):
        for j in range(M + 1):
            k = i * (M + 1) + j
            if i == 0:
                rows.append(k); cols.append(g.u2(0, j)); vals.append(2 / dx)
            elif i == N:
                rows.append(k); cols.append(g.u2(N - 1, j)); vals.append(-2 / dx)
            else:
                rows += [k, k]; cols += [g.u2(i, j), g.u2(i - 1, j)]; vals += [1 / dx, -1 / dx]
    ops["Dx2"] = _coo(rows, cols, vals, (ncor, nX))

    ops["Dy2"] = _coo(np.r_[cen, cen], np.r_[g.u2(I, J + 1), g.u2(I, J)],
                      np.r_[np.ones(nc), -np.ones(nc)] / dy, (nc, nX))

    # corners -> centres
    cc = [(I + a) * (M + 1) + (J + b) for a in (0, 1) for b in (0, 1)]
    ops["C2c"] = _coo(np.tile(cen, 4), np.concatenate(cc), np.full(4 * nc, 0.25), (nc, ncor))
    # centres -> corners, averaging the adjacent centres inside the domain
    rows, cols = [], []
    for a in (0, 1):
        for b in (0, 1):
            ii, jj = IC - a, JC - b
            ok = (ii >= 0) & (ii < N) & (jj >= 0) & (jj < M)
            rows.append(cor[ok]); cols.append(ii[ok] * M + jj[ok])
    rows, cols = np.concatenate(rows), np.concatenate(cols)
    cnt = np.bincount(rows, minlength=ncor)
    ops["c2C"] = _coo(rows, cols, 1.0 / cnt[rows], (ncor, nc))

    ops["I1c"] = _coo(np.r_[cen, cen], np.r_[g.u1c(I, J), g.u1c(I + 1, J)],
                      np.full(2 * nc, 0.5), (nc, nX))
    ops["I2c"] = _coo(np.r_[cen, cen], np.r_[g.u2(I, J), g.u2(I, J + 1)],
                      np.full(2 * nc, 0.5), (nc, nX))

    # u1 at corners (wall values on the walls)
    rows, cols, vals = [], [], []
    for i in range(N + 1):
        for j in range(M + 1):
            k = i * (M + 1) + j
            if j == 0:
                rows.append(k); cols.append(g.u1b(i)); vals.append(1.0)
            elif j == M:
                rows.append(k); cols.append(g.u1t(i)); vals.append(1.0)
            else:
                rows += [k, k]; cols += [g.u1c(i, j - 1), g.u1c(i, j)]; vals += [0.5, 0.5]
    U1C = _coo(rows, cols, vals, (ncor, nX))
    # u1 averaged onto the u2 points
    I2, J2 = np.meshgrid(np.arange(N), np.arange(M + 1), indexing="ij")
    I2, J2 = I2.ravel(), J2.ravel()
    n2 = N * (M + 1)
    avg = _coo(np.r_[np.arange(n2), np.arange(n2)],
               np.r_[I2 * (M + 1) + J2, (I2 + 1) * (M + 1) + J2], np.full(2 * n2, 0.5),
               (n2, ncor))
    ops["Abar"] = (avg @ U1C).tocsr()
    ops["U1C"] = U1C

    # z -> X copy of the u1 blocks, W -> u2 slots
    nu = n1 + 2 * (N + 1)
    ops["S1"] = _coo(np.arange(nu), np.arange(nu), np.ones(nu), (nX, nz))
    Wint = [(i, j) for i in range(N) for j in range(1, M + 1)]
    ops["PW"] = _coo([g.u2(i, j) for i, j in Wint], nu + np.arange(len(Wint)),
                     np.ones(len(Wint)), (nX, nz))
    ops["J2"] = J2
    ops["I2"] = I2

    # divergence in z coordinates: flux differences per cell
    zW = lambda i, j: nu + i * M + (j - 1)  # noqa: E731  (j = 1..M)
    rows, cols, vals, kind = [], [], [], []
    for i in range(N):
        for j in range(M):
            k = i * M + j
            rows += [k, k]; cols += [g.u1c(i + 1, j), g.u1c(i, j)]; vals += [1.0, -1.0]
            kind += [1, 2]
            rows.append(k); cols.append(zW(i, j + 1)); vals.append(1.0); kind.append(0)
            if j > 0:
                rows.append(k); cols.append(zW(i, j)); vals.append(-1.0); kind.append(0)
    ops["B_rows"] = np.array(rows)
    ops["B_cols"] = np.array(cols)
    ops["B_vals"] = np.array(vals)
    ops["B_kind"] = np.array(kind)
    ops["Wtop"] = np.array([zW(i, M) for i in range(N)])
    ops["free"] = np.setdiff1d(np.arange(nz), ops["Wtop"])
    ops["zW"] = np.array([zW(i, j) for i in range(N) for j in range(1, M + 1)])
    return g


_GEO_CACHE = {}


def _geo(g, amap):
    key = (g.N, g.M, g.L, amap.h.tobytes(), amap.ht.tobytes())
    geo = _GEO_CACHE.get(key)
    if geo is None:
        if len(_GEO_CACHE) >= 6:
            _GEO_CACHE.pop(next(iter(_GEO_CACHE)))
        geo = _GEO_CACHE[key] = _Geo(g, amap)
    return geo


class _Geo:
    """Geometry-dependent weights and operators for one height profile."""

    def __init__(self, g, amap):
        N, M = g.N, g.M
        o = g.ops
        self.h, self.hm = amap.h, amap.h_mid
        self.sm, self.sn = amap.slope_mid, amap.slope
        self.ht_mid = amap.ht_mid
        yc, yn = g.yc, g.yn
        dxi = np.full(N + 1, g.dx)
        dxi[[0, -1]] *= 0.5
        dyj = np.full(M + 1, g.dy)
        dyj[[0, -1]] *= 0.5
        self.wc = np.repeat(self.hm * g.dx * g.dy, M)
        self.wC = (self.h[:, None] * dxi[:, None] * dyj[None, :]).ravel()
        a1 = (self.sm / self.hm)[:, None] * yc[None, :]
        a3 = (self.sn / self.h)[:, None] * yn[None, :]
        self.g1 = (o["Dx1"] - sp.diags(a1.ravel()) @ o["C2c"] @ o["Dy1"]).tocsr()
        self.g2 = (sp.diags(np.repeat(1.0 / self.h, M + 1)) @ o["Dy1"]).tocsr()
        self.g3 = (o["Dx2"] - sp.diags(a3.ravel()) @ o["c2C"] @ o["Dy2"]).tocsr()
        self.g4 = (sp.diags(np.repeat(1.0 / self.hm, M)) @ o["Dy2"]).tocsr()
        m = np.zeros(g.nX)
        m[: g.n1] = (self.h * dxi)[:, None].repeat(M, 1).ravel() * g.dy
        m[g.u2(0, 0):] = (self.hm[:, None] * g.dx * dyj[None, :]).ravel()
        self.mass = m
        # u2 = W + yh * s * ubar
        coef = yn[o["J2"]] * self.sm[o["I2"]]
        T = o["S1"] + o["PW"]
        T = T + sp.vstack([sp.csr_matrix((g.u2(0, 0), g.nX)),
                           sp.diags(coef) @ o["Abar"]]).tocsr() @ o["S1"]
        self.T = T.tocsr()
        kind = o["B_kind"]
        scale = np.where(kind == 0, g.dx, 0.0)
        ii = o["B_cols"] // M
        scale = np.where(kind > 0, self.h[np.minimum(ii, N)] * g.dy, scale)
        self.B = _coo(o["B_rows"], o["B_cols"], o["B_vals"] * scale, (N * M, g.nz))
        self.dxi = dxi
        self.S3 = np.hypot(1.0, self.sn) ** 3

    def viscous(self, mu):
        Wc, WC = sp.diags(self.wc), sp.diags(self.wC)
        return mu * (self.g1.T @ Wc @ self.g1 + self.g2.T @ WC @ self.g2
                     + self.g3.T @ WC @ self.g3 + self.g4.T @ Wc @ self.g4)

    def slip(self, g, params):
        d = np.zeros(g.nX)
        d[g.u1b(0):g.u1b(0) + g.N + 1] = self.dxi / params.beta_b
        d[g.u1t(0):g.u1t(0) + g.N + 1] = self.dxi * self.S3 / params.beta_s
        return sp.diags(d)

    def convection(self, g, c1, c2):
        o = g.ops
        W1, W2 = sp.diags(self.wc * c1), sp.diags(self.wc * c2)
        Nc = (o["I1c"].T @ (W1 @ self.g1 + W2 @ o["C2c"] @ self.g2)
              + o["I2c"].T @ (W1 @ o["C2c"] @ self.g3 + W2 @ self.g4))
        return 0.5 * (Nc - Nc.T)


@dataclass(frozen=True, eq=False)
class FluidState:
    """Velocity and pressure on the staggered grid.

    ``h`` is the height profile the state lives on and ``r_dyn`` the inertial
    and convective part of the interface reaction from the step that produced
    the state (zero for states not produced by a step).
    """

    u1c: np.ndarray
    u1b: np.ndarray
    u1t: np.ndarray
    u2: np.ndarray
    p: np.ndarray
    h: np.ndarray
    L: float
    t: float = 0.0
    lam: float = 0.0
    r_dyn: np.ndarray | None = None
    reaction: np.ndarray | None = None

    def __post_init__(self):
        for k in ("u1c", "u1b", "u1t", "u2", "p", "h"):
            a = np.array(getattr(self, k), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, k, a)
        if self.r_dyn is None:
            object.__setattr__(self, "r_dyn", np.zeros(self.p.shape[0]))

    @property
    def grid(self):
        N, M = self.p.shape
        return fluid_grid(N, M, self.L)

    def vector(self):
        return np.concatenate([self.u1c.ravel(), self.u1b, self.u1t, self.u2.ravel()])

    @classmethod
    def from_vector(cls, g, X, p, h, t, lam=0.0, r_dyn=None, reaction=None):
        N, M = g.N, g.M
        return cls(X[: g.n1].reshape(N + 1, M), X[g.u1b(0):g.u1b(0) + N + 1],
                   X[g.u1t(0):g.u1t(0) + N + 1], X[g.u2(0, 0):].reshape(N, M + 1),
                   np.asarray(p).reshape(N, M), h, g.L, t, lam, r_dyn, reaction)


@dataclass(frozen=True)
class TractionProfile:
    """Load on the plate per structure node, ``-S (sigma n) . e2``."""

    f: np.ndarray


def rest_fluid(N, M, L, H, t=0.0):
    return FluidState(np.zeros((N + 1, M)), np.zeros(N + 1), np.zeros(N + 1),
                      np.zeros((N, M + 1)), np.zeros((N, M)), np.full(N + 1, float(H)),
                      float(L), t)


def _z_from_X(g, geo, X):
    """Recover z (velocity blocks plus flux velocities) from physical X."""
    nu = g.n1 + 2 * (g.N + 1)
    z = np.zeros(g.nz)
    z[:nu] = X[:nu]
    u2 = X[g.u2(0, 0):]
    ubar = g.ops["Abar"] @ X
    W = u2 - g.yn[g.ops["J2"]] * geo.sm[g.ops["I2"]] * ubar
    W = W.reshape(g.N, g.M + 1)[:, 1:].ravel()
    z[g.ops["zW"]] = W
    return z


def _solve(K, B, e, rhs, cont_rhs, eps):
    nzf = K.shape[0]
    nc = B.shape[0]
    blocks = [[K, -B.T], [-B, None]]
    rhs_full = [rhs, cont_rhs]
    if np.isfinite(eps):
        ec = sp.csr_matrix(e.reshape(-1, 1))
        blocks = [[K, -B.T, ec], [-B, None, None], [ec.T, None, sp.csr_matrix([[-eps]])]]
        rhs_full.append([1.0])
    A = sp.bmat(blocks, format="csc")
    sol = spsolve(A, np.concatenate(rhs_full))
    res = np.linalg.norm(A @ sol - np.concatenate(rhs_full))
    z = sol[:nzf]
    p = sol[nzf:nzf + nc]
    lam = float(sol[-1]) if np.isfinite(eps) else 0.0
    return z, p, lam, res


def fluid_step(fs, amap, bc, eps, dt, params, stress_sign=1.0):
    """Advance the fluid one step on the geometry ``amap``.

    Parameters
    ----------
    fs : FluidState
        State at the old time, living on the height ``fs.h``.
    amap : AleMap
        New geometry; ``amap.ht`` is the interface velocity over the step.
    bc : tuple of float
        ``(P_in, P_out)`` total pressures.
    eps : float
        Flux penalty; ``inf`` removes the flux target.
    dt : float
    params : PhysicalParams
    stress_sign : float
        Test hook; ``-1`` flips the viscous operator.

    Returns
    -------
    FluidState
    """
    g = fs.grid
    geo = _geo(g, amap)
    old = _geo(g, build_map(fs.h, np.zeros_like(fs.h), g.L)) if not np.array_equal(
        fs.h, amap.h) else geo
    X0 = fs.vector()
    # lagged advecting velocity relative to the moving grid
    o = g.ops
    c1 = o["I1c"] @ X0
    c2 = o["I2c"] @ X0 - np.repeat(geo.ht_mid, g.M) * np.tile(g.yc, g.N)
    conv = geo.convection(g, c1, c2)
    Mt = sp.diags(0.5 * (geo.mass + old.mass) / dt)
    KX = Mt + stress_sign * geo.viscous(params.mu) + geo.slip(g, params) + conv
    Fp = np.zeros(g.nX)
    P_in, P_out = bc
    Fp[g.u1c(0, np.arange(g.M))] = P_in * geo.h[0] * g.dy
    Fp[g.u1c(g.N, np.arange(g.M))] = -P_out * geo.h[-1] * g.dy
    rhsX = old.mass * X0 / dt + Fp
    T = geo.T
    K = (T.T @ KX @ T).tocsr()
    rhs = T.T @ rhsX
    free, top = o["free"], o["Wtop"]
    vt = geo.ht_mid
    e = np.zeros(g.nz)
    e[g.u1c(g.N, np.arange(g.M))] = geo.h[-1] * g.dy
    Bf = geo.B[:, free]
    Bt = geo.B[:, top]
    z_f, p, lam, _ = _solve(K[free][:, free], Bf, e[free],
                            rhs[free] - K[free][:, top] @ vt, Bt @ vt, eps)
    z = np.zeros(g.nz)
    z[free] = z_f
    z[top] = vt
    X = T @ z
    # inertial + convective part of the reaction on the interface rows
    dyn = (T.T @ ((Mt + conv) @ X - rhsX))[top]
    R = (K @ z - rhs)[top] - Bt.T @ p
    return FluidState.from_vector(g, X, p, amap.h, fs.t + dt, lam, dyn, R)


def interface_traction(fs, amap, params, stress_sign=1.0):
    """Plate load from the discrete interface reaction.

    The reaction on the interface flux rows is the generalized force the
    plate exerts on the fluid; its negative, spread to the nodes, is the
    load. A uniform pressure ``c`` at rest gives ``f = c``.
    """
    g = fs.grid
    if fs.reaction is not None and stress_sign == 1.0 and np.array_equal(fs.h, amap.h):
        R = fs.reaction
        f = np.zeros(g.N + 1)
        f[1:-1] = -(R[:-1] + R[1:]) / (2 * g.dx)
        return TractionProfile(f)
    geo = _geo(g, amap)
    X = fs.vector()
    top = g.ops["Wtop"]
    visc = (geo.T.T @ ((stress_sign * geo.viscous(params.mu) + geo.slip(g, params)) @ X))[top]
    R = visc + fs.r_dyn - (geo.B[:, top].T @ fs.p.ravel())
    f = np.zeros(g.N + 1)
    f[1:-1] = -(R[:-1] + R[1:]) / (2 * g.dx)
    return TractionProfile(f)


def boundary_fluxes(fs, amap):
    """``(q_in, q_out, q_interface)``; the last is the trapezoidal integral of h_t."""
    g = fs.grid
    q_in = float(fs.u1c[0].sum() * fs.h[0] * g.dy)
    q_out = float(fs.u1c[-1].sum() * fs.h[-1] * g.dy)
    q_if = float(amap.ht_mid.sum() * g.dx)
    return q_in, q_out, q_if


def divergence(fs, amap):
    """Per-cell net outward flux."""
    g = fs.grid
    geo = _geo(g, amap)
    return (geo.B @ _z_from_X(g, geo, fs.vector())).reshape(g.N, g.M)


def fluid_kinetic_energy(fs):
    g = fs.grid
    geo = _geo(g, build_map(fs.h, np.zeros_like(fs.h), g.L))
    X = fs.vector()
    return 0.5 * float(geo.mass @ X**2)


def fluid_dissipation_rates(fs, amap, params):
    """Viscous, bottom-slip and interface-slip dissipation rates.

    Returns
    -------
    (float, float, float)
        ``mu |grad u|^2``, ``(1/beta_b) |u . tau_b|^2`` and
        ``(1/beta_s) |(u - v) . tau|^2`` integrated over the domain/walls.
    """
    g = fs.grid
    geo = _geo(g, amap)
    X = fs.vector()
    visc = params.mu * float(geo.wc @ (geo.g1 @ X) ** 2 + geo.wC @ (geo.g2 @ X) ** 2
                             + geo.wC @ (geo.g3 @ X) ** 2 + geo.wc @ (geo.g4 @ X) ** 2)
    bot = float(geo.dxi @ fs.u1b**2) / params.beta_b
    top = float((geo.dxi * geo.S3) @ fs.u1t**2) / params.beta_s
    return visc, bot, top


def cell_center_fields(fs, amap):
    """Velocity, pressure and velocity gradient at the physical cell centres.

    Returns
    -------
    dict
        ``x, y, w`` (quadrature weights), ``u1, u2, p`` and the gradient
        entries ``d1x, d1y, d2x, d2y`` as ``(N, M)`` arrays.
    """
    g = fs.grid
    geo = _geo(g, amap)
    o = g.ops
    X = fs.vector()
    shp = (g.N, g.M)
    xc = (np.arange(g.N) + 0.5) * g.dx
    return {
        "x": np.repeat(xc, g.M).reshape(shp),
        "y": (geo.hm[:, None] * g.yc[None, :]),
        "w": geo.wc.reshape(shp),
        "u1": (o["I1c"] @ X).reshape(shp),
        "u2": (o["I2c"] @ X).reshape(shp),
        "p": fs.p.copy(),
        "d1x": (geo.g1 @ X).reshape(shp),
        "d1y": (o["C2c"] @ (geo.g2 @ X)).reshape(shp),
        "d2x": (o["C2c"] @ (geo.g3 @ X)).reshape(shp),
        "d2y": (geo.g4 @ X).reshape(shp),
    }


def slip_poiseuille(y, H, params, G=None, flux=None):
    """Steady profile of ``mu u'' = -G`` with Navier slip on both walls.

    Walls: ``u(0) = beta_b mu u'(0)`` and ``-u(H) = beta_s mu u'(H)``. Give
    either the gradient ``G`` or the target ``flux``.
    """
    mu, bs, bb = params.mu, params.beta_s, params.beta_b

    def profile(Gv):
        A = Gv * (H**2 / (2 * mu) + bs * H) / (H + mu * (bb + bs))
        B = bb * mu * A
        return A, B

    if G is None:
        A1, B1 = profile(1.0)
        q1 = -H**3 / (6 * mu) + A1 * H**2 / 2 + B1 * H
        G = flux / q1
    A, B = profile(G)
    y = np.asarray(y, dtype=float)
    return -G / (2 * mu) * y**2 + A * y + B


def initial_fluid(descriptor, amap, params, n_y):
    """Initial field projected onto the discretely divergence-free space.

    The projection minimizes the kinetic-energy distance plus a grid-scaled
    viscous term (which fixes the massless wall values) subject to the
    discrete continuity equation with the interface moving at ``amap.ht``.
    """
    N = amap.h.size - 1
    g = fluid_grid(N, n_y, amap.L)
    geo = _geo(g, amap)
    X = np.zeros(g.nX)
    words = descriptor.split()
    if words[0] == "uniform":
        X[: g.n1] = float(words[1])
    elif words[0] == "poiseuille":
        for i in range(N + 1):
            X[g.u1c(i, 0):g.u1c(i, 0) + g.M] = slip_poiseuille(g.yc * amap.h[i], amap.h[i],
                                                              params, flux=1.0)
    if not X.any() and not amap.ht.any():
        return FluidState.from_vector(g, X, np.zeros(N * n_y), amap.h, 0.0)
    delta = g.dx**2 + g.dy**2
    KX = sp.diags(geo.mass) + delta * geo.viscous(1.0) + delta * geo.slip(g, params)
    T = geo.T
    K = (T.T @ KX @ T).tocsr()
    rhs = T.T @ (geo.mass * X)
    o = g.ops
    free, top = o["free"], o["Wtop"]
    vt = geo.ht_mid
    z_f, _, _, _ = _solve(K[free][:, free], geo.B[:, free], None,
                          rhs[free] - K[free][:, top] @ vt, geo.B[:, top] @ vt, np.inf)
    z = np.zeros(g.nz)
    z[free] = z_f
    z[top] = vt
    return FluidState.from_vector(g, T @ z, np.zeros(N * n_y), amap.h, 0.0)


def grid_snapshot(fs, amap):
    """Rows ``x, y, u1, u2, p`` at the physical cell centres."""
    c = cell_center_fields(fs, amap)
    return np.column_stack([c[k].ravel() for k in ("x", "y", "u1", "u2", "p")])


def write_snapshot(path, fs, amap):
    rows = grid_snapshot(fs, amap)
    header = f"t = {fs.t!r}\nx y u1 u2 p"
    np.savetxt(path, rows, header=header, fmt="%.17g")
