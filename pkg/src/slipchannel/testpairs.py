"""Analytic test functions for the contact and regularity arguments.

Contact pair
    Stream function ``psi = h(x) Phi(x, y/h(x))`` with the cubic slip profile
    ``Phi = a xi^3 + b xi^2 + c xi`` whose coefficients depend on ``x``
    through ``lambda_s = h/beta_s`` and ``lambda_b = h/beta_b``. The fluid
    test field is ``phi = (-psi_y, psi_x)`` and the plate test function is
    ``eta = h_x``.

Regularity pair
    ``psibar = h_x Psi(y/h)`` with ``Psi = -2 xi^3 + 3 xi^2`` and
    ``etabar = h_xx``.

Both fields are built with closed-form derivatives so that their divergence
vanishes identically.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import simpson, trapezoid
from scipy.interpolate import make_interp_spline

from .fluid import FluidState, cell_center_fields
from .geometry import build_map, interface_frame

__all__ = [
    "SlipProfileCoeffs",
    "TestPair",
    "SplineHeight",
    "FunctionHeight",
    "lambda_coeffs",
    "cubic_coeffs",
    "phi_profile",
    "contact_testpair",
    "regularity_testpair",
    "testpair_checks",
    "reduced_energy",
    "weakform_terms",
    "contradiction_diagnostic",
    "regularity_diagnostic",
    "PSI",
]

PSI = Polynomial([0.0, 0.0, 3.0, -2.0])


def lambda_coeffs(h, beta_s, beta_b):
    """Dimensionless wall numbers ``(h/beta_s, h/beta_b)``."""
    h = np.asarray(h, dtype=float)
    return h / beta_s, h / beta_b


@dataclass(frozen=True)
class SlipProfileCoeffs:
    lambda_s: np.ndarray
    lambda_b: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    D: np.ndarray

    def robin_top(self):
        return 6 * self.a + 2 * self.b + self.lambda_s * (3 * self.a + 2 * self.b + self.c)

    def robin_bottom(self):
        return 2 * self.b - self.lambda_b * self.c


def cubic_coeffs(lambda_s, lambda_b):
    """Coefficients of the cubic slip profile.

    ``D = ls lb + 4 (ls + lb) + 12``, ``a = -2 (ls + lb + ls lb)/D``,
    ``b = 3 lb (ls + 2)/D`` and ``c = 6 (ls + 2)/D``. Finite ``inf`` is
    accepted and returns the no-slip limit ``(-2, 3, 0)``.
    """
    ls = np.asarray(lambda_s, dtype=float)
    lb = np.asarray(lambda_b, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        D = ls * lb + 4 * (ls + lb) + 12
        a = -2 * (ls + lb + ls * lb) / D
        b = 3 * lb * (ls + 2) / D
        c = 6 * (ls + 2) / D
    both = np.isinf(ls) & np.isinf(lb)
    if np.any(both):
        a, b, c = (np.where(both, v, w) for v, w in zip((-2.0, 3.0, 0.0), (a, b, c)))
    return SlipProfileCoeffs(ls, lb, a, b, c, D)


def phi_profile(xi, coeffs):
    """``(Phi, Phi_xi, Phi_xixi)`` of the cubic profile at ``xi``."""
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    xi = np.asarray(xi, dtype=float)
    return (a * xi**3 + b * xi**2 + c * xi, 3 * a * xi**2 + 2 * b * xi + c, 6 * a * xi + 2 * b)


class _RationalInH:
    """Value and first two ``h``-derivatives of ``num(h)/den(h)``."""

    def __init__(self, num, den):
        self.n, self.d = num, den
        self.n1, self.n2 = num.deriv(1), num.deriv(2)
        self.d1, self.d2 = den.deriv(1), den.deriv(2)

    def __call__(self, h):
        n, n1, n2 = self.n(h), self.n1(h), self.n2(h)
        d, d1, d2 = self.d(h), self.d1(h), self.d2(h)
        f = n / d
        f1 = (n1 * d - n * d1) / d**2
        f2 = (n2 * d**2 - 2 * n1 * d1 * d - n * d2 * d + 2 * n * d1**2) / d**3
        return f, f1, f2


def _coefficient_functions(beta_s, beta_b):
    s, t = 1.0 / beta_s, 1.0 / beta_b
    D = Polynomial([12.0, 4 * (s + t), s * t])
    return (_RationalInH(Polynomial([0.0, -2 * (s + t), -2 * s * t]), D),
            _RationalInH(Polynomial([0.0, 6 * t, 3 * s * t]), D),
            _RationalInH(Polynomial([12.0, 6 * s]), D))


def _clamped_quintic(x, f):
    """Quintic interpolant with zero end slope.

    The end curvature ``2 (f_1 - f_0)/dx^2`` is the second difference under
    the even reflection used by the clamped plate, so the bending moment at
    the wall matches the one the plate solver sees.
    """
    dx = x[1] - x[0]
    left = [(1, 0.0), (2, 2.0 * float(f[1] - f[0]) / dx**2)]
    right = [(1, 0.0), (2, 2.0 * float(f[-2] - f[-1]) / dx**2)]
    return make_interp_spline(x, f, k=5, bc_type=(left, right))


class SplineHeight:
    """Clamped quintic-spline interpolant of nodal height and velocity.

    Quintic so that the regularity pair, which needs ``h_xxx``, is smooth.
    """

    def __init__(self, x, h, v=None):
        self.x = np.asarray(x, dtype=float)
        h = np.asarray(h, dtype=float)
        self.H = float(h[0])
        self.L = float(self.x[-1])
        self._h = _clamped_quintic(self.x, h)
        self._v = _clamped_quintic(self.x, np.zeros_like(h) if v is None else np.asarray(v, float))

    def h(self, x, k=0):
        return self._h(x, nu=k)

    def ht(self, x, k=0):
        return self._v(x, nu=k)


class FunctionHeight:
    """Height given by callables ``[h, h_x, h_xx, h_xxx]`` (and optional ``[h_t, h_tx]``)."""

    def __init__(self, funcs, L, H, tfuncs=None):
        self.funcs, self.L, self.H = funcs, float(L), float(H)
        self.tfuncs = tfuncs

    def h(self, x, k=0):
        return np.asarray(self.funcs[k](np.asarray(x, dtype=float)), dtype=float) * np.ones_like(x, dtype=float)

    def ht(self, x, k=0):
        if self.tfuncs is None:
            return np.zeros_like(np.asarray(x, dtype=float))
        return np.asarray(self.tfuncs[k](np.asarray(x, dtype=float)), dtype=float) * np.ones_like(x, dtype=float)


@dataclass(frozen=True, eq=False)
class TestPair:
    """Fluid test field ``phi = curl psi`` and plate test function ``eta``.

    The field is evaluated pointwise through :meth:`fields`, which returns
    the stream function, its ``y``-derivative, both components and all four
    first derivatives. ``perturb`` adds a smooth fault to ``phi_2`` (used to
    exercise the identity report).
    """

    __test__ = False

    kind: str
    height: object
    params: object = None
    perturb: float = 0.0
    _cf: tuple = field(default=None, repr=False)

    def eta(self, x, k=0):
        """Plate test function (``k``-th x-derivative)."""
        off = 1 if self.kind == "contact" else 2
        return self.height.h(x, off + k)

    def fields(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        hp = self.height
        h, hx, hxx = hp.h(x), hp.h(x, 1), hp.h(x, 2)
        xi = y / h
        xix = -xi * hx / h
        if self.kind == "contact":
            out = self._contact(x, h, hx, hxx, xi, xix)
        else:
            out = self._regularity(x, h, hx, hxx, hp.h(x, 3), xi, xix)
        if self.perturb:
            bump = self.perturb * np.sin(np.pi * x / hp.L) * xi
            out["phi2"] = out["phi2"] + bump
            out["d2y"] = out["d2y"] + self.perturb * np.sin(np.pi * x / hp.L) / h
        return out

    def _contact(self, x, h, hx, hxx, xi, xix):
        fa, fb, fc = self._cf
        (a, a1, a2), (b, b1, b2), (c, c1, c2) = fa(h), fb(h), fc(h)
        ax, bx, cx = a1 * hx, b1 * hx, c1 * hx
        axx, bxx, cxx = a2 * hx**2 + a1 * hxx, b2 * hx**2 + b1 * hxx, c2 * hx**2 + c1 * hxx
        P = a * xi**3 + b * xi**2 + c * xi
        Pq = 3 * a * xi**2 + 2 * b * xi + c
        Pqq = 6 * a * xi + 2 * b
        Px = ax * xi**3 + bx * xi**2 + cx * xi
        Pxx = axx * xi**3 + bxx * xi**2 + cxx * xi
        Pqx = 3 * ax * xi**2 + 2 * bx * xi + cx
        psi = h * P
        phi1 = -Pq
        phi2 = hx * P + h * Px - xi * hx * Pq
        d1x = -(Pqx + Pqq * xix)
        d1y = -Pqq / h
        d2y = Pqx - xi * hx * Pqq / h
        d2x = (hxx * P + hx * (Px + Pq * xix)
               + hx * Px + h * (Pxx + Pqx * xix)
               - (xix * hx * Pq + xi * hxx * Pq + xi * hx * (Pqx + Pqq * xix)))
        return {"psi": psi, "psi_y": Pq, "phi1": phi1, "phi2": phi2,
                "d1x": d1x, "d1y": d1y, "d2x": d2x, "d2y": d2y}

    def _regularity(self, x, h, hx, hxx, hxxx, xi, xix):
        S0, S1, S2 = PSI(xi), PSI.deriv(1)(xi), PSI.deriv(2)(xi)
        psi = hx * S0
        phi1 = -hx * S1 / h
        phi2 = hxx * S0 - xi * hx**2 * S1 / h
        d1y = -hx * S2 / h**2
        d1x = -hxx * S1 / h + xi * hx**2 * S2 / h**2 + hx**2 * S1 / h**2
        d2y = (hxx * S1 - hx**2 * S1 / h - xi * hx**2 * S2 / h) / h
        d2x = (hxxx * S0 + hxx * S1 * xix
               - (xix * hx**2 * S1 / h + xi * 2 * hx * hxx * S1 / h
                  + xi * hx**2 * S2 * xix / h - xi * hx**3 * S1 / h**2))
        return {"psi": psi, "psi_y": hx * S1 / h, "phi1": phi1, "phi2": phi2,
                "d1x": d1x, "d1y": d1y, "d2x": d2x, "d2y": d2y}


def _height_of(s, L):
    if isinstance(s, (SplineHeight, FunctionHeight)):
        return s
    h = np.asarray(s.h)
    if np.any(h <= 0):
        raise ValueError("contact reached: non-positive height")
    return SplineHeight(np.linspace(0.0, L, h.size), h, np.asarray(s.v))


def contact_testpair(s, params, perturb=0.0):
    """Contact pair built on the height of ``s``.

    ``s`` is a :class:`StructureState` (interpolated by a clamped spline) or
    a height object.
    """
    hp = _height_of(s, params.L)
    return TestPair("contact", hp, params, perturb, _coefficient_functions(params.beta_s,
                                                                           params.beta_b))


def regularity_testpair(s, L=1.0, perturb=0.0):
    """Regularity pair built on the height of ``s``."""
    return TestPair("regularity", _height_of(s, L), None, perturb)


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    error: float
    tol: float
    ok: bool | None = None

    @property
    def passed(self):
        if self.ok is not None:
            return bool(self.ok)
        return bool(self.error <= self.tol)


@dataclass(frozen=True)
class CheckReport:
    checks: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def failing(self):
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name):
        return next(c for c in self.checks if c.name == name)

    def text(self):
        return "\n".join(f"{'PASS' if c.passed else 'FAIL'} {c.name}: error {c.error:.3e} "
                         f"(tol {c.tol:.1e})" for c in self.checks)


def testpair_checks(tp, n=41, tol=1e-10, fd_step=1e-4):
    """Verify the construction identities of a test pair.

    Samples ``n`` interface nodes and an ``n x n`` interior lattice. The
    numeric divergence uses central differences of size ``fd_step`` and is
    held to ``1e3 * fd_step**2``.
    """
    hp = tp.height
    L, H = hp.L, hp.H
    x = np.linspace(0.0, L, n)
    h = hp.h(x)
    hx = hp.h(x, 1)
    fr = interface_frame(hx)
    eta = tp.eta(x)
    top = tp.fields(x, h)
    bot = tp.fields(x, np.zeros_like(x))
    checks = []
    scale = 1.0 + float(np.abs(top["phi1"]).max() + np.abs(top["phi2"]).max())

    def add(name, err, t=tol):
        checks.append(IdentityCheck(name, float(np.max(np.abs(err))), t * scale))

    X, XI = np.meshgrid(np.linspace(0.0, L, n)[1:-1], np.linspace(0, 1, n)[1:-1],
                        indexing="ij")
    Y = XI * hp.h(X)
    F = tp.fields(X, Y)
    add("divergence", F["d1x"] + F["d2y"])
    add("kinematic match", (top["phi1"] - 0.0) * fr.n[:, 0] + (top["phi2"] - eta) * fr.n[:, 1])
    add("bottom impermeability", bot["phi2"])
    jump_top = (top["phi1"] * fr.tau[:, 0] + (top["phi2"] - eta) * fr.tau[:, 1])
    if tp.kind == "contact":
        add("tangential jump top", jump_top + top["psi_y"] * fr.S)
        add("tangential jump bottom", bot["phi1"] + bot["psi_y"])
        g, w = np.polynomial.legendre.leggauss(8)
        yq = 0.5 * H * (g + 1)
        inlet = 0.5 * H * np.sum(w * tp.fields(np.zeros_like(yq), yq)["phi1"])
        add("inlet integral", inlet + H)
        xs = np.linspace(0.0, L, 4001)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(xs) * (tp.eta(xs)[1:]
                                                                    + tp.eta(xs)[:-1]))])
        stream = tp.fields(xs, hp.h(xs))["psi"] - H - cum
        checks.append(IdentityCheck("interface stream", float(np.abs(stream).max()),
                                    max(tol, 10 * (xs[1] - xs[0]) ** 2) * scale))
    else:
        add("no-slip match", np.hypot(top["phi1"], top["phi2"] - eta))
        yy = np.linspace(0.0, H, n)
        ends = np.concatenate([
            np.hypot(*(tp.fields(np.zeros_like(yy), yy)[k] for k in ("phi1", "phi2"))),
            np.hypot(*(tp.fields(np.full_like(yy, L), yy)[k] for k in ("phi1", "phi2"))),
            np.hypot(bot["phi1"], bot["phi2"])])
        add("vanishing inlet outlet bottom", ends)
    def numdiv(d):
        nd = ((tp.fields(X + d, Y)["phi1"] - tp.fields(X - d, Y)["phi1"])
              + (tp.fields(X, Y + d)["phi2"] - tp.fields(X, Y - d)["phi2"])) / (2 * d)
        return float(np.abs(nd).max())

    # second order: either already negligible or shrinking about 4x on halving
    e1, e2 = numdiv(fd_step), numdiv(fd_step / 2)
    t_abs = 1e3 * fd_step**2 * scale
    checks.append(IdentityCheck("numeric divergence", e2, t_abs,
                                ok=bool(e2 <= t_abs or e1 >= 3.0 * e2)))
    return CheckReport(tuple(checks))


def reduced_energy(y, psi_y, psi_yy, alpha_s, alpha_b):
    """``int_0^h |psi''|^2 + alpha_s |psi'(h)|^2 + alpha_b |psi'(0)|^2``.

    ``y`` samples ``[0, h]``; ``psi_y`` and ``psi_yy`` are the first and
    second derivatives at those samples.
    """
    psi_y = np.asarray(psi_y, dtype=float)
    psi_yy = np.asarray(psi_yy, dtype=float)
    return float(simpson(psi_yy**2, x=y) + alpha_s * psi_y[-1] ** 2 + alpha_b * psi_y[0] ** 2)


# --------------------------------------------------------------------- weak form

TERM_NAMES = ("I1", "I2", "I3", "I4", "I5", "I6", "I7")


def _rebuild(rec, cfg):
    p = cfg.params
    amap = build_map(rec["h"], rec["ht"], p.L)
    fs = FluidState(rec["u1c"], rec["u1b"], rec["u1t"], rec["u2"], rec["p"], rec["h"],
                    p.L, rec["t"], rec["lam"])
    return amap, fs


def _integrands(rec, cfg, tp, tp_prev, tp_next, t_prev, t_next):
    """Instantaneous integrands of every weak-form term for one stored state."""
    p = cfg.params
    amap, fs = _rebuild(rec, cfg)
    c = cell_center_fields(fs, amap)
    w = c["w"]
    F = tp.fields(c["x"], c["y"])
    u1, u2 = c["u1"], c["u2"]
    x = amap.x
    dxi = np.full(x.size, amap.dx)
    dxi[[0, -1]] *= 0.5
    eta = tp.eta(x)
    v = np.asarray(rec["v"])
    J1 = float(np.sum(w * (u1 * F["phi1"] + u2 * F["phi2"])) + dxi @ (v * eta))
    Fp = tp_prev.fields(c["x"], c["y"])
    Fn = tp_next.fields(c["x"], c["y"])
    dt_span = t_next - t_prev
    if dt_span > 0:
        dphi1 = (Fn["phi1"] - Fp["phi1"]) / dt_span
        dphi2 = (Fn["phi2"] - Fp["phi2"]) / dt_span
    else:
        dphi1 = dphi2 = np.zeros_like(u1)
    J2 = float(np.sum(w * (u1 * dphi1 + u2 * dphi2)))
    J3 = p.mu * float(np.sum(w * (c["d1x"] * F["d1x"] + c["d1y"] * F["d1y"]
                                  + c["d2x"] * F["d2x"] + c["d2y"] * F["d2y"])))
    adv_u = ((u1 * c["d1x"] + u2 * c["d1y"]) * F["phi1"]
             + (u1 * c["d2x"] + u2 * c["d2y"]) * F["phi2"])
    adv_phi = ((u1 * F["d1x"] + u2 * F["d1y"]) * u1 + (u1 * F["d2x"] + u2 * F["d2y"]) * u2)
    # interface values: u1 on the wall nodes, u2 from the kinematic condition
    u1t = np.asarray(rec["u1t"])
    u2t = v + amap.slope * u1t
    Ft = tp.fields(x, amap.h)
    udotphi = u1t * Ft["phi1"] + u2t * Ft["phi2"]
    J4 = 0.5 * float(np.sum(w * (adv_u - adv_phi))) - 0.5 * float(dxi @ (udotphi * v))
    Fb = tp.fields(x, np.zeros_like(x))
    J5 = float(dxi @ (np.asarray(rec["u1b"]) * Fb["phi1"])) / p.beta_b
    fr = interface_frame(amap.slope)
    jump_u = fr.S * u1t
    jump_phi = Ft["phi1"] * fr.tau[:, 0] + (Ft["phi2"] - eta) * fr.tau[:, 1]
    J6 = float(dxi @ (fr.S * jump_u * jump_phi)) / p.beta_s
    xs = np.linspace(0.0, p.L, 8 * (x.size - 1) + 1)
    hp = tp.height
    eta_t = ((tp_next.eta(xs) - tp_prev.eta(xs)) / dt_span if dt_span > 0
             else np.zeros_like(xs))
    # eta_x need not vanish at the clamped ends: keep the wall moment term
    hxx, ex = hp.h(xs, 2), tp.eta(xs, 1)
    moment = p.alpha * (hxx[-1] * ex[-1] - hxx[0] * ex[0])
    J7 = float(trapezoid(p.alpha * hxx * tp.eta(xs, 2) + p.gamma * hp.ht(xs, 1) * ex
                         - hp.ht(xs) * eta_t, xs)) - moment
    g, wq = np.polynomial.legendre.leggauss(8)
    yq = 0.5 * p.H * (g + 1)
    flux_in = 0.5 * p.H * np.sum(wq * tp.fields(np.zeros_like(yq), yq)["phi1"])
    flux_out = 0.5 * p.H * np.sum(wq * tp.fields(np.full_like(yq, p.L), yq)["phi1"])
    pres = rec["P_in"] * flux_in - rec["P_out"] * flux_out
    pen = rec["lam"] * flux_out
    return np.array([J1, J2, J3, J4, J5, J6, J7]), pen, pres


def weakform_terms(stored, cfg, producer=None):
    """Weak-form terms of the stored trajectory at every stored time.

    Parameters
    ----------
    stored : list of dict
        States kept by the run (at least three).
    cfg : SimulationConfig
    producer : callable, optional
        ``producer(StructureState-like, params) -> TestPair``; defaults to
        the contact pair.

    Returns
    -------
    dict
        ``t`` (stored times) and, per time ``T``, the cumulative terms
        ``I1..I7``, ``I_pen`` (outlet penalty pairing), ``lhs`` and the closure
        residual, all scaled by ``-1/H``.
    """
    if len(stored) < 3:
        raise ValueError(f"insufficient stored cadence: {len(stored)} states, need >= 3")
    from .plate import StructureState

    p = cfg.params
    producer = producer or contact_testpair
    t = np.array([r["t"] for r in stored])
    pairs = [producer(StructureState(r["h"], r["v"], r["t"]), p) for r in stored]
    K = len(stored)
    J = np.zeros((K, 7))
    pen = np.zeros(K)
    pres = np.zeros(K)
    for k in range(K):
        a, b = max(k - 1, 0), min(k + 1, K - 1)
        J[k], pen[k], pres[k] = _integrands(stored[k], cfg, pairs[k], pairs[a], pairs[b],
                                            t[a], t[b])

    def cumtrap(f):
        return np.concatenate([[0.0], np.cumsum(0.5 * np.diff(t) * (f[1:] + f[:-1]))])

    scale = -1.0 / p.H
    out = {"t": t}
    out["I1"] = scale * (J[:, 0] - J[0, 0])
    out["I2"] = scale * -cumtrap(J[:, 1])
    for i in range(2, 7):
        out[TERM_NAMES[i]] = scale * cumtrap(J[:, i])
    out["I_pen"] = scale * cumtrap(pen)
    out["lhs"] = scale * cumtrap(pres)
    total = sum(out[nm] for nm in TERM_NAMES) + out["I_pen"]
    out["closure"] = total - out["lhs"]
    return out


def _fit_exponent(T, vals):
    T, vals = np.asarray(T, float), np.abs(np.asarray(vals, float))
    if np.any(vals <= 0) or np.any(T <= 0):
        return float("nan")
    return float(np.polyfit(np.log(T), np.log(vals), 1)[0])


def contradiction_diagnostic(stored, cfg, contact_time=None, horizons=None):
    """Growth of the pressure side and of the term sum over three horizons.

    The horizons are the last stored time ``T`` strictly before
    ``contact_time`` (the last stored time without contact) and the stored
    times nearest ``T/2`` and ``T/4``.

    Returns
    -------
    dict
        Per-horizon terms, fitted exponents, implied crossing horizon and a
        ``degenerate`` flag when the pressure side vanishes.
    """
    terms = weakform_terms(stored, cfg)
    t = terms["t"]
    if horizons is None:
        pre = t[t < contact_time] if contact_time is not None else t
        T = pre[-1] if pre.size else t[-1]
        horizons = [T / 4, T / 2, T]
    idx = [int(np.argmin(np.abs(t - h))) for h in horizons]
    rows = []
    for k in idx:
        row = {"T": float(t[k])}
        for nm in TERM_NAMES + ("I_pen", "lhs", "closure"):
            row[nm] = float(terms[nm][k])
        row["sum_abs_I"] = float(sum(abs(row[nm]) for nm in TERM_NAMES))
        rows.append(row)
    Ts = [r["T"] for r in rows]
    lhs = [r["lhs"] for r in rows]
    sI = [r["sum_abs_I"] for r in rows]
    degenerate = all(abs(v) < 1e-14 for v in lhs + sI) or len(set(Ts)) < 3
    e_lhs = float("nan") if degenerate else _fit_exponent(Ts, lhs)
    e_sum = float("nan") if degenerate else _fit_exponent(Ts, sI)
    cross = float("nan")
    if not degenerate and np.isfinite(e_lhs) and np.isfinite(e_sum) and e_lhs != e_sum:
        A = abs(lhs[-1]) / Ts[-1] ** e_lhs
        B = sI[-1] / Ts[-1] ** e_sum
        cross = float((B / A) ** (1.0 / (e_lhs - e_sum)))
    return {"horizons": rows, "exponent_lhs": e_lhs, "exponent_sum_I": e_sum,
            "crossing_horizon": cross, "contact_time": contact_time,
            "degenerate": bool(degenerate)}


def regularity_diagnostic(t, min_h, h3, H, fractions=(0.1, 0.05, 0.025)):
    """``int |h_xxx|^2 dt`` over the initial run segment with ``min h >= delta``.

    Returns a list of ``(delta, value, finite)`` for ``delta = fraction * H``.
    """
    t, min_h, h3 = (np.asarray(a, float) for a in (t, min_h, h3))
    out = []
    for fr in fractions:
        below = np.flatnonzero(min_h < fr * H)
        end = below[0] if below.size else t.size
        seg = slice(0, end)
        val = float(trapezoid(h3[seg], t[seg])) if end > 1 else 0.0
        out.append((fr * H, val, bool(np.isfinite(val))))
    return out
