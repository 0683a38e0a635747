"""Physical parameters, pressure signals and run configuration.

The configuration file is an INI-style document with the sections
``[params]``, ``[pressure]``, ``[grid]``, ``[time]``, ``[initial]`` and
``[output]``. Arrays are written as whitespace-separated numbers.

Example
-------
::

    [params]
    mu = 1
    alpha = 1
    gamma = 1
    beta_s = 1
    beta_b = 1
    L = 1
    H = 0.5

    [pressure]
    p0 = 50
    p_in = -150
    p_out = -100

    [grid]
    n_x = 32
    n_y = 16

    [time]
    t_end = 2.0
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "ConfigError",
    "PhysicalParams",
    "PressureData",
    "SimulationConfig",
    "ValidatedConfig",
    "parse_config",
    "load_config",
    "validate_config",
    "pressure_eval",
    "serialize_config",
    "CFL_CONSTANT",
]

# advisory constant for the viscous step restriction
CFL_CONSTANT = 0.25


class ConfigError(ValueError):
    """Configuration rejected; ``clause`` names the single violated rule."""

    def __init__(self, clause, message):
        super().__init__(f"{clause}: {message}")
        self.clause = clause


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PhysicalParams:
    """Nondimensional material and geometry parameters.

    Densities are fixed to one and are kept only so that a document setting
    them to anything else is rejected.
    """

    mu: float
    alpha: float
    gamma: float
    beta_s: float
    beta_b: float
    L: float
    H: float
    rho_f: float = 1.0
    rho_s: float = 1.0

    def __post_init__(self):
        for name in ("mu", "alpha", "gamma", "beta_s", "beta_b", "L", "H"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0):
                raise ConfigError("positivity", f"{name} must be finite and > 0, got {val!r}")
        if self.rho_f != 1.0 or self.rho_s != 1.0:
            raise ConfigError("unit density", "rho_f and rho_s are fixed to 1")


@dataclass(frozen=True)
class PressureData:
    """Inlet and outlet pressure signals.

    Each signal is a list of samples ``(t_k, P_k)`` read with linear
    interpolation and constant extension outside the sampled range. A single
    sample is a constant signal.
    """

    p0: float
    in_times: np.ndarray
    in_values: np.ndarray
    out_times: np.ndarray
    out_values: np.ndarray

    def __post_init__(self):
        if not (math.isfinite(self.p0) and self.p0 >= 0):
            raise ConfigError("minimum drop", f"p0 must be finite and >= 0, got {self.p0!r}")
        for tag in ("in", "out"):
            t = _frozen(getattr(self, f"{tag}_times"))
            v = _frozen(getattr(self, f"{tag}_values"))
            if t.ndim != 1 or v.ndim != 1 or t.size == 0 or t.size != v.size:
                raise ConfigError("signal shape", f"p_{tag} needs matching nonempty times and values")
            if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
                raise ConfigError("square integrability", f"p_{tag} samples must be finite")
            if np.any(np.diff(t) <= 0):
                raise ConfigError("signal shape", f"p_{tag}_times must be strictly increasing")
            object.__setattr__(self, f"{tag}_times", t)
            object.__setattr__(self, f"{tag}_values", v)
        # both signals are piecewise linear, so checking the union of knots is exact
        knots = np.union1d(self.in_times, self.out_times)
        drop = (np.interp(knots, self.out_times, self.out_values)
                - np.interp(knots, self.in_times, self.in_values))
        bad = np.flatnonzero(drop < self.p0 - 1e-12 * max(1.0, abs(self.p0)))
        if bad.size:
            k = bad[0]
            raise ConfigError(
                "pressure drop",
                f"p_out - p_in = {drop[k]!r} < p0 = {self.p0!r} at t = {knots[k]!r}")

    @classmethod
    def constant(cls, p_in, p_out, p0):
        return cls(p0, [0.0], [p_in], [0.0], [p_out])

    def scaled(self, factor):
        """Signals and minimum drop multiplied by ``factor``."""
        return PressureData(self.p0 * factor, self.in_times, self.in_values * factor,
                            self.out_times, self.out_values * factor)

    def __eq__(self, other):
        if not isinstance(other, PressureData):
            return NotImplemented
        return self.p0 == other.p0 and all(
            np.array_equal(getattr(self, k), getattr(other, k))
            for k in ("in_times", "in_values", "out_times", "out_values"))


def pressure_eval(pd, t):
    """Inlet and outlet pressure at time ``t``.

    Returns
    -------
    (float, float)
        ``(P_in, P_out)``.
    """
    return (float(np.interp(t, pd.in_times, pd.in_values)),
            float(np.interp(t, pd.out_times, pd.out_values)))


@dataclass(frozen=True)
class SimulationConfig:
    """Everything needed to reproduce one run.

    ``epsilon = inf`` removes the flux penalty altogether. ``h0`` and ``v0``
    are sampled on the ``n_x + 1`` structure nodes. ``u0`` is one of
    ``"zero"``, ``"poiseuille"`` (unit-flux slip profile) or ``"uniform U"``.
    """

    params: PhysicalParams
    pressure: PressureData
    n_x: int
    n_y: int
    t_end: float
    h0: np.ndarray
    v0: np.ndarray
    u0: str = "zero"
    dt: float = 1e-3
    epsilon: float = 1e-4
    h_stop: float = 0.01
    cadence: int = 10
    audit_c1: float | None = None
    snapshot_every: int = 0

    def __post_init__(self):
        for name in ("n_x", "n_y"):
            n = getattr(self, name)
            if int(n) != n or n < 4:
                raise ConfigError("grid size", f"{name} must be an integer >= 4, got {n!r}")
            object.__setattr__(self, name, int(n))
        for name in ("dt", "t_end", "epsilon", "h_stop"):
            val = getattr(self, name)
            if not (val > 0) or math.isnan(val):
                raise ConfigError("positivity", f"{name} must be > 0, got {val!r}")
        if not math.isfinite(self.dt) or not math.isfinite(self.t_end):
            raise ConfigError("positivity", "dt and t_end must be finite")
        if not self.h_stop < 1:
            raise ConfigError("contact threshold", "h_stop is a fraction of H and must be < 1")
        if int(self.cadence) != self.cadence or self.cadence < 1:
            raise ConfigError("cadence", "cadence must be a positive integer")
        object.__setattr__(self, "cadence", int(self.cadence))
        if int(self.snapshot_every) != self.snapshot_every or self.snapshot_every < 0:
            raise ConfigError("snapshot cadence", "snapshot_every must be a nonnegative integer")
        object.__setattr__(self, "snapshot_every", int(self.snapshot_every))
        if self.audit_c1 is not None and not self.audit_c1 > 0:
            raise ConfigError("positivity", "audit_c1 must be > 0")
        u0 = " ".join(str(self.u0).split())
        head = u0.split(" ")[0]
        if head not in ("zero", "poiseuille", "uniform") or (head == "uniform") != (len(u0.split()) == 2):
            raise ConfigError("initial velocity", f"unknown u0 descriptor {self.u0!r}")
        if head == "uniform":
            float(u0.split()[1])
        object.__setattr__(self, "u0", u0)
        for name in ("h0", "v0"):
            a = _frozen(getattr(self, name))
            if a.shape != (self.n_x + 1,):
                raise ConfigError("initial profile", f"{name} needs n_x + 1 = {self.n_x + 1} samples")
            if not np.all(np.isfinite(a)):
                raise ConfigError("initial profile", f"{name} must be finite")
            object.__setattr__(self, name, a)

    @property
    def x_nodes(self):
        return np.linspace(0.0, self.params.L, self.n_x + 1)

    def replace(self, **kw):
        return replace(self, **kw)

    def __eq__(self, other):
        if not isinstance(other, SimulationConfig):
            return NotImplemented
        return serialize_config(self) == serialize_config(other)


@dataclass(frozen=True)
class ValidatedConfig:
    """A configuration that passed every cross-field check."""

    config: SimulationConfig
    advisories: tuple = field(default_factory=tuple)


_SCHEMA = {
    "params": {"mu": True, "alpha": True, "gamma": True, "beta_s": True, "beta_b": True,
               "L": True, "H": True, "rho_f": False, "rho_s": False},
    "pressure": {"p0": True, "p_in": True, "p_out": True, "p_in_times": False,
                 "p_out_times": False},
    "grid": {"n_x": True, "n_y": True, "n_s": False},
    "time": {"t_end": True, "dt": False, "epsilon": False, "h_stop": False},
    "initial": {"h0": False, "v0": False, "u0": False},
    "output": {"cadence": False, "audit_c1": False, "snapshot_every": False},
}


def _num(section, key, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError("type", f"[{section}] {key} = {text!r} is not a number") from None


def _arr(section, key, text):
    return np.array([_num(section, key, tok) for tok in text.split()], dtype=float)


def _int(section, key, text):
    v = _num(section, key, text)
    if v != int(v):
        raise ConfigError("type", f"[{section}] {key} = {text!r} is not an integer")
    return int(v)


def _profile(text, x, H, key):
    """Interpret an initial profile descriptor on the nodes ``x``."""
    words = text.split()
    L = x[-1]
    if words[0] == "flat" and len(words) == 1:
        return np.full_like(x, H if key == "h0" else 0.0)
    if words[0] == "zero" and len(words) == 1:
        return np.zeros_like(x)
    if words[0] in ("bump", "cosine") and len(words) == 2:
        depth = _num("initial", key, words[1])
        if words[0] == "bump":
            shape = 16.0 * x**2 * (L - x) ** 2 / L**4
        else:
            shape = 0.5 * (1.0 - np.cos(2 * np.pi * x / L))
        base = H if key == "h0" else 0.0
        return base - depth * shape
    return _arr("initial", key, text)


def parse_config(text):
    """Parse a configuration document.

    Parameters
    ----------
    text : str
        INI-style document.

    Returns
    -------
    SimulationConfig

    Raises
    ------
    ConfigError
        On syntax errors (with line number), unknown or missing keys, type
        errors, or a violated type invariant.
    """
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else "?"
        raise ConfigError("syntax", f"unparsable line {line}") from None
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("syntax", f"line {exc.lineno}: key outside any section") from None
    except configparser.Error as exc:
        raise ConfigError("syntax", str(exc).splitlines()[0]) from None

    for sec in cp.sections():
        if sec not in _SCHEMA:
            raise ConfigError("unknown section", f"[{sec}]")
        for key in cp[sec]:
            if key not in _SCHEMA[sec]:
                raise ConfigError("unknown key", f"[{sec}] {key}")
    for sec, keys in _SCHEMA.items():
        for key, required in keys.items():
            if required and not (cp.has_section(sec) and key in cp[sec]):
                raise ConfigError("missing key", f"[{sec}] {key}")

    def get(sec, key, default=None):
        if cp.has_section(sec) and key in cp[sec]:
            return cp[sec][key].strip()
        return default

    pr = {k: _num("params", k, get("params", k)) for k in ("mu", "alpha", "gamma", "beta_s",
                                                           "beta_b", "L", "H")}
    params = PhysicalParams(**pr, rho_f=_num("params", "rho_f", get("params", "rho_f", "1")),
                            rho_s=_num("params", "rho_s", get("params", "rho_s", "1")))

    sig = {}
    for tag in ("in", "out"):
        vals = _arr("pressure", f"p_{tag}", get("pressure", f"p_{tag}"))
        tt = get("pressure", f"p_{tag}_times")
        if tt is None:
            if vals.size != 1:
                raise ConfigError("signal shape", f"p_{tag}_times is required for tabulated p_{tag}")
            times = np.zeros(1)
        else:
            times = _arr("pressure", f"p_{tag}_times", tt)
        sig[tag] = (times, vals)
    pressure = PressureData(_num("pressure", "p0", get("pressure", "p0")),
                            sig["in"][0], sig["in"][1], sig["out"][0], sig["out"][1])

    n_x = _int("grid", "n_x", get("grid", "n_x"))
    n_y = _int("grid", "n_y", get("grid", "n_y"))
    n_s = get("grid", "n_s")
    if n_s is not None and _int("grid", "n_s", n_s) != n_x:
        raise ConfigError("matching grids", "n_s must equal n_x (shared interface nodes)")
    if n_x < 4:
        raise ConfigError("grid size", "n_x must be >= 4")
    x = np.linspace(0.0, params.L, n_x + 1)
    h0 = _profile(get("initial", "h0", "flat"), x, params.H, "h0")
    v0 = _profile(get("initial", "v0", "zero"), x, params.H, "v0")

    a1 = get("output", "audit_c1")
    return SimulationConfig(
        params=params, pressure=pressure, n_x=n_x, n_y=n_y,
        t_end=_num("time", "t_end", get("time", "t_end")),
        dt=_num("time", "dt", get("time", "dt", "1e-3")),
        epsilon=_num("time", "epsilon", get("time", "epsilon", "1e-4")),
        h_stop=_num("time", "h_stop", get("time", "h_stop", "0.01")),
        h0=h0, v0=v0, u0=get("initial", "u0", "zero"),
        cadence=_int("output", "cadence", get("output", "cadence", "10")),
        audit_c1=None if a1 is None else _num("output", "audit_c1", a1),
        snapshot_every=_int("output", "snapshot_every", get("output", "snapshot_every", "0")),
    )


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def validate_config(cfg):
    """Cross-field checks.

    Returns
    -------
    ValidatedConfig
        Carries advisory messages (currently only the viscous step advisory).

    Raises
    ------
    ConfigError
        Clamped-end mismatch or initial height below the contact threshold.
    """
    p = cfg.params
    h0 = cfg.h0
    dx = p.L / cfg.n_x
    tol = 1e-9 * p.H
    if abs(h0[0] - p.H) > tol or abs(h0[-1] - p.H) > tol:
        raise ConfigError("clamped ends", f"h0 must equal H = {p.H!r} at both ends")
    if abs(cfg.v0[0]) > tol or abs(cfg.v0[-1]) > tol:
        raise ConfigError("clamped ends", "v0 must vanish at both ends")
    # second-order one-sided slopes, tolerance scaled by the local curvature
    d2 = np.abs(np.diff(h0, 2)).max() / dx**2 if h0.size > 2 else 0.0
    slope_tol = 1e-9 + dx * d2
    s0 = (-3 * h0[0] + 4 * h0[1] - h0[2]) / (2 * dx)
    sL = (3 * h0[-1] - 4 * h0[-2] + h0[-3]) / (2 * dx)
    if abs(s0) > slope_tol or abs(sL) > slope_tol:
        raise ConfigError("clamped ends", "h0 must have zero slope at both ends")
    if h0.min() <= cfg.h_stop * p.H:
        raise ConfigError("initial gap", "min h0 must exceed h_stop * H")
    adv = []
    lim = CFL_CONSTANT * min(dx, p.H / cfg.n_y) ** 2 / p.mu
    if cfg.dt > lim:
        adv.append(f"cfl: dt = {cfg.dt!r} exceeds {CFL_CONSTANT} min(dx, dy H)^2 / mu = {lim:.3e}; "
                   "the scheme is implicit, accuracy not stability is affected")
    return ValidatedConfig(cfg, tuple(adv))


def _fmt(a):
    return " ".join(repr(float(v)) for v in np.atleast_1d(a))


def serialize_config(cfg):
    """Write a configuration back as a document that parses to an equal config."""
    p, pd = cfg.params, cfg.pressure
    lines = ["[params]"]
    for k in ("mu", "alpha", "gamma", "beta_s", "beta_b", "L", "H"):
        lines.append(f"{k} = {getattr(p, k)!r}")
    lines += ["", "[pressure]", f"p0 = {pd.p0!r}",
              f"p_in = {_fmt(pd.in_values)}", f"p_in_times = {_fmt(pd.in_times)}",
              f"p_out = {_fmt(pd.out_values)}", f"p_out_times = {_fmt(pd.out_times)}",
              "", "[grid]", f"n_x = {cfg.n_x}", f"n_y = {cfg.n_y}",
              "", "[time]", f"t_end = {cfg.t_end!r}", f"dt = {cfg.dt!r}",
              f"epsilon = {cfg.epsilon!r}", f"h_stop = {cfg.h_stop!r}",
              "", "[initial]", f"h0 = {_fmt(cfg.h0)}", f"v0 = {_fmt(cfg.v0)}", f"u0 = {cfg.u0}",
              "", "[output]", f"cadence = {cfg.cadence}", f"snapshot_every = {cfg.snapshot_every}"]
    if cfg.audit_c1 is not None:
        lines.append(f"audit_c1 = {cfg.audit_c1!r}")
    return "\n".join(lines) + "\n"
