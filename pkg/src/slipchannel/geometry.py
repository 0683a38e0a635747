"""Moving channel geometry.

The physical fluid domain ``0 < x < L, 0 < y < h(x)`` is the image of the
reference rectangle ``(0, L) x (0, 1)`` under the vertical stretch
``(x, yh) -> (x, yh * h(x))``. Its Jacobian is ``h`` and the induced domain
velocity is ``(0, yh * dh/dt)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np
from scipy.integrate import trapezoid

__all__ = [
    "InterfaceFrame",
    "AleMap",
    "interface_frame",
    "curvature",
    "build_map",
    "h3_seminorm",
    "third_derivative",
    "fd_weights",
]


@dataclass(frozen=True)
class InterfaceFrame:
    """Unit normal, unit tangent and surface factor of the graph ``y = h(x)``."""

    n: np.ndarray
    tau: np.ndarray
    S: np.ndarray


def interface_frame(h_x):
    """Frame of the interface for slope(s) ``h_x``.

    Returns ``n = (-h_x, 1)/S`` and ``tau = (1, h_x)/S`` with
    ``S = sqrt(1 + h_x**2)``; vector components are stacked on the last axis.
    """
    h_x = np.asarray(h_x, dtype=float)
    S = np.hypot(1.0, h_x)
    n = np.stack([-h_x / S, 1.0 / S], axis=-1)
    tau = np.stack([1.0 / S, h_x / S], axis=-1)
    return InterfaceFrame(n, tau, S)


def curvature(h_x, h_xx):
    """Signed curvature of a graph, positive for an upward opening profile."""
    h_x = np.asarray(h_x, dtype=float)
    return np.asarray(h_xx, dtype=float) / (1.0 + h_x**2) ** 1.5


@dataclass(frozen=True)
class AleMap:
    """Vertical-stretch map with its metric data.

    Attributes
    ----------
    x : ndarray
        Structure/interface nodes, shared with the fluid grid columns.
    h, ht : ndarray
        Height and its time derivative at the nodes.
    h_mid, ht_mid : ndarray
        Face averages between consecutive nodes.
    slope_mid : ndarray
        ``(h[i+1] - h[i]) / dx`` at the faces.
    slope : ndarray
        Nodal slope, central in the interior and zero at the clamped ends.
    """

    x: np.ndarray
    h: np.ndarray
    ht: np.ndarray
    dx: float
    h_mid: np.ndarray
    ht_mid: np.ndarray
    slope_mid: np.ndarray
    slope: np.ndarray

    @property
    def L(self):
        return self.x[-1]

    @property
    def jacobian(self):
        return self.h

    @property
    def S(self):
        return np.hypot(1.0, self.slope)

    def height_at(self, x):
        return np.interp(x, self.x, self.h)

    def to_physical(self, x, yh):
        """Reference point(s) to physical point(s)."""
        x = np.asarray(x, dtype=float)
        return x, np.asarray(yh) * self.height_at(x)

    def to_reference(self, x, y):
        x = np.asarray(x, dtype=float)
        return x, np.asarray(y) / self.height_at(x)

    def domain_velocity(self, x, yh):
        """Mesh velocity ``w = (0, yh * h_t)``."""
        x = np.asarray(x, dtype=float)
        w2 = np.asarray(yh) * np.interp(x, self.x, self.ht)
        return np.zeros_like(w2), w2

    def grad_to_physical(self, x, yh, d_x, d_yh):
        """Physical gradient from reference derivatives at reference points."""
        h = self.height_at(x)
        hx = np.interp(x, self.x, self.slope)
        return d_x - yh * hx / h * d_yh, d_yh / h

    def grad_to_reference(self, x, yh, g_x, g_y):
        """Inverse of :meth:`grad_to_physical`."""
        h = self.height_at(x)
        hx = np.interp(x, self.x, self.slope)
        return g_x + yh * hx * g_y, g_y * h


def build_map(h_nodes, ht_nodes, L=1.0):
    """Assemble the stretch map for the profile ``h_nodes`` on ``[0, L]``.

    Raises
    ------
    ValueError
        If the Jacobian is not strictly positive.
    """
    h = np.array(h_nodes, dtype=float)
    ht = np.array(ht_nodes, dtype=float)
    if h.shape != ht.shape or h.ndim != 1 or h.size < 3:
        raise ValueError("h and ht must be matching 1-D node arrays")
    if not np.all(h > 0):
        raise ValueError("non-positive Jacobian: the channel has closed")
    L = float(L)
    x = np.linspace(0.0, L, h.size)
    dx = L / (h.size - 1)
    slope = np.zeros_like(h)
    slope[1:-1] = (h[2:] - h[:-2]) / (2 * dx)
    for a in (x, h, ht, slope):
        a.setflags(write=False)
    return AleMap(x, h, ht, dx, 0.5 * (h[1:] + h[:-1]), 0.5 * (ht[1:] + ht[:-1]),
                  np.diff(h) / dx, slope)


def fd_weights(offsets, deriv):
    """Finite-difference weights of the ``deriv``-th derivative on unit spacing."""
    offsets = np.asarray(offsets, dtype=float)
    k = np.arange(offsets.size)
    V = offsets[None, :] ** k[:, None]
    rhs = np.zeros(offsets.size)
    rhs[deriv] = factorial(deriv)
    return np.linalg.solve(V, rhs)


_W3_CENTRAL = np.array([-0.5, 1.0, 0.0, -1.0, 0.5])
_W3_LEFT0 = fd_weights([0, 1, 2, 3, 4], 3)
_W3_LEFT1 = fd_weights([-1, 0, 1, 2, 3], 3)


def third_derivative(h_nodes, dx):
    """Second-order third derivative at every node.

    Central five-point stencil inside, one-sided five-point stencils at the
    two nodes nearest each end.
    """
    h = np.asarray(h_nodes, dtype=float)
    n = h.size
    if n < 7:
        raise ValueError("need at least 7 nodes")
    d3 = np.empty(n)
    d3[2:-2] = (_W3_CENTRAL[0] * h[:-4] + _W3_CENTRAL[1] * h[1:-3]
                + _W3_CENTRAL[3] * h[3:-1] + _W3_CENTRAL[4] * h[4:])
    d3[0] = _W3_LEFT0 @ h[0:5]
    d3[1] = _W3_LEFT1 @ h[0:5]
    # mirrored stencils pick up the odd-derivative sign
    d3[-1] = -(_W3_LEFT0 @ h[::-1][0:5])
    d3[-2] = -(_W3_LEFT1 @ h[::-1][0:5])
    return d3 / dx**3


def h3_seminorm(h_nodes, L):
    """Squared H^3 seminorm ``int |h_xxx|^2 dx`` by the trapezoidal rule."""
    h = np.asarray(h_nodes, dtype=float)
    dx = L / (h.size - 1)
    return float(trapezoid(third_derivative(h, dx) ** 2, dx=dx))
