import numpy as np
import pytest
import sympy as sym
from hypothesis import given, settings
from hypothesis import strategies as st

from slipchannel.geometry import (build_map, curvature, fd_weights, h3_seminorm,
                                  interface_frame, third_derivative)

slopes = st.floats(-50, 50, allow_nan=False)


@given(slopes)
def test_frame_orthonormal(hx):
    fr = interface_frame(hx)
    assert np.linalg.norm(fr.n) == pytest.approx(1.0)
    assert np.linalg.norm(fr.tau) == pytest.approx(1.0)
    assert abs(fr.n @ fr.tau) < 1e-14
    # the tangent follows the graph, the normal points up
    assert fr.n[1] > 0 and fr.tau[0] > 0
    assert fr.tau[1] / fr.tau[0] == pytest.approx(hx)


def test_curvature_of_circle():
    # lower arc of a circle of radius R opens upward with curvature 1/R
    R, x = 2.0, np.linspace(-1.0, 1.0, 11)
    hx = x / np.sqrt(R**2 - x**2)
    hxx = R**2 / (R**2 - x**2) ** 1.5
    np.testing.assert_allclose(curvature(hx, hxx), 1.0 / R, rtol=1e-14)


def test_map_roundtrip_and_velocity():
    x = np.linspace(0, 1, 17)
    h = 0.5 - 0.2 * np.sin(np.pi * x) ** 2
    ht = -0.3 * np.sin(np.pi * x) ** 2
    m = build_map(h, ht)
    xs, ys = np.meshgrid(x, np.linspace(0, 1, 5))
    X, Y = m.to_physical(xs, ys)
    _, back = m.to_reference(X, Y)
    np.testing.assert_allclose(back, ys, atol=1e-15)
    _, w2 = m.domain_velocity(xs, ys)
    np.testing.assert_allclose(w2[-1], ht)   # top row moves with the interface
    np.testing.assert_allclose(w2[0], 0.0)
    np.testing.assert_array_equal(m.jacobian, h)
    assert m.slope[0] == 0 and m.slope[-1] == 0


@settings(max_examples=30)
@given(gx=st.floats(-5, 5), gy=st.floats(-5, 5), yh=st.floats(0, 1), xq=st.floats(0, 1))
def test_gradient_maps_inverse(gx, gy, yh, xq):
    x = np.linspace(0, 1, 9)
    m = build_map(0.5 + 0.1 * x**2 * (1 - x) ** 2, np.zeros(9))
    dx, dy = m.grad_to_reference(xq, yh, gx, gy)
    px, py = m.grad_to_physical(xq, yh, dx, dy)
    assert px == pytest.approx(gx, abs=1e-12) and py == pytest.approx(gy, abs=1e-12)


def test_closed_channel_rejected():
    with pytest.raises(ValueError, match="Jacobian"):
        build_map(np.array([0.5, 0.0, 0.5]), np.zeros(3))


def test_fd_weights_exact_on_polynomials():
    off = [-2, -1, 0, 1, 2]
    w = fd_weights(off, 3)
    for k in range(5):
        exact = 6.0 if k == 3 else 0.0   # d^3/dx^3 x^k at 0
        assert w @ np.power(np.array(off, float), k) == pytest.approx(exact, abs=1e-12)


def test_third_derivative_exact_for_quartic():
    xs = sym.symbols("x")
    f = 3 * xs**4 - 2 * xs**3 + xs
    fn = sym.lambdify(xs, f)
    d3 = sym.lambdify(xs, sym.diff(f, xs, 3))
    x = np.linspace(0, 1, 21)
    np.testing.assert_allclose(third_derivative(fn(x), x[1]), d3(x), atol=1e-8)


def test_h3_seminorm_converges():
    xs = sym.symbols("x")
    f = sym.sin(sym.pi * xs) ** 2
    exact = float(sym.integrate(sym.diff(f, xs, 3) ** 2, (xs, 0, 1)))
    fn = sym.lambdify(xs, f)
    errs = []
    for n in (32, 64, 128):
        x = np.linspace(0, 1, n + 1)
        errs.append(abs(h3_seminorm(fn(x), 1.0) - exact))
    assert errs[-1] / exact < 5e-3
    assert np.log2(errs[1] / errs[2]) > 1.8
