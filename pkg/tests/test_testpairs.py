import numpy as np
import pytest
import sympy as sym
from hypothesis import given, settings
from hypothesis import strategies as st

from slipchannel.config import validate_config
from slipchannel.coupling import run_simulation
from slipchannel.plate import StructureState
from slipchannel.testpairs import (PSI, FunctionHeight, contact_testpair, contradiction_diagnostic,
                                   cubic_coeffs, lambda_coeffs, phi_profile, reduced_energy,
                                   regularity_diagnostic, regularity_testpair,
                                   weakform_terms)
from slipchannel.testpairs import testpair_checks as run_checks

lams = st.floats(1e-6, 1e6)


def _symbolic_coeffs():
    a, b, c, ls, lb = sym.symbols("a b c lambda_s lambda_b")
    xi = sym.symbols("xi")
    Phi = a * xi**3 + b * xi**2 + c * xi
    d1, d2 = sym.diff(Phi, xi), sym.diff(Phi, xi, 2)
    eqs = [Phi.subs(xi, 1) - 1,
           d2.subs(xi, 1) + ls * d1.subs(xi, 1),      # top Robin
           d2.subs(xi, 0) - lb * d1.subs(xi, 0)]      # bottom Robin
    sol = sym.solve(eqs, [a, b, c])
    return sym.lambdify((ls, lb), [sol[a], sol[b], sol[c]])


SYM = _symbolic_coeffs()


@settings(max_examples=200)
@given(ls=lams, lb=lams)
def test_coefficients_match_symbolic_solution(ls, lb):
    c = cubic_coeffs(ls, lb)
    np.testing.assert_allclose([c.a, c.b, c.c], SYM(ls, lb), rtol=1e-9, atol=1e-12)
    assert abs(c.a + c.b + c.c - 1) < 1e-12
    assert abs(c.robin_top()) < 1e-12 * (1 + ls)
    assert abs(c.robin_bottom()) < 1e-12 * (1 + lb)


def test_no_slip_limit():
    errs = [np.abs(np.array([float(v) for v in (c.a, c.b, c.c)]) - [-2, 3, 0]).max()
            for c in (cubic_coeffs(x, x) for x in (1e2, 1e4, 1e6))]
    # the error decays like 1/lambda
    np.testing.assert_allclose(np.array(errs[:-1]) / np.array(errs[1:]), 100.0, rtol=0.1)
    assert errs[2] < 1e-4
    c = cubic_coeffs(np.inf, np.inf)
    assert (float(c.a), float(c.b), float(c.c)) == (-2.0, 3.0, 0.0)
    xi = np.linspace(0, 1, 7)
    np.testing.assert_allclose(phi_profile(xi, c)[0], -2 * xi**3 + 3 * xi**2)
    np.testing.assert_allclose(PSI(xi), -2 * xi**3 + 3 * xi**2)


def test_wall_numbers():
    ls, lb = lambda_coeffs(0.5, 0.25, 2.0)
    assert (ls, lb) == (2.0, 0.25)


@pytest.mark.parametrize("beta_s, beta_b, h", [(1.0, 1.0, 0.5), (0.1, 3.0, 0.2), (5.0, 0.05, 1.0)])
def test_cubic_minimizes_reduced_energy(beta_s, beta_b, h):
    # psi = h Phi(y/h) with psi(0) = 0, psi(h) = h; admissible variations vanish at both walls
    y = np.linspace(0, h, 401)
    xi = y / h
    c = cubic_coeffs(h / beta_s, h / beta_b)
    _, d1, d2 = phi_profile(xi, c)
    base = reduced_energy(y, d1, d2 / h, 1 / beta_s, 1 / beta_b)
    for g1, g2 in [(1 - 2 * xi, -2 + 0 * xi), (2 * xi - 3 * xi**2, 2 - 6 * xi),
                   (3 * xi**2 - 4 * xi**3, 6 * xi - 12 * xi**2)]:
        for d in (1e-2, -1e-2, 0.3):
            e = reduced_energy(y, d1 + d * g1, (d2 + d * g2) / h, 1 / beta_s, 1 / beta_b)
            assert e > base


def _cos_height(depth, H=0.5):
    w = 2 * np.pi
    s = lambda x: 0.5 * (1 - np.cos(w * x))
    # h = H - depth s^2 and its derivatives
    funcs = [lambda x: H - depth * s(x) ** 2,
             lambda x: -depth * 2 * s(x) * 0.5 * w * np.sin(w * x),
             lambda x: -depth * 0.5 * w**2 * (np.sin(w * x) ** 2 + 2 * s(x) * np.cos(w * x)),
             lambda x: -depth * 0.5 * w**3 * (3 * np.sin(w * x) * np.cos(w * x)
                                             - 2 * s(x) * np.sin(w * x))]
    return FunctionHeight(funcs, 1.0, H)


def test_function_height_derivatives_consistent():
    hp = _cos_height(0.3)
    x = np.linspace(0.05, 0.95, 7)
    for k in range(3):
        fd = (hp.h(x + 1e-6, k) - hp.h(x - 1e-6, k)) / 2e-6
        np.testing.assert_allclose(fd, hp.h(x, k + 1), rtol=1e-5, atol=1e-5)


@pytest.mark.parametrize("depth", [0.0, 0.2, 0.45])
def test_both_pairs_pass_identities(params, depth):
    hp = _cos_height(depth)
    rc = run_checks(contact_testpair(hp, params))
    rr = run_checks(regularity_testpair(hp, 1.0))
    assert rc.passed, rc.text()
    assert rr.passed, rr.text()


def test_inlet_integral_equals_minus_height(params):
    rep = run_checks(contact_testpair(_cos_height(0.3), params))
    assert rep["inlet integral"].error < 1e-12


def test_perturbed_pair_is_caught(params):
    rep = run_checks(contact_testpair(_cos_height(0.3), params, perturb=1e-3))
    assert "divergence" in rep.failing


def test_spline_contact_pair_from_nodes(params):
    x = np.linspace(0, 1, 65)
    h = 0.5 - 0.3 * 16 * x**2 * (1 - x) ** 2
    assert run_checks(contact_testpair(StructureState(h, 0 * h), params)).passed


def test_regularity_pair_flags_nonzero_end_curvature():
    # a clamped sag has h_xx != 0 at the walls, so the pair cannot vanish there
    x = np.linspace(0, 1, 65)
    h = 0.5 - 0.3 * 16 * x**2 * (1 - x) ** 2
    rep = run_checks(regularity_testpair(StructureState(h, 0 * h)))
    assert rep.failing == ["vanishing inlet outlet bottom"]


def test_weakform_needs_three_states(small_driven_config):
    cfg = small_driven_config.config
    with pytest.raises(ValueError, match="insufficient stored cadence"):
        weakform_terms([{"t": 0.0}, {"t": 1.0}], cfg)


def test_weakform_closure_small(small_driven_config):
    cfg = validate_config(small_driven_config.config.replace(t_end=0.06, cadence=1))
    r = run_simulation(cfg)
    w = weakform_terms(r.stored, cfg.config)
    assert w["lhs"][-1] == pytest.approx(-0.06 * 50 / 0.5 * 0.5)   # -T p0 over unit flux scale
    assert abs(w["closure"][-1]) < 0.05 * abs(w["lhs"][-1])


def test_contradiction_degenerate_without_forcing(params):
    from slipchannel.config import load_config
    from conftest import CONFIGS
    cfg = validate_config(load_config(CONFIGS / "zero.ini").replace(t_end=0.01, cadence=1))
    r = run_simulation(cfg)
    d = contradiction_diagnostic(r.stored, cfg.config)
    assert d["degenerate"] and np.isnan(d["exponent_lhs"])


def test_regularity_diagnostic_oracle():
    t = np.linspace(0, 1, 101)
    min_h = 0.5 * (1 - t)                  # crosses delta = f H at t = 1 - f
    out = regularity_diagnostic(t, min_h, np.full_like(t, 2.0), 0.5, (0.5, 0.25))
    (d1, v1, ok1), (d2, v2, ok2) = out
    assert d1 == 0.25 and d2 == 0.125
    assert v1 == pytest.approx(2 * 0.5, abs=0.03) and v2 == pytest.approx(2 * 0.75, abs=0.03)
    assert ok1 and ok2 and v2 >= v1
