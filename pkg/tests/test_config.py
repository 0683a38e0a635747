import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slipchannel.config import (ConfigError, PhysicalParams, PressureData, SimulationConfig,
                                parse_config, pressure_eval, serialize_config, validate_config)

BASE = """
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
n_x = 8
n_y = 4
[time]
t_end = 0.1
"""


def test_parse_defaults():
    cfg = parse_config(BASE)
    assert cfg.dt == 1e-3 and cfg.epsilon == 1e-4 and cfg.h_stop == 0.01
    assert cfg.u0 == "zero"
    np.testing.assert_array_equal(cfg.h0, np.full(9, 0.5))
    np.testing.assert_array_equal(cfg.v0, np.zeros(9))


@pytest.mark.parametrize("edit, clause", [
    (("beta_b = 1", "beta_b = -1"), "positivity"),
    (("mu = 1", "mu = 0"), "positivity"),
    (("p_out = -100", "p_out = -120"), "pressure drop"),
    (("[time]", "[time]\nbogus = 3"), "unknown key"),
    (("n_x = 8\n", ""), "missing key"),
    (("n_y = 4", "n_y = 4\nn_s = 6"), "matching grids"),
])
def test_rejections_name_clause(edit, clause):
    with pytest.raises(ConfigError) as exc:
        parse_config(BASE.replace(*edit))
    assert exc.value.clause == clause


def test_syntax_error():
    with pytest.raises(ConfigError) as exc:
        parse_config("[params]\nmu 1\n")
    assert exc.value.clause == "syntax"


def test_clamped_end_and_gap_checks():
    cfg = parse_config(BASE)
    bad = cfg.h0.copy()
    bad[0] = 0.4
    with pytest.raises(ConfigError, match="clamped"):
        validate_config(cfg.replace(h0=bad))
    tilt = 0.5 - 0.1 * np.sin(np.pi * cfg.x_nodes)
    with pytest.raises(ConfigError, match="slope"):
        validate_config(cfg.replace(h0=tilt))
    with pytest.raises(ConfigError) as exc:
        validate_config(parse_config(BASE + "[initial]\nh0 = bump 0.499\n"))
    assert exc.value.clause == "initial gap"


def test_bump_profile_accepted():
    v = validate_config(parse_config(BASE + "[initial]\nh0 = bump 0.2\n"))
    assert v.config.h0.min() == pytest.approx(0.3)


def test_cfl_advisory_only():
    v = validate_config(parse_config(BASE.replace("n_x = 8", "n_x = 64")))
    assert any("cfl" in a for a in v.advisories)


def test_pressure_interpolation():
    pd = PressureData(1.0, [0.0, 1.0], [0.0, -2.0], [0.0], [1.0])
    assert pressure_eval(pd, 0.5) == (-1.0, 1.0)
    assert pressure_eval(pd, 5.0) == (-2.0, 1.0)   # constant extension
    assert pressure_eval(pd, -1.0) == (0.0, 1.0)


def test_drop_checked_between_knots():
    # drop is 1 at both ends of the inlet signal but dips at the outlet knot
    with pytest.raises(ConfigError):
        PressureData(1.0, [0.0, 2.0], [0.0, 0.0], [0.0, 1.0, 2.0], [1.0, 0.5, 1.0])


def test_scaled_pressure():
    pd = PressureData.constant(-150.0, -100.0, 50.0).scaled(2.0)
    assert pd.p0 == 100.0 and pressure_eval(pd, 0.0) == (-300.0, -200.0)


@settings(max_examples=40, deadline=None)
@given(mu=st.floats(1e-3, 1e3), beta=st.floats(1e-3, 1e3), H=st.floats(0.1, 2.0),
       n=st.integers(4, 20), dt=st.floats(1e-6, 1e-2), depth=st.floats(0.0, 0.5))
def test_serialize_roundtrip(mu, beta, H, n, dt, depth):
    txt = BASE.replace("mu = 1", f"mu = {mu!r}").replace("beta_s = 1", f"beta_s = {beta!r}")
    txt = txt.replace("H = 0.5", f"H = {H!r}").replace("n_x = 8", f"n_x = {n}")
    txt += f"dt = {dt!r}\n[initial]\nh0 = cosine {depth * H!r}\n"
    cfg = parse_config(txt)
    again = parse_config(serialize_config(cfg))
    assert again == cfg
    assert serialize_config(again) == serialize_config(cfg)


def test_infinite_penalty_allowed():
    cfg = parse_config(BASE + "epsilon = inf\n")
    assert np.isinf(cfg.epsilon)


def test_params_are_frozen():
    p = PhysicalParams(1, 1, 1, 1, 1, 1.0, 0.5)
    with pytest.raises(Exception):
        p.mu = 2.0
    assert isinstance(parse_config(BASE), SimulationConfig)
