import numpy as np
import pytest

from slipchannel.config import load_config, validate_config
from slipchannel.coupling import (SERIES_COLUMNS, ChannelClosed, detect_contact,
                                  initial_state, lie_trotter_step, run_simulation)
from slipchannel.plate import StructureState

from conftest import CONFIGS


def test_detect_contact_leftmost_tie():
    h = np.array([0.5, 0.004, 0.2, 0.004, 0.5])
    assert detect_contact(StructureState(h, 0 * h), 0.005, L=2.0) == (0.5, 0.004)
    assert detect_contact(StructureState(h + 0.1, 0 * h), 0.005) is None


def test_zero_data_stays_at_rest():
    vcfg = validate_config(load_config(CONFIGS / "zero.ini").replace(t_end=0.05))
    r = run_simulation(vcfg)
    assert r.reason == "t_end" and r.contact is None
    for c in ("q_in", "q_out", "flux_residual", "energy_total"):
        assert np.abs(r.series[c]).max() == 0.0
    np.testing.assert_array_equal(r.series["min_h"], 0.5)
    assert tuple(r.series) == SERIES_COLUMNS


def test_runs_are_deterministic(small_driven_config):
    cfg = validate_config(small_driven_config.config.replace(t_end=0.02))
    a, b = run_simulation(cfg), run_simulation(cfg)
    for c in SERIES_COLUMNS:
        np.testing.assert_array_equal(a.series[c], b.series[c])
    assert len(a.stored) == len(b.stored)


def test_driven_run_flux_and_descent(small_driven_config):
    cfg = validate_config(small_driven_config.config.replace(t_end=0.05))
    r = run_simulation(cfg)
    ser = r.series
    assert np.all(np.abs(ser["flux_residual"]) <= 1e-8 * np.maximum(1, np.abs(ser["q_out"])))
    assert ser["min_h"][-1] < ser["min_h"][0]   # suction pulls the plate down
    assert r.audit().passed


def test_store_cadence(small_driven_config):
    cfg = validate_config(small_driven_config.config.replace(t_end=0.02, cadence=5))
    r = run_simulation(cfg)
    assert [round(s["t"], 9) for s in r.stored] == [0.0, 0.005, 0.01, 0.015, 0.02]


def test_plate_closing_inside_step_is_contact(small_driven_config):
    cfg = small_driven_config.config
    st = initial_state(cfg)
    # a huge downward load closes the gap in one plate stage
    closing = type(st)(st.s, st.fs, st.map, st.t, np.full(st.load.shape, -1e7))
    with pytest.raises(ChannelClosed):
        lie_trotter_step(closing, cfg.dt, cfg)
