import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slipchannel.coupling import initial_state, lie_trotter_step
from slipchannel.energy import (EnergyRecord, dissipation_increment, energy_snapshot,
                                flux_deviation_integral, ledger_audit)


def _rec(t, E, D=0.0, W=0.0):
    return EnergyRecord(t, E, 0.0, 0.0, d_visc=D, work_pressure=W)


def test_audit_exact_balance_passes():
    recs = [_rec(0.1, 0.9, D=0.1), _rec(0.2, 1.0, D=0.1, W=0.2)]
    a = ledger_audit(recs, (1.0, 0.0, 0.0), 0.1)
    np.testing.assert_allclose(a.residual, 0.0, atol=1e-15)
    np.testing.assert_allclose(a.cum_dissipation, [0.1, 0.2])
    assert a.passed and a.constant == 0.0


def test_audit_detects_energy_creation():
    recs = [_rec(0.1, 2.0)]
    a = ledger_audit(recs, (1.0, 0.0, 0.0), 0.01, c1=1.0)
    assert a.residual[0] == pytest.approx(1.0)
    assert not a.passed and a.constant == pytest.approx(100.0)


def test_audit_flags_negative_dissipation():
    a = ledger_audit([_rec(0.1, 1.0, D=-0.5)], (1.5, 0.0, 0.0), 0.1)
    assert a.negative_entries == ("d_visc",) and not a.passed


def test_default_slack_constant():
    a = ledger_audit([_rec(0.1, 1.0, W=0.5), _rec(0.2, 1.0, W=-2.0)], (0.5, 0, 0), 0.1)
    assert a.slack == pytest.approx(10 * (0.5 + 1.5) * 0.1)


@given(q=st.floats(0, 2), dt=st.floats(1e-4, 1e-1))
def test_flux_deviation_rectangles(q, dt):
    t = dt * np.arange(1, 6)
    assert flux_deviation_integral(t, np.full(5, q), dt) == pytest.approx(5 * dt * (q - 1) ** 2)


def test_record_totals():
    r = EnergyRecord(0.0, 1.0, 2.0, 3.0, 0.1, 0.2, 0.3, 0.4, 0.5, 1.5, 2.5)
    assert r.energy == 6.0 and r.dissipation == pytest.approx(1.5) and r.work == 4.0
    assert list(r.as_dict()) == EnergyRecord.columns()


def test_penalty_split_and_step_balance(small_driven_config):
    cfg = small_driven_config.config
    st0 = initial_state(cfg)
    st1 = lie_trotter_step(st0, cfg.dt, cfg)
    rec = dissipation_increment(st0, st1, cfg.dt, cfg)
    q = st1.fs.lam * cfg.epsilon + 1.0
    assert rec.work_penalty == pytest.approx((1 - q**2) / (2 * cfg.epsilon) * cfg.dt, rel=1e-6)
    assert rec.d_penalty == pytest.approx((q - 1) ** 2 / (2 * cfg.epsilon) * cfg.dt, rel=1e-6)
    for k in ("d_visc", "d_bottom", "d_interface", "d_plate", "d_penalty"):
        assert getattr(rec, k) >= 0
    E0 = sum(energy_snapshot(st0, cfg.params))
    res = rec.energy + rec.dissipation - E0 - rec.work
    assert abs(res) <= 10 * (E0 + abs(rec.work)) * cfg.dt


def test_pressure_work_constant_oracle():
    from slipchannel.energy import pressure_work_constant
    recs = [EnergyRecord(0.1 * k, 0, 0, 0, d_plate=0.2, work_pressure=0.5) for k in (1, 2)]
    # excess 0.4 then 0.8 against int P^2 = 0.4 then 0.8
    assert pressure_work_constant(recs, [2.0, 2.0], 0.1) == pytest.approx(1.0)
    assert pressure_work_constant([], [], 0.1) == 0.0
