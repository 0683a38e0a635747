from pathlib import Path

import numpy as np
import pytest

from slipchannel.config import PhysicalParams, load_config, validate_config
from slipchannel.coupling import run_simulation

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"


@pytest.fixture(scope="session")
def params():
    return PhysicalParams(mu=1.0, alpha=1.0, gamma=1.0, beta_s=1.0, beta_b=1.0, L=1.0, H=0.5)


@pytest.fixture(scope="session")
def reference_config():
    return validate_config(load_config(CONFIGS / "reference.ini"))


@pytest.fixture(scope="session")
def reference_run(reference_config):
    return run_simulation(reference_config)


@pytest.fixture(scope="session")
def small_driven_config():
    """16 x 8 version of the reference with state stored every step."""
    cfg = load_config(CONFIGS / "reference.ini").replace(
        n_x=16, n_y=8, h0=np.full(17, 0.5), v0=np.zeros(17))
    return validate_config(cfg)
