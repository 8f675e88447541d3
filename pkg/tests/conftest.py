import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for `oracles`

from radcom.frame import make_frame_config

TABLE1 = dict(fc_hz=5.89e9, bandwidth_hz=10e6, m_subcarriers=64,
              n_symbols=50, cp_fraction=0.25)


@pytest.fixture(scope="session")
def table1_cfg():
    """64 x 50 frame at 5.89 GHz / 10 MHz with a quarter cyclic prefix."""
    return make_frame_config(**TABLE1)


@pytest.fixture(scope="session")
def table1_nocp_cfg():
    return make_frame_config(5.89e9, 10e6, 64, 50, 0.0)


def small_cfg(n_symbols, m_subcarriers, cp_fraction=0.0):
    """Reduced frame sharing the 156.25 kHz subcarrier spacing."""
    return make_frame_config(5.89e9, 156250.0 * m_subcarriers,
                             m_subcarriers, n_symbols, cp_fraction)


@pytest.fixture(scope="session")
def cfg_2x4():
    return small_cfg(2, 4)


@pytest.fixture(scope="session")
def cfg_4x8():
    return small_cfg(4, 8)


@pytest.fixture(scope="session")
def cfg_8x16():
    return small_cfg(8, 16)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260809)
