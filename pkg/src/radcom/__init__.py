"""radcom: joint radar estimation and data communication over OFDM/OTFS.

Library layout
--------------
frame       frame geometry, targets, admissibility
symbols     constellations and symbol grids
transforms  symplectic finite Fourier transform pair
estgrid     delay/Doppler search grids
ofdm        OFDM radar estimator and bounds
otfs        OTFS cross-talk matrices, estimator and bounds
fmcw        FMCW baseline with matched resources
linkbudget  geometric SNRs and achievable rates
harness     seeded Monte Carlo sweeps and CSV tables
cli         `radcom run|crlb|validate <config>`

Set RADCOM_BACKEND=numpy to bypass the numba-compiled kernels.
"""

from ._backend import backend_name
from .constants import SPEED_OF_LIGHT
from .errors import AdmissibilityError, ConfigError, RadcomError, SingularFisherError
from .estgrid import EstimationGrid, make_estimation_grid
from .estimates import CrlbReport, RadarEstimate
from .frame import (FrameConfig, Target, make_frame_config,
                    make_target_from_kinematics, make_target_from_wave)
from .symbols import SymbolGrid, generate_symbols, register_constellation
from .transforms import isfft, sfft

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError", "ConfigError", "CrlbReport", "EstimationGrid",
    "FrameConfig", "RadarEstimate", "RadcomError", "SingularFisherError",
    "SPEED_OF_LIGHT", "SymbolGrid", "Target", "backend_name",
    "generate_symbols", "isfft", "make_estimation_grid", "make_frame_config",
    "make_target_from_kinematics", "make_target_from_wave",
    "register_constellation", "sfft", "__version__",
]
