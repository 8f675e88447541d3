"""Discretised delay/Doppler search grids for the ML estimators.

Grid steps follow the zero-padded transform quanta: 1/(M' * delta_f) on the
delay axis and 1/(N' * period) on the Doppler axis, where the period is the
slot spacing of the waveform being searched (T + T_cp for OFDM, T for OTFS
and for FMCW chirps).  Axes are integer multiples of the step so fast
transforms can evaluate the search statistic exactly on the grid.
"""

import math
from dataclasses import dataclass, field

import numpy as np

WAVEFORM_PERIODS = {"ofdm": "symbol_duration_total",
                    "otfs": "symbol_duration",
                    "fmcw": "symbol_duration"}


@dataclass(frozen=True)
class EstimationGrid:
    """Search set: delay axis j*delay_step, Doppler axis k*doppler_step.

    delay_indices holds the integers j >= 0, doppler_indices the signed
    integers k.  Search order (and argmax tie-breaking) is delay-major,
    Doppler-minor.
    """

    delay_values: np.ndarray
    doppler_values: np.ndarray
    delay_indices: np.ndarray
    doppler_indices: np.ndarray
    delay_step: float
    doppler_step: float
    n_prime: int
    m_prime: int
    doppler_period: float
    waveform: str = field(default="ofdm")

    @property
    def n_points(self):
        return len(self.delay_values) * len(self.doppler_values)

    def iter_points(self):
        """Yield (delay_idx, doppler_idx, tau, nu) in search order."""
        for j, tau in enumerate(self.delay_values):
            for k, nu in enumerate(self.doppler_values):
                yield j, k, tau, nu


def make_estimation_grid(cfg, n_prime, m_prime, tau_max, nu_max,
                         waveform="ofdm"):
    """Build the search grid covering [0, tau_max) x [-nu_max, nu_max].

    n_prime/m_prime are the zero-padded transform lengths; they must not
    undersample the frame (n_prime >= N, m_prime >= M).
    """
    if waveform not in WAVEFORM_PERIODS:
        raise ValueError(f"unknown waveform {waveform!r}")
    if n_prime < cfg.n_symbols:
        raise ValueError(f"n_prime={n_prime} undersamples N={cfg.n_symbols}")
    if m_prime < cfg.m_subcarriers:
        raise ValueError(f"m_prime={m_prime} undersamples M={cfg.m_subcarriers}")
    if tau_max < 0 or nu_max < 0:
        raise ValueError("tau_max and nu_max must be nonnegative")

    period = getattr(cfg, WAVEFORM_PERIODS[waveform])
    delay_step = 1.0 / (m_prime * cfg.subcarrier_spacing)
    doppler_step = 1.0 / (n_prime * period)

    n_delay = max(1, math.ceil(tau_max / delay_step - 1e-12))
    delay_idx = np.arange(n_delay, dtype=np.int64)
    k_max = math.ceil(nu_max / doppler_step - 1e-12) if nu_max > 0 else 0
    doppler_idx = np.arange(-k_max, k_max + 1, dtype=np.int64)

    return EstimationGrid(
        delay_values=delay_idx * delay_step,
        doppler_values=doppler_idx * doppler_step,
        delay_indices=delay_idx,
        doppler_indices=doppler_idx,
        delay_step=delay_step,
        doppler_step=doppler_step,
        n_prime=int(n_prime),
        m_prime=int(m_prime),
        doppler_period=period,
        waveform=waveform,
    )
