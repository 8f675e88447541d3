"""FMCW reference radar with matched time-bandwidth resources.

A sawtooth chirp sequence with zero idle time, dechirped at the receiver:
the beat sample at fast-time index i of chirp q is

    beat[i, q] = sqrt(P) h exp(+j 2 pi slope tau i / fs) exp(+j 2 pi nu q T_chirp) + w

so delay appears as a beat frequency in fast time and Doppler as a phase
progression across chirps.  With samples-per-chirp = M, chirps = N, sample
rate = B and T_chirp = 1/df this occupies exactly the OTFS frame's time and
bandwidth, and the estimator/bound machinery mirrors the OFDM module.
"""

from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError
from .estimates import SOURCE_NUMERIC_FISHER, estimate_from_wave, report_from_normalized
from .ofdm import complex_noise, invert_fisher, sinusoid2d_fisher


@dataclass(frozen=True)
class FmcwConfig:
    """Sawtooth chirp geometry; slope * chirp_duration = bandwidth."""

    chirp_slope: float
    chirp_duration: float
    n_chirps: int
    bandwidth_hz: float
    sample_rate_hz: float
    samples_per_chirp: int
    fc_hz: float
    avg_power: float

    def __post_init__(self):
        if abs(self.chirp_slope * self.chirp_duration - self.bandwidth_hz) \
                > 1e-6 * self.bandwidth_hz:
            raise ValueError("slope * duration must equal the bandwidth")

    @property
    def frame_duration(self):
        return self.n_chirps * self.chirp_duration


def fmcw_from_frame(cfg):
    """FMCW waveform using the same time/bandwidth budget as an OTFS frame."""
    return FmcwConfig(
        chirp_slope=cfg.bandwidth_hz / cfg.symbol_duration,
        chirp_duration=cfg.symbol_duration,
        n_chirps=cfg.n_symbols,
        bandwidth_hz=cfg.bandwidth_hz,
        sample_rate_hz=cfg.bandwidth_hz,
        samples_per_chirp=cfg.m_subcarriers,
        fc_hz=cfg.fc_hz,
        avg_power=cfg.avg_power,
    )


def synthesize_beat_signal(fmcw_cfg, target, noise_sigma=1.0, seed=0):
    """Dechirped samples, shape (samples_per_chirp, n_chirps)."""
    if not 0.0 <= target.delay_s < fmcw_cfg.chirp_duration:
        raise AdmissibilityError(
            f"delay {target.delay_s:.6g} s exceeds the chirp duration "
            f"{fmcw_cfg.chirp_duration:.6g} s")
    i = np.arange(fmcw_cfg.samples_per_chirp)
    q = np.arange(fmcw_cfg.n_chirps)
    beat_freq = fmcw_cfg.chirp_slope * target.delay_s
    fast = np.exp(2j * np.pi * beat_freq * i / fmcw_cfg.sample_rate_hz)
    slow = np.exp(2j * np.pi * target.doppler_hz * q * fmcw_cfg.chirp_duration)
    clean = (np.sqrt(fmcw_cfg.avg_power) * target.gain
             * fast[:, None] * slow[None, :])
    rng = np.random.default_rng(seed)
    return clean + complex_noise(rng, clean.shape, noise_sigma)


def matched_spectrum_fmcw(beat, grid, fmcw_cfg):
    """Matched-filter output over the grid, shape (n_delay, n_doppler).

    Z(nu, tau) = sqrt(P) sum_{i,q} beat[i,q] exp(-j2pi slope tau i/fs)
                 exp(-j2pi nu q T_chirp); both axes reduce to zero-padded
    forward FFTs on the grid's bin indices.
    """
    if abs(grid.doppler_period - fmcw_cfg.chirp_duration) \
            > 1e-12 * fmcw_cfg.chirp_duration:
        raise ValueError("grid Doppler period must equal the chirp duration")
    weighted = beat * np.sqrt(fmcw_cfg.avg_power)
    spec_q = np.fft.fft(weighted, n=grid.n_prime, axis=1)
    cols = spec_q[:, np.mod(grid.doppler_indices, grid.n_prime)]
    spec = np.fft.fft(cols, n=grid.m_prime, axis=0)
    return spec[np.mod(grid.delay_indices, grid.m_prime), :]


def ml_estimate_fmcw(beat, grid, fmcw_cfg):
    """Periodogram argmax over the grid, mirroring the OFDM estimator."""
    if grid.n_points == 0:
        raise ValueError("empty estimation grid")
    z_grid = matched_spectrum_fmcw(beat, grid, fmcw_cfg)
    power = np.abs(z_grid) ** 2
    flat = int(np.argmax(power))
    i_delay, i_dop = np.unravel_index(flat, power.shape)
    delay = grid.delay_values[i_delay]
    doppler = grid.doppler_values[i_dop]
    amp_energy = (fmcw_cfg.avg_power
                  * fmcw_cfg.samples_per_chirp * fmcw_cfg.n_chirps)
    gain = z_grid[i_delay, i_dop] / amp_energy
    return estimate_from_wave(gain, delay, doppler, fmcw_cfg.fc_hz,
                              power[i_delay, i_dop])


def crlb_fmcw(fmcw_cfg, snr_rad):
    """Numeric Fisher bound of the beat model under unit-variance noise.

    The beat signal is a constant-amplitude 2-D complex sinusoid in
    (f, t) = (T_chirp * nu, tau / T_chirp), so the Fisher matrix of the OFDM
    machinery applies with the chirp duration as the slot period.
    """
    if snr_rad <= 0:
        raise ValueError("snr_rad must be positive")
    amps = np.full((fmcw_cfg.n_chirps, fmcw_cfg.samples_per_chirp),
                   np.sqrt(fmcw_cfg.avg_power))
    alpha = np.sqrt(snr_rad / fmcw_cfg.avg_power)
    fisher = sinusoid2d_fisher(amps, alpha, 0.0, 0.0, 0.0)
    diag = invert_fisher(fisher)
    delta_f_equiv = 1.0 / fmcw_cfg.chirp_duration
    return report_from_normalized(diag[2], diag[3], fmcw_cfg.chirp_duration,
                                  delta_f_equiv, fmcw_cfg.fc_hz,
                                  SOURCE_NUMERIC_FISHER)
