"""OFDM radar: observation synthesis, periodogram ML estimation, bounds.

After the radar receiver strips the known data-symbol phases, each
time-frequency sample reduces to

    z[n, m] = A[n, m] * h * exp(+j 2 pi n T_o nu) * exp(-j 2 pi m df tau) + w[n, m]

with A the transmitted amplitudes and w unit-variance complex Gaussian noise
(sigma configurable).  Delay and Doppler decouple, so the ML search is the
argmax of a two-dimensional periodogram evaluated with zero-padded FFTs.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import SingularFisherError
from .estimates import (SOURCE_CLOSED_FORM, SOURCE_NUMERIC_FISHER,
                        estimate_from_wave, report_from_normalized)
from .frame import check_admissible
from .symbols import DOMAIN_TIME_FREQUENCY

# observation model is valid while inter-carrier interference is negligible
_ICI_GUARD_FRACTION = 0.05


@dataclass(frozen=True)
class OfdmObservation:
    """Phase-compensated radar samples plus the amplitudes that formed them."""

    z: np.ndarray
    amplitudes: np.ndarray
    cfg: object

    def __post_init__(self):
        shape = (self.cfg.n_symbols, self.cfg.m_subcarriers)
        if self.z.shape != shape or self.amplitudes.shape != shape:
            raise ValueError(f"observation arrays must have shape {shape}")
        if np.any(self.amplitudes < 0):
            raise ValueError("amplitudes must be nonnegative")


def complex_noise(rng, shape, sigma):
    """Circularly-symmetric Gaussian noise with per-sample variance sigma^2."""
    if sigma == 0:
        return np.zeros(shape, dtype=np.complex128)
    return (sigma / np.sqrt(2.0)) * (rng.standard_normal(shape)
                                     + 1j * rng.standard_normal(shape))


def steering_phases(cfg, delay_s, doppler_hz):
    """exp(j2pi n T_o nu) and exp(-j2pi m df tau) as (N,) and (M,) vectors."""
    n = np.arange(cfg.n_symbols)
    m = np.arange(cfg.m_subcarriers)
    row = np.exp(2j * np.pi * n * cfg.symbol_duration_total * doppler_hz)
    col = np.exp(-2j * np.pi * m * cfg.subcarrier_spacing * delay_s)
    return row, col


def synthesize_observation(cfg, grid, target, noise_sigma=1.0, seed=0):
    """Simulate the phase-compensated radar observation of one target."""
    if grid.domain != DOMAIN_TIME_FREQUENCY:
        raise ValueError("OFDM radar expects a time-frequency symbol grid")
    check_admissible(cfg, target.delay_s, target.doppler_hz)
    if abs(target.doppler_hz) > _ICI_GUARD_FRACTION * cfg.subcarrier_spacing:
        warnings.warn(
            "Doppler exceeds 5% of the subcarrier spacing; the ICI-free "
            "observation model is inaccurate here", stacklevel=2)
    amps = grid.amplitudes
    row, col = steering_phases(cfg, target.delay_s, target.doppler_hz)
    clean = target.gain * amps * row[:, None] * col[None, :]
    rng = np.random.default_rng(seed)
    z = clean + complex_noise(rng, amps.shape, noise_sigma)
    return OfdmObservation(z=z, amplitudes=amps, cfg=cfg)


def _check_grid_period(obs_period, grid, what):
    if abs(grid.doppler_period - obs_period) > 1e-12 * obs_period:
        raise ValueError(
            f"grid Doppler period {grid.doppler_period!r} does not match the "
            f"{what} slot spacing {obs_period!r}")


def matched_spectrum(obs, grid):
    """Complex matched-filter output Z on the grid, shape (n_delay, n_doppler).

    Z(nu, tau) = sum_{n,m} z[n,m] A[n,m] exp(-j2pi nu n T_o) exp(+j2pi m df tau),
    evaluated at grid points via zero-padded FFTs of lengths N' and M'.
    """
    cfg = obs.cfg
    _check_grid_period(cfg.symbol_duration_total, grid, "OFDM")
    weighted = obs.z * obs.amplitudes
    # Doppler axis: forward FFT over n, length N'; bin k <-> nu = k / (N' T_o)
    spec_n = np.fft.fft(weighted, n=grid.n_prime, axis=0)
    rows = spec_n[np.mod(grid.doppler_indices, grid.n_prime), :]
    # delay axis: inverse FFT over m, length M'; bin j <-> tau = j / (M' df)
    spec = np.fft.ifft(rows, n=grid.m_prime, axis=1) * grid.m_prime
    z_grid = spec[:, np.mod(grid.delay_indices, grid.m_prime)]
    return z_grid.T  # (n_delay, n_doppler)


def periodogram(obs, grid):
    """|Z|^2 on the search grid, shape (n_delay, n_doppler)."""
    return np.abs(matched_spectrum(obs, grid)) ** 2


def _argmax_delay_major(power):
    flat = int(np.argmax(power))
    return np.unravel_index(flat, power.shape)


def ml_estimate(obs, grid):
    """Grid ML estimate: periodogram argmax, then the gain at the peak.

    Ties break toward the smallest delay index, then the smallest Doppler
    index.  range/velocity are c*tau/2 and c*nu/(2 fc).
    """
    if grid.n_points == 0:
        raise ValueError("empty estimation grid")
    z_grid = matched_spectrum(obs, grid)
    power = np.abs(z_grid) ** 2
    i_delay, i_dop = _argmax_delay_major(power)
    delay = grid.delay_values[i_delay]
    doppler = grid.doppler_values[i_dop]
    gain = z_grid[i_delay, i_dop] / np.sum(obs.amplitudes**2)
    return estimate_from_wave(gain, delay, doppler, obs.cfg.fc_hz,
                              power[i_delay, i_dop])


def crlb_closed_form(cfg, snr_rad):
    """Closed-form bounds on normalised Doppler/delay for arbitrary N, M.

    var_f = 6 / (snr (2 pi)^2 M N (N^2 - 1)), var_t likewise with M^2 - 1;
    snr_rad is the received radar SNR |h|^2 P_avg under unit-variance noise.
    """
    if snr_rad <= 0:
        raise ValueError("snr_rad must be positive")
    n, m = cfg.n_symbols, cfg.m_subcarriers
    scale = snr_rad * (2.0 * np.pi) ** 2 * m * n
    var_f = 6.0 / (scale * (n**2 - 1))
    var_t = 6.0 / (scale * (m**2 - 1))
    return report_from_normalized(var_f, var_t, cfg.symbol_duration_total,
                                  cfg.subcarrier_spacing, cfg.fc_hz,
                                  SOURCE_CLOSED_FORM)


def sinusoid2d_fisher(amplitudes, alpha, phi, f, t):
    """Fisher matrix of A[n,m] alpha e^{j phi} e^{j2pi n f} e^{-j2pi m t}.

    Parameters are theta = (alpha, phi, f, t); the observation noise is
    unit-variance circular Gaussian, giving I[i,j] = 2 Re sum d_i* d_j.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    amps = np.asarray(amplitudes, dtype=np.float64)
    n_sym, m_sub = amps.shape
    n = np.arange(n_sym)[:, None]
    m = np.arange(m_sub)[None, :]
    s = amps * alpha * np.exp(1j * (phi + 2 * np.pi * (n * f - m * t)))
    derivs = [s / alpha, 1j * s, 2j * np.pi * n * s, -2j * np.pi * m * s]
    fisher = np.empty((4, 4))
    for i in range(4):
        for j in range(i, 4):
            val = 2.0 * np.real(np.vdot(derivs[i], derivs[j]))
            fisher[i, j] = val
            fisher[j, i] = val
    return fisher


def fisher_matrix_numeric(cfg, amplitudes, theta):
    """4x4 Fisher matrix for theta = (alpha, phi, f, t) on this frame."""
    amps = np.asarray(amplitudes, dtype=np.float64)
    expected = (cfg.n_symbols, cfg.m_subcarriers)
    if amps.shape != expected:
        raise ValueError(f"amplitudes must have shape {expected}")
    alpha, phi, f, t = theta
    return sinusoid2d_fisher(amps, alpha, phi, f, t)


def invert_fisher(fisher):
    """Diagonal of the inverse Fisher matrix; raises if singular.

    The matrix is equilibrated (scaled to unit diagonal) before inversion so
    the singularity test is insensitive to parameter units.
    """
    fisher = np.asarray(fisher, dtype=np.float64)
    diag = np.diag(fisher)
    if not np.all(np.isfinite(diag)) or np.any(diag <= 0):
        raise SingularFisherError("Fisher matrix has a non-positive diagonal")
    scale = np.sqrt(diag)
    normalized = fisher / np.outer(scale, scale)
    cond = np.linalg.cond(normalized)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularFisherError(
            f"Fisher matrix is singular or near-singular (cond={cond:.3g})")
    return np.diag(np.linalg.inv(normalized)) / diag


def crlb_numeric(cfg, amplitudes, theta):
    """Numeric-Fisher bound report for the OFDM observation model."""
    diag = invert_fisher(fisher_matrix_numeric(cfg, amplitudes, theta))
    return report_from_normalized(diag[2], diag[3],
                                  cfg.symbol_duration_total,
                                  cfg.subcarrier_spacing, cfg.fc_hz,
                                  SOURCE_NUMERIC_FISHER)
