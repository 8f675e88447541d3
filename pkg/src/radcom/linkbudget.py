"""Link budget and achievable-rate formulas.

The radar return sees a two-way r^-4 path gain weighted by the target's
radar cross section; the forward communication link sees the one-way r^-2
gain.  Rates: OFDM pays the cyclic-prefix overhead T/(T+T_cp) on a scalar
AWGN channel, while OTFS achieves (1/NM) log2 det(I + SNR Psi Psi^H) over
its cross-talk channel.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import SPEED_OF_LIGHT


@dataclass(frozen=True)
class LinkBudget:
    wavelength_m: float
    rcs_m2: float
    antenna_gain: float
    range_m: float
    avg_power: float
    h0_sq: float      # two-way radar power gain |h0|^2
    g0_sq: float      # one-way communication power gain |g0|^2
    snr_rad: float
    snr_com: float


def compute_link_budget(fc_hz, rcs_m2, antenna_gain, range_m, avg_power):
    """Radar/communication SNRs from geometry under unit-variance noise."""
    if min(fc_hz, rcs_m2, antenna_gain, avg_power) <= 0:
        raise ValueError("link-budget inputs must be positive")
    if range_m <= 0:
        raise ValueError("range must be positive")
    lam = SPEED_OF_LIGHT / fc_hz
    h0_sq = lam**2 * rcs_m2 * antenna_gain**2 / ((4 * math.pi) ** 3 * range_m**4)
    g0_sq = lam**2 * antenna_gain**2 / ((4 * math.pi) ** 2 * range_m**2)
    return LinkBudget(
        wavelength_m=lam,
        rcs_m2=float(rcs_m2),
        antenna_gain=float(antenna_gain),
        range_m=float(range_m),
        avg_power=float(avg_power),
        h0_sq=h0_sq,
        g0_sq=g0_sq,
        snr_rad=h0_sq * avg_power,
        snr_com=g0_sq * avg_power,
    )


@dataclass(frozen=True)
class CommChannel:
    """Forward one-way path: half the radar Doppler, half the radar delay."""

    delay_s: float
    doppler_hz: float


def one_way_channel(range_m, velocity_mps, fc_hz):
    return CommChannel(
        delay_s=range_m / SPEED_OF_LIGHT,
        doppler_hz=velocity_mps * fc_hz / SPEED_OF_LIGHT,
    )


def rate_ofdm(cfg, snr_com):
    """(T / (T + T_cp)) * log2(1 + SNR) in bits/s/Hz."""
    if snr_com < 0:
        raise ValueError("snr_com must be nonnegative")
    overhead = cfg.symbol_duration / cfg.symbol_duration_total
    return overhead * math.log2(1.0 + snr_com)


def otfs_channel_singular_values(psi):
    """Singular values of the cross-talk matrix, for reuse across SNRs."""
    matrix = np.asarray(psi.matrix if hasattr(psi, "matrix") else psi)
    if not np.all(np.isfinite(matrix)):
        raise ValueError("cross-talk matrix contains non-finite entries")
    return np.linalg.svd(matrix, compute_uv=False)


def rate_otfs_from_singular_values(sigma, snr_com, grid_size):
    if snr_com < 0:
        raise ValueError("snr_com must be nonnegative")
    return float(np.sum(np.log1p(snr_com * sigma**2)) / (math.log(2.0) * grid_size))


def rate_otfs(cfg, snr_com, psi):
    """(1/NM) log2 det(I + SNR Psi Psi^H) via singular values.

    The determinant is never formed as a raw product; log1p over the
    squared singular values keeps the evaluation stable for any SNR.
    """
    sigma = otfs_channel_singular_values(psi)
    if sigma.size != cfg.grid_size:
        raise ValueError("cross-talk matrix does not match the frame size")
    return rate_otfs_from_singular_values(sigma, snr_com, cfg.grid_size)
