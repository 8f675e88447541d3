"""Frame geometry and propagation-path domain types.

A frame is an N x M grid of data symbols: N symbol slots in time, M
subcarriers across a bandwidth B = M * delta_f.  The same geometry serves the
OFDM radar (time-frequency symbols, cyclic prefix) and the OTFS radar
(delay-Doppler symbols, no prefix).  A Target holds one propagation path in
both its wave-domain form (complex gain, delay, Doppler) and its kinematic
form (range, velocity) under the round-trip radar convention.
"""

import math
from dataclasses import dataclass

from .constants import SPEED_OF_LIGHT
from .errors import AdmissibilityError


@dataclass(frozen=True)
class FrameConfig:
    """Immutable carrier/bandwidth/grid geometry with derived durations.

    Attributes
    ----------
    fc_hz : carrier frequency.
    bandwidth_hz : total bandwidth B = m_subcarriers * subcarrier_spacing.
    m_subcarriers : number of subcarriers M (delay axis size).
    n_symbols : number of symbol slots N (Doppler axis size).
    subcarrier_spacing : delta_f = B / M [Hz].
    symbol_duration : T = 1 / delta_f [s].
    cp_duration : cyclic-prefix length T_cp = cp_cycles * T / M [s].
    symbol_duration_total : T_o = T + T_cp [s] (OFDM slot spacing).
    cp_cycles : integer number of T/M sample periods in the prefix.
    avg_power : per-symbol average power budget.
    """

    fc_hz: float
    bandwidth_hz: float
    m_subcarriers: int
    n_symbols: int
    subcarrier_spacing: float
    symbol_duration: float
    cp_duration: float
    symbol_duration_total: float
    cp_cycles: int
    avg_power: float

    @property
    def grid_size(self):
        return self.n_symbols * self.m_subcarriers

    @property
    def frame_duration_ofdm(self):
        return self.n_symbols * self.symbol_duration_total

    @property
    def frame_duration_otfs(self):
        return self.n_symbols * self.symbol_duration

    @property
    def max_range_ofdm_m(self):
        """Largest unambiguous range for the CP-protected OFDM radar."""
        return SPEED_OF_LIGHT * self.cp_duration / 2.0

    @property
    def max_range_otfs_m(self):
        """Largest range representable within one symbol duration."""
        return SPEED_OF_LIGHT * self.symbol_duration / 2.0


def _round_if_close(x, tol=1e-9):
    r = round(x)
    return r if abs(x - r) < tol else None


def make_frame_config(fc_hz, bandwidth_hz, m_subcarriers, n_symbols,
                      cp_fraction, avg_power=1.0):
    """Build a FrameConfig from primary quantities.

    The cyclic prefix is quantised to an integer number of T/M sample
    periods; a fractional request is rounded up to the next whole cycle.
    """
    if not isinstance(m_subcarriers, (int,)) or isinstance(m_subcarriers, bool):
        raise ValueError("m_subcarriers must be an integer")
    if not isinstance(n_symbols, (int,)) or isinstance(n_symbols, bool):
        raise ValueError("n_symbols must be an integer")
    if m_subcarriers < 2 or n_symbols < 2:
        raise ValueError("need at least 2 subcarriers and 2 symbols")
    if fc_hz <= 0 or bandwidth_hz <= 0:
        raise ValueError("carrier frequency and bandwidth must be positive")
    if not 0.0 <= cp_fraction < 1.0:
        raise ValueError("cp_fraction must lie in [0, 1)")
    if avg_power <= 0:
        raise ValueError("avg_power must be positive")

    delta_f = bandwidth_hz / m_subcarriers
    symbol_t = 1.0 / delta_f
    cycles_exact = cp_fraction * m_subcarriers
    cycles = _round_if_close(cycles_exact)
    if cycles is None:
        cycles = math.ceil(cycles_exact)
    cp_t = cycles * symbol_t / m_subcarriers
    return FrameConfig(
        fc_hz=float(fc_hz),
        bandwidth_hz=float(bandwidth_hz),
        m_subcarriers=m_subcarriers,
        n_symbols=n_symbols,
        subcarrier_spacing=delta_f,
        symbol_duration=symbol_t,
        cp_duration=cp_t,
        symbol_duration_total=symbol_t + cp_t,
        cp_cycles=cycles,
        avg_power=float(avg_power),
    )


def frame_config_from_max_delay(fc_hz, bandwidth_hz, m_subcarriers, n_symbols,
                                tau_max, avg_power=1.0):
    """Like make_frame_config but sizing the prefix to absorb tau_max."""
    delta_f = bandwidth_hz / m_subcarriers
    sample_t = 1.0 / (delta_f * m_subcarriers)
    cycles = math.ceil(tau_max / sample_t - 1e-12)
    return make_frame_config(fc_hz, bandwidth_hz, m_subcarriers, n_symbols,
                             cycles / m_subcarriers, avg_power)


def doppler_from_velocity(velocity_mps, fc_hz):
    """Round-trip Doppler shift of a target moving at velocity_mps."""
    return 2.0 * velocity_mps * fc_hz / SPEED_OF_LIGHT


def velocity_from_doppler(doppler_hz, fc_hz):
    return SPEED_OF_LIGHT * doppler_hz / (2.0 * fc_hz)


def delay_from_range(range_m):
    """Round-trip propagation delay of a reflector at range_m."""
    return 2.0 * range_m / SPEED_OF_LIGHT


def range_from_delay(delay_s):
    return SPEED_OF_LIGHT * delay_s / 2.0


def check_admissible(cfg, delay_s, doppler_hz):
    """Raise AdmissibilityError unless 0 <= tau < T and |nu| < delta_f."""
    if not 0.0 <= delay_s < cfg.symbol_duration:
        raise AdmissibilityError(
            f"delay {delay_s:.6g} s outside [0, {cfg.symbol_duration:.6g} s)")
    if abs(doppler_hz) >= cfg.subcarrier_spacing:
        raise AdmissibilityError(
            f"|Doppler| {abs(doppler_hz):.6g} Hz >= subcarrier spacing "
            f"{cfg.subcarrier_spacing:.6g} Hz")


@dataclass(frozen=True)
class Target:
    """One propagation path: complex gain plus delay/Doppler and range/velocity.

    The two views obey the round-trip convention nu = 2 v fc / c and
    tau = 2 r / c; constructors keep them consistent.
    """

    gain: complex
    delay_s: float
    doppler_hz: float
    range_m: float
    velocity_mps: float


def make_target_from_kinematics(range_m, velocity_mps, gain, cfg):
    """Target from range [m] and velocity [m/s]; validates admissibility."""
    delay = delay_from_range(range_m)
    doppler = doppler_from_velocity(velocity_mps, cfg.fc_hz)
    check_admissible(cfg, delay, doppler)
    return Target(gain=complex(gain), delay_s=delay, doppler_hz=doppler,
                  range_m=float(range_m), velocity_mps=float(velocity_mps))


def make_target_from_wave(delay_s, doppler_hz, gain, cfg):
    """Target from delay [s] and Doppler [Hz]; validates admissibility."""
    check_admissible(cfg, delay_s, doppler_hz)
    return Target(gain=complex(gain), delay_s=float(delay_s),
                  doppler_hz=float(doppler_hz),
                  range_m=range_from_delay(delay_s),
                  velocity_mps=velocity_from_doppler(doppler_hz, cfg.fc_hz))
