"""Result records shared by the three waveform estimators."""

from dataclasses import dataclass

from .constants import SPEED_OF_LIGHT

SOURCE_CLOSED_FORM = "closed-form"
SOURCE_NUMERIC_FISHER = "numeric-fisher"


@dataclass(frozen=True)
class RadarEstimate:
    """Point estimate of one path.

    range/velocity are exact algebraic rescalings of the wave-domain
    estimates: range = c * delay / 2, velocity = c * doppler / (2 fc).
    gain_prime is populated by the OTFS estimator (the rotated gain it
    estimates natively) and None elsewhere.
    """

    gain: complex
    delay_s: float
    doppler_hz: float
    range_m: float
    velocity_mps: float
    peak_metric: float
    gain_prime: complex | None = None


def estimate_from_wave(gain, delay_s, doppler_hz, fc_hz, peak_metric,
                       gain_prime=None):
    return RadarEstimate(
        gain=complex(gain),
        delay_s=float(delay_s),
        doppler_hz=float(doppler_hz),
        range_m=SPEED_OF_LIGHT * delay_s / 2.0,
        velocity_mps=SPEED_OF_LIGHT * doppler_hz / (2.0 * fc_hz),
        peak_metric=float(peak_metric),
        gain_prime=gain_prime,
    )


@dataclass(frozen=True)
class CrlbReport:
    """Variance lower bounds in normalised and physical units.

    var_f bounds the normalised Doppler f = period * nu and var_t the
    normalised delay t = delta_f * tau; the physical fields are exact unit
    conversions (var_doppler = var_f / period^2 and so on).  source records
    whether the bound came from the closed form or a numeric Fisher inverse.
    """

    var_f: float
    var_t: float
    var_doppler: float
    var_delay: float
    var_velocity: float
    var_range: float
    source: str
    doppler_period: float

    def __post_init__(self):
        for name in ("var_f", "var_t", "var_doppler", "var_delay",
                     "var_velocity", "var_range"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def report_from_normalized(var_f, var_t, doppler_period, subcarrier_spacing,
                           fc_hz, source):
    """CrlbReport from bounds on f = period*nu and t = delta_f*tau."""
    var_doppler = var_f / doppler_period**2
    var_delay = var_t / subcarrier_spacing**2
    return CrlbReport(
        var_f=var_f,
        var_t=var_t,
        var_doppler=var_doppler,
        var_delay=var_delay,
        var_velocity=var_doppler * (SPEED_OF_LIGHT / (2.0 * fc_hz)) ** 2,
        var_range=var_delay * (SPEED_OF_LIGHT / 2.0) ** 2,
        source=source,
        doppler_period=doppler_period,
    )


def report_from_physical(var_doppler, var_delay, doppler_period,
                         subcarrier_spacing, fc_hz, source):
    """CrlbReport from bounds on nu [Hz^2] and tau [s^2]."""
    return report_from_normalized(
        var_f=var_doppler * doppler_period**2,
        var_t=var_delay * subcarrier_spacing**2,
        doppler_period=doppler_period,
        subcarrier_spacing=subcarrier_spacing,
        fc_hz=fc_hz,
        source=source,
    )
