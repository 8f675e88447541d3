"""Data-symbol grids and constellation generators.

Constellations are registered in a small name -> sampler table.  Every
sampler is normalised so the ensemble mean power equals the frame's
avg_power budget; constant-modulus sets meet the budget with equality on
every draw.
"""

from dataclasses import dataclass

import numpy as np

from .rng import make_rng

DOMAIN_TIME_FREQUENCY = "time-frequency"
DOMAIN_DELAY_DOPPLER = "delay-doppler"


@dataclass(frozen=True)
class SymbolGrid:
    """N x M complex data symbols tagged with the domain they live in."""

    data: np.ndarray
    domain: str

    def __post_init__(self):
        if self.data.ndim != 2:
            raise ValueError("symbol grid must be two-dimensional")
        if self.domain not in (DOMAIN_TIME_FREQUENCY, DOMAIN_DELAY_DOPPLER):
            raise ValueError(f"unknown symbol domain {self.domain!r}")

    @property
    def amplitudes(self):
        return np.abs(self.data)

    @property
    def vector(self):
        """Row-major flattening: index = doppler_row * M + delay_col."""
        return self.data.reshape(-1)


def _qpsk_points():
    return (np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2.0))


def _qam16_points():
    levels = np.array([-3.0, -1.0, 1.0, 3.0])
    pts = (levels[:, None] + 1j * levels[None, :]).reshape(-1)
    return pts / np.sqrt(10.0)


def _sample_from_points(points):
    def sampler(rng, shape, avg_power):
        idx = rng.integers(0, len(points), size=shape)
        return np.sqrt(avg_power) * points[idx]
    return sampler


def _sample_constant_envelope(rng, shape, avg_power):
    phases = rng.uniform(0.0, 2.0 * np.pi, size=shape)
    return np.sqrt(avg_power) * np.exp(1j * phases)


CONSTELLATIONS = {
    "qpsk": _sample_from_points(_qpsk_points()),
    "16qam": _sample_from_points(_qam16_points()),
    "constant-envelope": _sample_constant_envelope,
}

_ALIASES = {"16-qam": "16qam", "qam16": "16qam", "constant": "constant-envelope"}


def register_constellation(name, sampler):
    """Add a custom constellation; sampler(rng, shape, avg_power) -> complex array."""
    CONSTELLATIONS[name.lower()] = sampler


def _resolve(name):
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    if key not in CONSTELLATIONS:
        known = ", ".join(sorted(CONSTELLATIONS))
        raise ValueError(f"unknown constellation {name!r} (known: {known})")
    return CONSTELLATIONS[key]


def generate_symbols(cfg, constellation, seed, domain=DOMAIN_TIME_FREQUENCY):
    """Draw an N x M symbol grid; identical seeds give identical grids."""
    sampler = _resolve(constellation)
    rng = make_rng(seed, "symbols")
    data = sampler(rng, (cfg.n_symbols, cfg.m_subcarriers), cfg.avg_power)
    return SymbolGrid(data=np.ascontiguousarray(data, dtype=np.complex128),
                      domain=domain)
