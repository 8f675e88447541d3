"""OTFS radar: cross-talk channel matrices, ML search and numeric bounds.

One propagation path (tau, nu) couples every transmitted delay-Doppler symbol
into every received one through an NM x NM cross-talk matrix.  With
rectangular pulses the matrix has a separable closed form built from periodic
Dirichlet ratios: a Doppler factor in (k' - k + nu N T), a delay factor in
(l' - l + tau M df), a per-column phase exp(j2pi nu l'/(M df)), and a wrap
factor on the last l_tau delay columns, which are the ones fed by the
previous time slot.  Row/column indices flatten as k*M + l.

`build_psi` evaluates that closed form ("approx" mode, the estimation model)
or the full double time/frequency sum with the exact rectangular-pulse
cross-ambiguity ("exact" mode).  The ML estimator maximises the normalised
matched statistic |x^H Psi^H y|^2 / (x^H Psi^H Psi x) over a search grid; a
factorised fast path computes the bank of matched vectors Psi x without ever
materialising Psi (it agrees with the naive matrix path to rounding, which
the tests assert).
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _backend
from ._kernels_numpy import dirichlet_plus
from .errors import AdmissibilityError, RadcomError
from .estimates import SOURCE_NUMERIC_FISHER, estimate_from_wave, report_from_physical
from .frame import check_admissible
from .ofdm import complex_noise, invert_fisher
from .symbols import DOMAIN_DELAY_DOPPLER

MODE_APPROX = "approx"
MODE_EXACT = "exact"


def delay_tap_count(tau, cfg):
    """Number of T/M sample periods covered by tau, rounded up.

    On-sample delays (tau an exact multiple of T/M) map to their own tap
    index; a tolerance absorbs floating-point drift in tau*M*df.
    """
    if not 0.0 <= tau < cfg.symbol_duration:
        raise AdmissibilityError(
            f"delay {tau:.6g} s outside [0, {cfg.symbol_duration:.6g} s)")
    x = tau * cfg.m_subcarriers * cfg.subcarrier_spacing
    nearest = round(x)
    if abs(x - nearest) < 1e-9:
        return int(nearest)
    return int(math.ceil(x))


def _geometric_phase_sum(theta, count):
    """sum_{i=0}^{count-1} exp(j theta i), evaluated stably."""
    if count <= 0:
        return 0.0j
    if abs(math.sin(theta / 2.0)) < 1e-12:
        return complex(count)
    return (np.exp(1j * theta * (count - 1) / 2.0)
            * math.sin(count * theta / 2.0) / math.sin(theta / 2.0))


def cross_ambiguity_rect(tau, nu, cfg, mode=MODE_APPROX):
    """Cross-ambiguity of unit-energy rectangular pulses of length T.

    Exact mode integrates over the pulse overlap analytically,
    (1/T) * integral_0^{T-tau} exp(j2pi nu s) ds; approx mode is its T/M
    sampled counterpart (1/M) sum_{i=0}^{M-1-l_tau} exp(j2pi nu T i / M).
    """
    t_sym = cfg.symbol_duration
    if not 0.0 <= tau < t_sym:
        raise AdmissibilityError(f"delay {tau:.6g} s outside [0, {t_sym:.6g} s)")
    if mode == MODE_APPROX:
        m_sub = cfg.m_subcarriers
        count = m_sub - delay_tap_count(tau, cfg)
        theta = 2.0 * np.pi * nu * t_sym / m_sub
        return _geometric_phase_sum(theta, count) / m_sub
    if mode == MODE_EXACT:
        span = t_sym - tau
        return (span / t_sym) * np.exp(1j * np.pi * nu * span) * np.sinc(nu * span)
    raise ValueError(f"unknown cross-ambiguity mode {mode!r}")


@dataclass(frozen=True)
class CrossTalkMatrix:
    """NM x NM map from transmitted to received delay-Doppler vectors.

    Row index flattens as k*M + l (Doppler major, delay minor); columns use
    the same convention for (k', l').
    """

    matrix: np.ndarray
    delay_s: float
    doppler_hz: float
    mode: str
    cfg: object


def _psi_exact(cfg, tau, nu):
    """Double time/frequency sum with the exact rectangular cross-ambiguity.

    The two time-slot branches (same slot, previous slot) are evaluated
    separately: branch b couples slot n to n-b, with the overlap integral
    taken over [0, T-tau] for b=0 and [T-tau, T] for b=1.
    """
    n_sym, m_sub = cfg.n_symbols, cfg.m_subcarriers
    t_sym, df = cfg.symbol_duration, cfg.subcarrier_spacing
    n = np.arange(n_sym)
    m = np.arange(m_sub)
    nu_tilde = (m[:, None] - m[None, :]) * df - nu  # (m, m')

    def kappa(lo, hi):
        span = hi - lo
        if span <= 0:
            return np.zeros_like(nu_tilde, dtype=np.complex128)
        return ((span / t_sym) * np.exp(-1j * np.pi * nu_tilde * (lo + hi))
                * np.sinc(nu_tilde * span))

    # F[m, l] = e^{j2pi m l/M} e^{-j2pi m df tau};  G[m', l'] = e^{-j2pi m' l'/M}
    f = (np.exp(2j * np.pi * np.outer(m, m) / m_sub)
         * np.exp(-2j * np.pi * m * df * tau)[:, None])
    g = np.exp(-2j * np.pi * np.outer(m, m) / m_sub)

    psi4 = np.zeros((n_sym, m_sub, n_sym, m_sub), dtype=np.complex128)
    for branch in (0, 1):
        if branch == 0:
            c_mat = kappa(0.0, t_sym - tau)
        else:
            c_mat = kappa(t_sym - tau, t_sym)
        # P_b[k, k'] = sum_n e^{-j2pi n k/N} e^{j2pi (n-b) k'/N} e^{j2pi (n-b) T nu}
        shift = np.exp(-2j * np.pi * branch * (n / n_sym + nu * t_sym))  # per k'
        base = dirichlet_plus((n[None, :] - n[:, None]) + nu * n_sym * t_sym,
                              n_sym)
        p_mat = base * shift[None, :]
        q_mat = f.T @ c_mat @ g  # (l, l')
        psi4 += p_mat[:, None, :, None] * q_mat[None, :, None, :]
    nm = n_sym * m_sub
    return psi4.reshape(nm, nm) / nm


def build_psi(cfg, tau, nu, mode=MODE_APPROX):
    """Cross-talk matrix of one admissible path."""
    check_admissible(cfg, tau, nu)
    if mode == MODE_APPROX:
        l_tau = delay_tap_count(tau, cfg)
        matrix = _backend.psi_matrix(cfg.n_symbols, cfg.m_subcarriers,
                                     float(tau), float(nu),
                                     cfg.symbol_duration,
                                     cfg.subcarrier_spacing, l_tau)
    elif mode == MODE_EXACT:
        matrix = _psi_exact(cfg, tau, nu)
    else:
        raise ValueError(f"unknown cross-talk mode {mode!r}")
    return CrossTalkMatrix(matrix=matrix, delay_s=float(tau),
                           doppler_hz=float(nu), mode=mode, cfg=cfg)


def psi_derivatives(cfg, tau, nu):
    """Analytic (d Psi/d tau, d Psi/d nu) of the closed-form matrix.

    The tap count l_tau is piecewise constant in tau, so the tau derivative
    is the almost-everywhere one (undefined exactly on sample boundaries).
    """
    check_admissible(cfg, tau, nu)
    l_tau = delay_tap_count(tau, cfg)
    return _backend.psi_derivative_matrices(
        cfg.n_symbols, cfg.m_subcarriers, float(tau), float(nu),
        cfg.symbol_duration, cfg.subcarrier_spacing, l_tau)


@dataclass(frozen=True)
class OtfsObservation:
    """Received and transmitted delay-Doppler vectors (length N*M)."""

    y: np.ndarray
    x: np.ndarray
    cfg: object

    def __post_init__(self):
        nm = self.cfg.grid_size
        if self.y.shape != (nm,) or self.x.shape != (nm,):
            raise ValueError(f"observation vectors must have length {nm}")


def rotated_gain(target):
    """Gain as seen in the delay-Doppler domain: h' = h exp(j2pi nu tau)."""
    return target.gain * np.exp(2j * np.pi * target.doppler_hz * target.delay_s)


def synthesize_observation_otfs(cfg, grid, target, noise_sigma=1.0, seed=0,
                                mode=MODE_APPROX, psi=None):
    """Simulate y = h' Psi x + w for one target.

    psi may carry a precomputed CrossTalkMatrix for the target to avoid
    rebuilding it across Monte Carlo trials.
    """
    if grid.domain != DOMAIN_DELAY_DOPPLER:
        raise ValueError("OTFS radar expects a delay-Doppler symbol grid")
    check_admissible(cfg, target.delay_s, target.doppler_hz)
    if psi is None:
        psi = build_psi(cfg, target.delay_s, target.doppler_hz, mode)
    x = grid.vector
    rng = np.random.default_rng(seed)
    y = rotated_gain(target) * (psi.matrix @ x)
    y = y + complex_noise(rng, y.shape, noise_sigma)
    return OtfsObservation(y=y, x=x, cfg=cfg)


@dataclass(frozen=True)
class MatchedBank:
    """Per-grid-point matched vectors v = Psi x and their energies.

    `matched_conj` holds conj(v) row per grid point (stored conjugated so the
    per-trial statistic is a single matrix-vector product); rows follow the
    grid's delay-major search order, with `taus`/`nus` giving each row's
    (tau, nu).
    """

    matched_conj: np.ndarray
    norms: np.ndarray
    taus: np.ndarray
    nus: np.ndarray
    grid: object
    mode: str
    method: str


def _bank_points(grid):
    taus = np.repeat(grid.delay_values, len(grid.doppler_values))
    nus = np.tile(grid.doppler_values, len(grid.delay_values))
    return taus, nus


def _bank_naive(cfg, x, taus, nus, mode):
    vectors = np.empty((len(taus), x.size), dtype=np.complex128)
    for i, (tau, nu) in enumerate(zip(taus, nus)):
        vectors[i] = build_psi(cfg, tau, nu, mode).matrix @ x
    return vectors


def _bank_fast(cfg, x, grid):
    """Factorised evaluation of Psi x per grid point.

    With Psi = (1/NM) Dn (X-weighting) Dm^T the matched vector is
    Dn @ (X * col_phase * col_wrap) @ Dm.T / NM, costing O(N^2 M + N M^2)
    instead of (NM)^2 per point.
    """
    n_sym, m_sub = cfg.n_symbols, cfg.m_subcarriers
    t_sym, df = cfg.symbol_duration, cfg.subcarrier_spacing
    x_mat = x.reshape(n_sym, m_sub)
    k = np.arange(n_sym, dtype=np.float64)
    l = np.arange(m_sub, dtype=np.float64)
    k_diff = k[None, :] - k[:, None]
    l_diff = l[None, :] - l[:, None]

    per_nu = []
    for nu in grid.doppler_values:
        dn = dirichlet_plus(k_diff + nu * n_sym * t_sym, n_sym)
        col_phase = np.exp(2j * np.pi * nu * l / (m_sub * df))
        wrap = np.exp(-2j * np.pi * (k / n_sym + nu * t_sym))
        per_nu.append((dn, col_phase, wrap))

    nm = n_sym * m_sub
    vectors = np.empty((grid.n_points, nm), dtype=np.complex128)
    row = 0
    for tau in grid.delay_values:
        dm_t = np.conj(dirichlet_plus(l_diff + tau * m_sub * df, m_sub)).T
        l_tau = delay_tap_count(tau, cfg)
        isi = l >= (m_sub - l_tau)
        for dn, col_phase, wrap in per_nu:
            weighted = x_mat * col_phase[None, :]
            weighted = np.where(isi[None, :], wrap[:, None] * weighted, weighted)
            vectors[row] = (dn @ weighted @ dm_t).reshape(nm) / nm
            row += 1
    return vectors


def matched_bank(cfg, x, grid, mode=MODE_APPROX, method="fast"):
    """Precompute the matched-vector bank for a symbol vector over a grid."""
    if grid.doppler_period != cfg.symbol_duration:
        raise ValueError("grid must be built for the OTFS symbol period")
    if len(grid.delay_values) and grid.delay_values[-1] >= cfg.symbol_duration:
        raise AdmissibilityError("grid delays reach beyond the symbol duration")
    if len(grid.doppler_values) and \
            np.max(np.abs(grid.doppler_values)) >= cfg.subcarrier_spacing:
        raise AdmissibilityError("grid Dopplers reach the subcarrier spacing")
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    taus, nus = _bank_points(grid)
    if mode == MODE_EXACT or method == "naive":
        vectors = _bank_naive(cfg, x, taus, nus, mode)
        used = "naive"
    elif method == "fast":
        vectors = _bank_fast(cfg, x, grid)
        used = "fast"
    else:
        raise ValueError(f"unknown bank method {method!r}")
    norms = np.einsum("ij,ij->i", vectors.conj(), vectors).real
    np.conjugate(vectors, out=vectors)
    return MatchedBank(matched_conj=vectors, norms=norms, taus=taus, nus=nus,
                       grid=grid, mode=mode, method=used)


def matched_statistics(bank, y):
    """Normalised matched statistic |v^H y|^2 / ||v||^2 at every grid point."""
    numer = bank.matched_conj @ y
    tiny = bank.norms <= 1e-12 * max(float(bank.norms.max()), 1e-300)
    if np.any(tiny):
        warnings.warn(f"skipping {int(tiny.sum())} grid points with "
                      "vanishing matched energy", stacklevel=2)
    stat = np.full(bank.norms.shape, -np.inf)
    ok = ~tiny
    stat[ok] = np.abs(numer[ok]) ** 2 / bank.norms[ok]
    return stat, numer


def ml_estimate_otfs(obs, grid=None, mode=MODE_APPROX, method="fast",
                     bank=None):
    """Generalised-likelihood estimate over the grid.

    Returns the argmax of the normalised matched statistic (ties resolve to
    the smallest delay index, then the smallest Doppler index), the rotated
    gain estimate h' at the peak, and its back-conversion
    h = h' exp(-j2pi nu tau).
    """
    if bank is None:
        if grid is None or grid.n_points == 0:
            raise ValueError("empty estimation grid")
        bank = matched_bank(obs.cfg, obs.x, grid, mode, method)
    elif bank.grid.n_points == 0:
        raise ValueError("empty estimation grid")
    stat, numer = matched_statistics(bank, obs.y)
    if not np.any(np.isfinite(stat)):
        raise RadcomError("all grid points had vanishing matched energy")
    peak = int(np.argmax(stat))
    tau = bank.taus[peak]
    nu = bank.nus[peak]
    gain_prime = numer[peak] / bank.norms[peak]
    gain = gain_prime * np.exp(-2j * np.pi * nu * tau)
    return estimate_from_wave(gain, tau, nu, obs.cfg.fc_hz, stat[peak],
                              gain_prime=complex(gain_prime))


def fisher_matrix_otfs(cfg, x, tau, nu, snr_rad):
    """4x4 Fisher matrix over theta = (alpha, phi, nu, tau), alpha = |h'|.

    Uses the analytic matrix derivatives; snr_rad = alpha^2 * avg_power under
    unit-variance noise, so alpha = sqrt(snr_rad / avg_power).
    """
    if snr_rad <= 0:
        raise ValueError("snr_rad must be positive")
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    psi = build_psi(cfg, tau, nu, MODE_APPROX).matrix
    dpsi_tau, dpsi_nu = psi_derivatives(cfg, tau, nu)
    alpha = math.sqrt(snr_rad / cfg.avg_power)
    u0 = psi @ x
    derivs = [u0, 1j * alpha * u0, alpha * (dpsi_nu @ x), alpha * (dpsi_tau @ x)]
    fisher = np.empty((4, 4))
    for i in range(4):
        for j in range(i, 4):
            val = 2.0 * np.real(np.vdot(derivs[i], derivs[j]))
            fisher[i, j] = val
            fisher[j, i] = val
    return fisher


def crlb_numeric_otfs(cfg, x, tau, nu, snr_rad):
    """Numeric-Fisher bound report; Doppler normalisation uses T."""
    diag = invert_fisher(fisher_matrix_otfs(cfg, x, tau, nu, snr_rad))
    return report_from_physical(diag[2], diag[3], cfg.symbol_duration,
                                cfg.subcarrier_spacing, cfg.fc_hz,
                                SOURCE_NUMERIC_FISHER)
