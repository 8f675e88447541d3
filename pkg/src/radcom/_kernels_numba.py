"""Numba-compiled versions of the hot kernels.

Entry-wise loops over the (N*M)^2 cross-talk matrix dominate the OTFS search
and bound computations; these kernels match `._kernels_numpy` to rounding
error (the benchmark and the test suite assert agreement).
"""

import cmath
import math

import numpy as np
from numba import njit, prange

_SINGULAR_TOL = 1e-12
_DERIV_DIRECT_TOL = 1e-6


@njit(cache=True)
def _dirichlet_plus(a, n):
    k = np.rint(a / n)
    rem = a - n * k
    if abs(rem) < _SINGULAR_TOL:
        return complex(n, 0.0)
    ka = np.rint(a)
    ra = a - ka
    sin_a = math.sin(math.pi * ra)
    if int(ka) % 2 != 0:
        sin_a = -sin_a
    q = a / n
    kq = np.rint(q)
    rq = q - kq
    sin_q = math.sin(math.pi * rq)
    if int(kq) % 2 != 0:
        sin_q = -sin_q
    w = a - q
    w = w - 2.0 * np.rint(w / 2.0)
    return cmath.exp(1j * math.pi * w) * (sin_a / sin_q)


@njit(cache=True)
def _dirichlet_plus_deriv(a, n):
    k = np.rint(a / n)
    rem = a - n * k
    if abs(rem) < _DERIV_DIRECT_TOL:
        acc = 0.0j
        for m in range(n):
            acc += (2j * math.pi * m / n) * cmath.exp(2j * math.pi * a * m / n)
        return acc
    ka = np.rint(a)
    ra = a - ka
    sgn_a = -1.0 if int(ka) % 2 != 0 else 1.0
    sin_a = math.sin(math.pi * ra) * sgn_a
    cos_a = math.cos(math.pi * ra) * sgn_a
    q = a / n
    kq = np.rint(q)
    rq = q - kq
    sgn_q = -1.0 if int(kq) % 2 != 0 else 1.0
    sin_q = math.sin(math.pi * rq) * sgn_q
    cos_q = math.cos(math.pi * rq) * sgn_q
    w = a - q
    w = w - 2.0 * np.rint(w / 2.0)
    phase = cmath.exp(1j * math.pi * w)
    ratio = sin_a / sin_q
    ratio_d = (math.pi * cos_a * sin_q - (math.pi / n) * sin_a * cos_q) / (sin_q * sin_q)
    return phase * (1j * math.pi * (n - 1) / n * ratio + ratio_d)


@njit(cache=True)
def _factor_tables(n_sym, m_sub, tau, nu, symbol_t, delta_f):
    dn = np.empty((n_sym, n_sym), np.complex128)
    for k in range(n_sym):
        for k2 in range(n_sym):
            dn[k, k2] = _dirichlet_plus((k2 - k) + nu * n_sym * symbol_t, n_sym)
    dm = np.empty((m_sub, m_sub), np.complex128)
    for l in range(m_sub):
        for l2 in range(m_sub):
            dm[l, l2] = np.conj(
                _dirichlet_plus((l2 - l) + tau * m_sub * delta_f, m_sub))
    col_phase = np.empty(m_sub, np.complex128)
    for l2 in range(m_sub):
        col_phase[l2] = cmath.exp(2j * math.pi * nu * l2 / (m_sub * delta_f))
    wrap = np.empty(n_sym, np.complex128)
    for k2 in range(n_sym):
        wrap[k2] = cmath.exp(-2j * math.pi * (k2 / n_sym + nu * symbol_t))
    return dn, dm, col_phase, wrap


@njit(cache=True, parallel=True)
def psi_matrix(n_sym, m_sub, tau, nu, symbol_t, delta_f, l_tau):
    dn, dm, col_phase, wrap = _factor_tables(n_sym, m_sub, tau, nu,
                                             symbol_t, delta_f)
    nm = n_sym * m_sub
    out = np.empty((nm, nm), np.complex128)
    inv = 1.0 / nm
    for row in prange(nm):
        k = row // m_sub
        l = row % m_sub
        for k2 in range(n_sym):
            dn_val = dn[k, k2]
            w = wrap[k2]
            base = k2 * m_sub
            for l2 in range(m_sub):
                v = dn_val * dm[l, l2] * col_phase[l2]
                if l2 >= m_sub - l_tau:
                    v = v * w
                out[row, base + l2] = v * inv
    return out


@njit(cache=True, parallel=True)
def psi_derivative_matrices(n_sym, m_sub, tau, nu, symbol_t, delta_f, l_tau):
    dn, dm, col_phase, wrap = _factor_tables(n_sym, m_sub, tau, nu,
                                             symbol_t, delta_f)
    dn_dnu = np.empty((n_sym, n_sym), np.complex128)
    for k in range(n_sym):
        for k2 in range(n_sym):
            dn_dnu[k, k2] = _dirichlet_plus_deriv(
                (k2 - k) + nu * n_sym * symbol_t, n_sym) * (n_sym * symbol_t)
    dm_dtau = np.empty((m_sub, m_sub), np.complex128)
    for l in range(m_sub):
        for l2 in range(m_sub):
            dm_dtau[l, l2] = np.conj(_dirichlet_plus_deriv(
                (l2 - l) + tau * m_sub * delta_f, m_sub)) * (m_sub * delta_f)
    nu_col = np.empty(m_sub, np.complex128)
    for l2 in range(m_sub):
        extra = 2j * math.pi * l2 / (m_sub * delta_f)
        if l2 >= m_sub - l_tau:
            extra = extra - 2j * math.pi * symbol_t
        nu_col[l2] = extra

    nm = n_sym * m_sub
    out_tau = np.empty((nm, nm), np.complex128)
    out_nu = np.empty((nm, nm), np.complex128)
    inv = 1.0 / nm
    for row in prange(nm):
        k = row // m_sub
        l = row % m_sub
        for k2 in range(n_sym):
            dn_val = dn[k, k2]
            dn_d = dn_dnu[k, k2]
            w = wrap[k2]
            base = k2 * m_sub
            for l2 in range(m_sub):
                cf = col_phase[l2]
                wrap_f = w if l2 >= m_sub - l_tau else 1.0 + 0.0j
                out_tau[row, base + l2] = dn_val * dm_dtau[l, l2] * cf * wrap_f * inv
                base_v = dm[l, l2] * cf * wrap_f
                out_nu[row, base + l2] = (dn_d * base_v
                                          + dn_val * base_v * nu_col[l2]) * inv
    return out_tau, out_nu
