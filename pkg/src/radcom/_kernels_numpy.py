"""Pure-numpy implementations of the hot numeric kernels.

These are the reference/fallback implementations; `radcom._backend` swaps in
numba-compiled equivalents when available.  The central primitive is the
periodic Dirichlet ratio

    dirichlet_plus(a, n) = sum_{m=0}^{n-1} exp(+j 2 pi a m / n)
                         = exp(j pi a (n-1)/n) * sin(pi a) / sin(pi a / n)

whose removable singularities (a an integer multiple of n) evaluate to n.
Sines are evaluated on integer-reduced arguments so the ratio stays accurate
near its zeros and poles.
"""

import numpy as np

_SINGULAR_TOL = 1e-12
_DERIV_DIRECT_TOL = 1e-6


def _parity_sign(k):
    return np.where(k.astype(np.int64) % 2 == 0, 1.0, -1.0)


def _reduced_trig(a, n):
    """Integer-reduced sin/cos of pi*a and pi*(a/n), plus the phase factor."""
    ka = np.rint(a)
    ra = a - ka
    sign_a = _parity_sign(ka)
    q = a / n
    kq = np.rint(q)
    rq = q - kq
    sign_q = _parity_sign(kq)
    sin_a = np.sin(np.pi * ra) * sign_a
    cos_a = np.cos(np.pi * ra) * sign_a
    sin_q = np.sin(np.pi * rq) * sign_q
    cos_q = np.cos(np.pi * rq) * sign_q
    w = a - q
    w = w - 2.0 * np.rint(w / 2.0)
    phase = np.exp(1j * np.pi * w)
    return sin_a, cos_a, sin_q, cos_q, phase


def dirichlet_plus(a, n):
    """sum_{m=0}^{n-1} exp(+j 2 pi a m / n), elementwise over array a."""
    a = np.asarray(a, dtype=np.float64)
    rem = a - n * np.rint(a / n)
    singular = np.abs(rem) < _SINGULAR_TOL
    sin_a, _, sin_q, _, phase = _reduced_trig(a, n)
    den = np.where(singular, 1.0, sin_q)
    out = phase * (sin_a / den)
    return np.where(singular, complex(n), out)


def dirichlet_plus_deriv(a, n):
    """d/da of dirichlet_plus(a, n)."""
    a = np.asarray(a, dtype=np.float64)
    rem = a - n * np.rint(a / n)
    near = np.abs(rem) < _DERIV_DIRECT_TOL
    sin_a, cos_a, sin_q, cos_q, phase = _reduced_trig(a, n)
    den = np.where(near, 1.0, sin_q)
    ratio = sin_a / den
    ratio_d = (np.pi * cos_a * den - (np.pi / n) * sin_a * cos_q) / den**2
    out = phase * (1j * np.pi * (n - 1) / n * ratio + ratio_d)
    if np.any(near):
        flat = out.reshape(-1)
        idx = np.flatnonzero(near.reshape(-1))
        m = np.arange(n)
        coeff = 2j * np.pi * m / n
        a_near = a.reshape(-1)[idx]
        flat[idx] = np.exp(2j * np.pi * np.outer(a_near, m) / n) @ coeff
        out = flat.reshape(out.shape)
    return out


def psi_factors(n_sym, m_sub, tau, nu, symbol_t, delta_f, l_tau):
    """Separable building blocks of the cross-talk matrix.

    Returns (Dn, Dm, col_phase, wrap) where
      Dn[k, k']  = dirichlet_plus(k' - k + nu*N*T, N)
      Dm[l, l']  = conj(dirichlet_plus(l' - l + tau*M*df, M))
      col_phase[l'] = exp(+j 2 pi nu l' / (M df))
      wrap[k']   = exp(-j 2 pi (k'/N + nu T))  (applied on columns l' >= M - l_tau)
    """
    k = np.arange(n_sym, dtype=np.float64)
    l = np.arange(m_sub, dtype=np.float64)
    a = (k[None, :] - k[:, None]) + nu * n_sym * symbol_t
    b = (l[None, :] - l[:, None]) + tau * m_sub * delta_f
    dn = dirichlet_plus(a, n_sym)
    dm = np.conj(dirichlet_plus(b, m_sub))
    col_phase = np.exp(2j * np.pi * nu * l / (m_sub * delta_f))
    wrap = np.exp(-2j * np.pi * (k / n_sym + nu * symbol_t))
    return dn, dm, col_phase, wrap


def _column_factor(n_sym, m_sub, l_tau, wrap):
    isi = np.arange(m_sub) >= (m_sub - l_tau)
    return np.where(isi[None, :], wrap[:, None], 1.0 + 0.0j)  # (k', l')


def psi_matrix(n_sym, m_sub, tau, nu, symbol_t, delta_f, l_tau):
    """Dense (N*M, N*M) cross-talk matrix; row index k*M + l."""
    dn, dm, col_phase, wrap = psi_factors(n_sym, m_sub, tau, nu,
                                          symbol_t, delta_f, l_tau)
    colf = _column_factor(n_sym, m_sub, l_tau, wrap)
    psi4 = (dn[:, None, :, None]
            * (dm * col_phase[None, :])[None, :, None, :]
            * colf[None, None, :, :])
    nm = n_sym * m_sub
    return psi4.reshape(nm, nm) / nm


def psi_derivative_matrices(n_sym, m_sub, tau, nu, symbol_t, delta_f, l_tau):
    """Analytic (d psi / d tau, d psi / d nu), each (N*M, N*M)."""
    k = np.arange(n_sym, dtype=np.float64)
    l = np.arange(m_sub, dtype=np.float64)
    a = (k[None, :] - k[:, None]) + nu * n_sym * symbol_t
    b = (l[None, :] - l[:, None]) + tau * m_sub * delta_f
    dn = dirichlet_plus(a, n_sym)
    dm = np.conj(dirichlet_plus(b, m_sub))
    dn_dnu = dirichlet_plus_deriv(a, n_sym) * (n_sym * symbol_t)
    dm_dtau = np.conj(dirichlet_plus_deriv(b, m_sub)) * (m_sub * delta_f)
    col_phase = np.exp(2j * np.pi * nu * l / (m_sub * delta_f))
    wrap = np.exp(-2j * np.pi * (k / n_sym + nu * symbol_t))
    colf = _column_factor(n_sym, m_sub, l_tau, wrap)
    nm = n_sym * m_sub

    base_m = dm * col_phase[None, :]
    dpsi_tau = (dn[:, None, :, None]
                * (dm_dtau * col_phase[None, :])[None, :, None, :]
                * colf[None, None, :, :]).reshape(nm, nm) / nm

    # nu enters through Dn, through the column phase, and through wrap on
    # the ISI columns; the latter two collapse to one per-column factor.
    isi = np.arange(m_sub) >= (m_sub - l_tau)
    nu_col = 2j * np.pi * l / (m_sub * delta_f) + np.where(
        isi, -2j * np.pi * symbol_t, 0.0)
    term1 = (dn_dnu[:, None, :, None]
             * base_m[None, :, None, :]
             * colf[None, None, :, :])
    term2 = (dn[:, None, :, None]
             * (base_m * nu_col[None, :])[None, :, None, :]
             * colf[None, None, :, :])
    dpsi_nu = (term1 + term2).reshape(nm, nm) / nm
    return dpsi_tau, dpsi_nu
