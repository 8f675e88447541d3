"""Backend parity: the numba kernels must match the numpy fallback."""

import numpy as np
import pytest

import radcom._kernels_numpy as knp

numba_kernels = pytest.importorskip("radcom._kernels_numba")


def _direct_dirichlet(a, n):
    return sum(np.exp(2j * np.pi * a * m / n) for m in range(n))


def _direct_dirichlet_deriv(a, n):
    return sum((2j * np.pi * m / n) * np.exp(2j * np.pi * a * m / n)
               for m in range(n))


@pytest.mark.parametrize("a", [0.0, 1.0, -3.0, 8.0, -8.0, 16.0, 2.5, -0.37,
                               7.9999999999, 8.0000000001, 15.999, 0.3333])
def test_dirichlet_against_direct_sum(a):
    n = 8
    ref = _direct_dirichlet(a, n)
    assert abs(knp.dirichlet_plus(np.array(a), n) - ref) < 1e-8
    assert abs(numba_kernels._dirichlet_plus(a, n) - ref) < 1e-8


@pytest.mark.parametrize("a", [0.5, 2.5, -0.37, 8.0, 0.0, 7.999999,
                               8.0000001, -15.5])
def test_dirichlet_deriv_against_direct_sum(a):
    n = 8
    ref = _direct_dirichlet_deriv(a, n)
    scale = max(abs(ref), 1.0)
    assert abs(complex(knp.dirichlet_plus_deriv(np.array(a), n)) - ref) / scale < 1e-7
    assert abs(numba_kernels._dirichlet_plus_deriv(a, n) - ref) / scale < 1e-7


def test_psi_matrix_backends_agree(rng):
    n_sym, m_sub, t_sym, df = 8, 16, 6.4e-6, 156250.0
    for _ in range(5):
        tau = rng.uniform(0, 0.99 * t_sym)
        nu = rng.uniform(-0.9 * df, 0.9 * df)
        l_tau = int(np.ceil(tau * m_sub * df))
        a = numba_kernels.psi_matrix(n_sym, m_sub, tau, nu, t_sym, df, l_tau)
        b = knp.psi_matrix(n_sym, m_sub, tau, nu, t_sym, df, l_tau)
        assert np.max(np.abs(a - b)) < 1e-12


def test_psi_derivatives_backends_agree(rng):
    n_sym, m_sub, t_sym, df = 4, 8, 6.4e-6, 156250.0
    for _ in range(5):
        tau = rng.uniform(0, 0.99 * t_sym)
        nu = rng.uniform(-0.9 * df, 0.9 * df)
        l_tau = int(np.ceil(tau * m_sub * df))
        da = numba_kernels.psi_derivative_matrices(n_sym, m_sub, tau, nu,
                                                   t_sym, df, l_tau)
        db = knp.psi_derivative_matrices(n_sym, m_sub, tau, nu, t_sym, df,
                                         l_tau)
        for got, ref in zip(da, db):
            assert np.max(np.abs(got - ref)) / np.max(np.abs(ref)) < 1e-12


def test_backend_env_selection(monkeypatch):
    from radcom import _backend
    impl, name = _backend._load("numpy")
    assert name == "numpy" and impl is knp
    impl, name = _backend._load("numba")
    assert name == "numba"
    with pytest.raises(ValueError):
        _backend._load("fortran")
