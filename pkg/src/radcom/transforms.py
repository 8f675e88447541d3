"""Symplectic finite Fourier transform pair.

The analysis direction (time-frequency -> delay-Doppler) carries the 1/(NM)
factor:

    sfft(Y)[k, l] = (1/NM) sum_{n,m} Y[n, m] exp(-j2pi(nk/N - ml/M))

and the synthesis direction is its unnormalised exact inverse, so
sfft(isfft(x)) == x.  With this split, Parseval reads
sum |isfft(x)|^2 == N*M * sum |x|^2.
"""

import numpy as np


def _check_grid(x):
    x = np.asarray(x)
    if x.ndim != 2:
        raise ValueError("expected a 2-D (N, M) grid")
    return x.astype(np.complex128, copy=False)


def isfft(dd_grid):
    """Delay-Doppler (k, l) -> time-frequency (n, m), unnormalised forward."""
    x = _check_grid(dd_grid)
    n = x.shape[0]
    return np.fft.ifft(np.fft.fft(x, axis=1), axis=0) * n


def sfft(tf_grid):
    """Time-frequency (n, m) -> delay-Doppler (k, l), 1/(NM)-scaled."""
    x = _check_grid(tf_grid)
    n = x.shape[0]
    return np.fft.fft(np.fft.ifft(x, axis=1), axis=0) / n
