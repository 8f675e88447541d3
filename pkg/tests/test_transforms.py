import numpy as np
import pytest

from oracles import isfft_direct, sfft_direct
from radcom.transforms import isfft, sfft


def _random_grid(rng, n, m):
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


@pytest.mark.parametrize("n", [2, 4, 8, 16, 50, 64])
@pytest.mark.parametrize("m", [2, 4, 8, 16, 50, 64])
def test_round_trip_identity(n, m):
    rng = np.random.default_rng(n * 1000 + m)
    x = _random_grid(rng, n, m)
    back = sfft(isfft(x))
    assert np.max(np.abs(back - x)) / np.max(np.abs(x)) < 1e-10
    forth = isfft(sfft(x))
    assert np.max(np.abs(forth - x)) / np.max(np.abs(x)) < 1e-10


def test_zero_grid_maps_to_zero():
    z = np.zeros((4, 6), dtype=complex)
    assert np.all(isfft(z) == 0)
    assert np.all(sfft(z) == 0)


def test_unit_impulse_maps_to_constant():
    x = np.zeros((5, 7), dtype=complex)
    x[0, 0] = 1.0
    tf = isfft(x)
    np.testing.assert_allclose(tf, np.ones((5, 7)), atol=1e-12)


def test_matches_direct_double_sum(rng):
    x = _random_grid(rng, 3, 5)
    np.testing.assert_allclose(isfft(x), isfft_direct(x), atol=1e-10)
    y = _random_grid(rng, 4, 3)
    np.testing.assert_allclose(sfft(y), sfft_direct(y), atol=1e-12)


def test_parseval_constant_is_grid_size(rng):
    # with the unnormalised synthesis direction, energy scales by N*M
    for n, m in [(2, 2), (8, 16), (50, 64)]:
        x = _random_grid(rng, n, m)
        ratio = np.sum(np.abs(isfft(x)) ** 2) / np.sum(np.abs(x) ** 2)
        assert ratio == pytest.approx(n * m, rel=1e-10)


def test_dimension_validation():
    with pytest.raises(ValueError):
        isfft(np.zeros(8, dtype=complex))
    with pytest.raises(ValueError):
        sfft(np.zeros((2, 3, 4), dtype=complex))
