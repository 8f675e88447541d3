import numpy as np
import pytest

from radcom.symbols import (CONSTELLATIONS, DOMAIN_DELAY_DOPPLER,
                            DOMAIN_TIME_FREQUENCY, SymbolGrid,
                            generate_symbols, register_constellation)


def test_constant_envelope_has_exact_amplitude(table1_cfg):
    grid = generate_symbols(table1_cfg, "constant-envelope", seed=3)
    np.testing.assert_allclose(np.abs(grid.data),
                               np.sqrt(table1_cfg.avg_power), rtol=1e-12)


def test_qpsk_is_constant_modulus(table1_cfg):
    grid = generate_symbols(table1_cfg, "qpsk", seed=11)
    np.testing.assert_allclose(np.abs(grid.data),
                               np.sqrt(table1_cfg.avg_power), rtol=1e-12)


def test_identical_seed_identical_grid(table1_cfg):
    a = generate_symbols(table1_cfg, "qpsk", seed=7)
    b = generate_symbols(table1_cfg, "qpsk", seed=7)
    np.testing.assert_array_equal(a.data, b.data)
    c = generate_symbols(table1_cfg, "qpsk", seed=8)
    assert not np.array_equal(a.data, c.data)


def test_16qam_mean_power_near_budget(table1_cfg):
    # N*M = 3200 draws; the sample mean should sit within 5% of avg_power
    grid = generate_symbols(table1_cfg, "16-qam", seed=5)
    mean_power = np.mean(np.abs(grid.data) ** 2)
    assert abs(mean_power - table1_cfg.avg_power) < 0.05 * table1_cfg.avg_power


def test_constellation_point_sets_are_power_normalized():
    rng = np.random.default_rng(0)
    for name, sampler in CONSTELLATIONS.items():
        draws = sampler(rng, (400, 400), 2.0)
        assert np.mean(np.abs(draws) ** 2) == pytest.approx(2.0, rel=0.02), name


def test_unknown_constellation_rejected(table1_cfg):
    with pytest.raises(ValueError, match="unknown constellation"):
        generate_symbols(table1_cfg, "512-apsk", seed=0)


def test_register_constellation(table1_cfg):
    register_constellation("bpsk-test",
                           lambda rng, shape, p: np.sqrt(p) * np.where(
                               rng.random(shape) < 0.5, -1.0, 1.0) + 0j)
    grid = generate_symbols(table1_cfg, "bpsk-test", seed=1)
    assert set(np.unique(grid.data)) <= {-1 + 0j, 1 + 0j}
    del CONSTELLATIONS["bpsk-test"]


def test_domain_tagging(table1_cfg):
    tf = generate_symbols(table1_cfg, "qpsk", 0, domain=DOMAIN_TIME_FREQUENCY)
    dd = generate_symbols(table1_cfg, "qpsk", 0, domain=DOMAIN_DELAY_DOPPLER)
    assert tf.domain == "time-frequency"
    assert dd.domain == "delay-doppler"
    with pytest.raises(ValueError):
        SymbolGrid(data=tf.data, domain="fourier")


def test_vector_flattening_is_row_major(cfg_2x4):
    grid = generate_symbols(cfg_2x4, "qpsk", 2)
    vec = grid.vector
    for k in range(cfg_2x4.n_symbols):
        for l in range(cfg_2x4.m_subcarriers):
            assert vec[k * cfg_2x4.m_subcarriers + l] == grid.data[k, l]
