import math

import pytest

from radcom import fmcw, harness, ofdm, otfs
from radcom.constants import SPEED_OF_LIGHT
from radcom.errors import ConfigError
from radcom.frame import make_frame_config
from radcom.rng import derived_seed
from radcom.symbols import DOMAIN_DELAY_DOPPLER, generate_symbols

BASE_CONFIG = """
fc_hz = 5.89e9
bandwidth_hz = 10e6
m_subcarriers = 16
n_symbols = 8
cp_fraction = 0.25
range_m = 20
velocity_kmh = 80
waveforms = ofdm,otfs,fmcw
snr_sweep_db = 0:5:5
trials = 6
oversample_n = 2
oversample_m = 2
otfs_n_symbols = 4
otfs_m_subcarriers = 8
search_range_max_m = 150
search_velocity_max_kmh = 400
seed = 99
output_csv = out.csv
"""


def _spec(**overrides):
    spec = harness.parse_config_text(BASE_CONFIG)
    return harness.ExperimentSpec(**{**spec.__dict__, **overrides})


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def test_parse_round_trip_of_base_config():
    spec = harness.parse_config_text(BASE_CONFIG)
    assert spec.m_subcarriers == 16
    assert spec.waveforms == ("ofdm", "otfs", "fmcw")
    assert spec.snr_sweep_db == (0.0, 5.0, 5.0)
    assert list(spec.snr_values_db) == [0.0, 5.0]
    assert spec.velocity_mps == pytest.approx(80 / 3.6)


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="unknown key 'bandwidth'"):
        harness.parse_config_text(BASE_CONFIG + "\nbandwidth = 1e6\n")


def test_missing_required_keys_named():
    with pytest.raises(ConfigError, match="output_csv"):
        harness.parse_config_text("fc_hz = 1e9\n")


def test_unknown_waveform_named():
    bad = BASE_CONFIG.replace("ofdm,otfs,fmcw", "ofdm,chirplet")
    with pytest.raises(ConfigError, match="chirplet"):
        harness.parse_config_text(bad)


def test_malformed_sweep_rejected():
    bad = BASE_CONFIG.replace("0:5:5", "0,5,5")
    with pytest.raises(ConfigError, match="snr_sweep_db"):
        harness.parse_config_text(bad)


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError, match="duplicate"):
        harness.parse_config_text(BASE_CONFIG + "\nseed = 3\n")


def test_load_spec_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not-there.cfg"):
        harness.load_spec(tmp_path / "not-there.cfg")


def test_validate_spec_passes_for_base():
    harness.validate_spec(_spec())


# ---------------------------------------------------------------------------
# noiseless exactness
# ---------------------------------------------------------------------------

def _on_grid_range(spec, waveform):
    """A range sitting exactly on the waveform's delay grid (bin 3)."""
    if waveform == "ofdm":
        cfg = make_frame_config(spec.fc_hz, spec.bandwidth_hz,
                                spec.m_subcarriers, spec.n_symbols,
                                spec.cp_fraction)
    else:
        cfg = harness._reduced_frame(spec)
    delay_step = 1.0 / (spec.oversample_m * cfg.m_subcarriers
                        * cfg.subcarrier_spacing)
    return SPEED_OF_LIGHT * (3 * delay_step) / 2.0


@pytest.mark.parametrize("waveform", ["ofdm", "otfs", "fmcw"])
def test_noiseless_on_grid_target_zero_rmse(waveform):
    spec = _spec(waveforms=(waveform,), trials=1, noise_sigma=0.0,
                 velocity_kmh=0.0, snr_sweep_db=(0.0, 0.0, 1.0))
    spec = harness.ExperimentSpec(
        **{**spec.__dict__, "range_m": _on_grid_range(spec, waveform)})
    rows = harness.run_experiment(spec)
    assert len(rows) == 1
    assert rows[0].error == ""
    assert rows[0].rmse_range_m == 0.0
    assert rows[0].rmse_velocity_mps == 0.0


# ---------------------------------------------------------------------------
# determinism
# ---------------------------------------------------------------------------

def test_byte_identical_output_across_worker_counts(tmp_path):
    spec = _spec()
    outputs = []
    for workers in (1, 4, 8):
        rows = harness.run_experiment(spec, workers=workers)
        path = tmp_path / f"out_{workers}.csv"
        harness.write_csv(rows, path)
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_repeat_run_reproducible():
    spec = _spec(waveforms=("ofdm",))
    a = harness.run_experiment(spec)
    b = harness.run_experiment(spec)
    assert a == b


# ---------------------------------------------------------------------------
# result columns
# ---------------------------------------------------------------------------

def test_ofdm_crlb_column_matches_closed_form():
    spec = _spec(waveforms=("ofdm",), trials=2)
    cfg = make_frame_config(spec.fc_hz, spec.bandwidth_hz, spec.m_subcarriers,
                            spec.n_symbols, spec.cp_fraction)
    rows = harness.run_experiment(spec)
    for row in rows:
        rep = ofdm.crlb_closed_form(cfg, 10 ** (row.snr_rad_db / 10))
        assert row.crlb_range_m == pytest.approx(math.sqrt(rep.var_range),
                                                 rel=1e-12)
        assert row.crlb_velocity_mps == pytest.approx(
            math.sqrt(rep.var_velocity), rel=1e-12)


def test_otfs_and_fmcw_crlb_columns_match_modules():
    spec = _spec(trials=2)
    rows = harness.run_experiment(spec)
    cfg = harness._reduced_frame(spec)
    sym = generate_symbols(cfg, spec.constellation,
                           derived_seed(spec.seed, "otfs", "symbols"),
                           domain=DOMAIN_DELAY_DOPPLER)
    tau = 2 * spec.range_m / SPEED_OF_LIGHT
    nu = 2 * spec.velocity_mps * spec.fc_hz / SPEED_OF_LIGHT
    for row in rows:
        snr = 10 ** (row.snr_rad_db / 10)
        if row.waveform == "otfs":
            rep = otfs.crlb_numeric_otfs(cfg, sym.vector, tau, nu, snr)
        elif row.waveform == "fmcw":
            rep = fmcw.crlb_fmcw(fmcw.fmcw_from_frame(cfg), snr)
        else:
            continue
        assert row.crlb_range_m == pytest.approx(math.sqrt(rep.var_range),
                                                 rel=1e-9)
        assert row.crlb_velocity_mps == pytest.approx(
            math.sqrt(rep.var_velocity), rel=1e-9)


def test_snr_coupling_through_budget():
    spec = _spec(waveforms=("ofdm",), trials=1)
    rows = harness.run_experiment(spec)
    # snr_com/snr_rad = g0^2/h0^2 is SNR-independent
    gaps = [row.snr_com_db - row.snr_rad_db for row in rows]
    assert gaps[0] == pytest.approx(gaps[1], abs=1e-9)


def test_error_rows_do_not_abort_sweep():
    # a Doppler beyond the subcarrier spacing poisons every waveform's
    # target admissibility; mixing one bad waveform context would need an
    # inadmissible geometry, so use a huge velocity for otfs/fmcw only by
    # pushing the target beyond the reduced frame's delay span instead
    spec = _spec(range_m=700.0, search_range_max_m=900.0)  # tau > T for all
    rows = harness.run_experiment(spec)
    assert len(rows) == 6
    assert all(row.error for row in rows)
    spec_ok = _spec(trials=2)
    rows_ok = harness.run_experiment(spec_ok)
    assert all(not row.error for row in rows_ok)


def test_bounds_only_mode():
    spec = _spec(trials=5)
    rows = harness.run_experiment(spec, monte_carlo=False)
    for row in rows:
        assert math.isnan(row.rmse_range_m)
        assert row.trials == 0
        assert row.crlb_range_m > 0


# ---------------------------------------------------------------------------
# CSV format
# ---------------------------------------------------------------------------

def test_csv_header_and_sorting(tmp_path):
    spec = _spec(trials=1)
    rows = harness.run_experiment(spec)
    path = harness.write_csv(rows, tmp_path / "r.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == ("waveform,snr_rad_db,snr_com_db,rmse_range_m,"
                        "rmse_velocity_mps,crlb_range_m,crlb_velocity_mps,"
                        "rate_bpshz,trials,seed,error")
    waveform_col = [line.split(",")[0] for line in lines[1:]]
    assert waveform_col == sorted(waveform_col)
    # locale-independent scientific notation with a dot decimal separator
    assert "e" in lines[1].split(",")[1] and "," not in lines[1].split(",")[1]


def test_csv_round_trip_exact(tmp_path):
    spec = _spec(trials=2)
    rows = harness.run_experiment(spec)
    path = harness.write_csv(rows, tmp_path / "r.csv")
    back = harness.read_csv(path)
    for a, b in zip(rows, sorted(back, key=lambda r: (r.waveform,
                                                      r.snr_rad_db))):
        for name in ("snr_rad_db", "snr_com_db", "rmse_range_m",
                     "rmse_velocity_mps", "crlb_range_m",
                     "crlb_velocity_mps"):
            va, vb = getattr(a, name), getattr(b, name)
            assert va == vb or (math.isnan(va) and math.isnan(vb))
        assert (a.rate_bpshz == b.rate_bpshz
                or (math.isnan(a.rate_bpshz) and math.isnan(b.rate_bpshz)))


def test_empty_rows_writes_header_only(tmp_path):
    path = harness.write_csv([], tmp_path / "empty.csv")
    lines = path.read_text().splitlines()
    assert len(lines) == 1 and lines[0].startswith("waveform,")


def test_unwritable_path_raises(tmp_path):
    with pytest.raises(Exception):
        harness.write_csv([], tmp_path / "missing-dir" / "x.csv")


def test_rmse_monotone_above_threshold():
    """Above the threshold region, mean RMSE over repeated sweeps is
    nonincreasing in SNR."""
    base = _spec(waveforms=("ofdm",), trials=150, oversample_n=64,
                 oversample_m=64, snr_sweep_db=(-1.0, 9.0, 2.0),
                 search_range_max_m=150.0, search_velocity_max_kmh=400.0)
    sums_r = None
    sums_v = None
    for seed in (1, 2, 3):
        spec = harness.ExperimentSpec(**{**base.__dict__, "seed": seed})
        rows = harness.run_experiment(spec, workers=2)
        rmse_r = [row.rmse_range_m for row in rows]
        rmse_v = [row.rmse_velocity_mps for row in rows]
        sums_r = rmse_r if sums_r is None else [a + b for a, b
                                                in zip(sums_r, rmse_r)]
        sums_v = rmse_v if sums_v is None else [a + b for a, b
                                                in zip(sums_v, rmse_v)]
    assert all(b <= a for a, b in zip(sums_r, sums_r[1:]))
    assert all(b <= a for a, b in zip(sums_v, sums_v[1:]))
