from pathlib import Path

from radcom import harness
from radcom.cli import main

REPO_ROOT = Path(__file__).parent.parent
TABLE1_CONFIG = REPO_ROOT / "configs" / "table1.cfg"

TINY = """
fc_hz = 5.89e9
bandwidth_hz = 10e6
m_subcarriers = 16
n_symbols = 8
cp_fraction = 0.25
range_m = 20
velocity_kmh = 80
waveforms = ofdm,fmcw
snr_sweep_db = 0:4:4
trials = 3
oversample_n = 2
oversample_m = 2
otfs_n_symbols = 4
otfs_m_subcarriers = 8
search_range_max_m = 150
search_velocity_max_kmh = 400
seed = 5
output_csv = {out}
"""


def _write_tiny(tmp_path, **kwargs):
    out = tmp_path / "result.csv"
    cfg = tmp_path / "exp.cfg"
    text = TINY.format(out=out)
    for key, val in kwargs.items():
        text = text + f"\n{key} = {val}\n"
    cfg.write_text(text)
    return cfg, out


def test_validate_shipped_table1_config(capsys):
    assert TABLE1_CONFIG.exists()
    assert main(["validate", str(TABLE1_CONFIG)]) == 0
    assert "OK" in capsys.readouterr().out


def test_missing_config_file_reports_path(capsys):
    rc = main(["run", "/nowhere/else.cfg"])
    assert rc != 0
    assert "/nowhere/else.cfg" in capsys.readouterr().err


def test_unknown_waveform_reported(tmp_path, capsys):
    cfg, _ = _write_tiny(tmp_path)
    bad = cfg.read_text().replace("ofdm,fmcw", "ofdm,lora")
    cfg.write_text(bad)
    rc = main(["validate", str(cfg)])
    assert rc != 0
    assert "lora" in capsys.readouterr().err


def test_unknown_key_reported(tmp_path, capsys):
    cfg, _ = _write_tiny(tmp_path, carrier_hz=1e9)
    rc = main(["validate", str(cfg)])
    assert rc != 0
    assert "carrier_hz" in capsys.readouterr().err


def test_run_writes_csv(tmp_path, capsys):
    cfg, out = _write_tiny(tmp_path)
    assert main(["run", str(cfg)]) == 0
    assert out.exists()
    rows = harness.read_csv(out)
    assert len(rows) == 4 and all(r.trials == 3 for r in rows)


def test_crlb_subcommand_skips_monte_carlo(tmp_path):
    cfg, out = _write_tiny(tmp_path)
    assert main(["crlb", str(cfg)]) == 0
    rows = harness.read_csv(out)
    assert all(r.trials == 0 for r in rows)
    assert all(r.crlb_range_m > 0 for r in rows)


def test_output_override(tmp_path):
    cfg, _ = _write_tiny(tmp_path)
    alt = tmp_path / "alt.csv"
    assert main(["run", str(cfg), "--output", str(alt)]) == 0
    assert alt.exists()
