"""Batch Monte Carlo harness: seeded SNR sweeps for all three waveforms.

An ExperimentSpec (usually parsed from a flat key = value config file) fixes
the frame, the target geometry, the SNR sweep and the search grids.  The
sweep axis is the received radar SNR; the communication SNR is coupled to it
through the fixed link budget (both scale with the transmit power).  Every
trial derives its own random stream from (master seed, waveform, SNR index,
trial index), and per-trial squared errors are reduced in trial order, so the
output is byte-identical for any worker count.

The OTFS maximum-likelihood search is run on a reduced frame
(otfs_n_symbols x otfs_m_subcarriers, same subcarrier spacing) because each
search point costs a full cross-talk matrix; bounds and rates still use the
matching modules.  FMCW shares that reduced frame so the two baselines are
directly comparable.
"""

import csv
import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fmcw as fmcw_mod
from . import linkbudget, ofdm, otfs
from .constants import SPEED_OF_LIGHT
from .errors import ConfigError, RadcomError
from .estgrid import make_estimation_grid
from .frame import make_frame_config, make_target_from_kinematics
from .rng import derived_seed, make_rng
from .symbols import DOMAIN_DELAY_DOPPLER, DOMAIN_TIME_FREQUENCY, generate_symbols

KNOWN_WAVEFORMS = ("ofdm", "otfs", "fmcw")

CSV_HEADER = ["waveform", "snr_rad_db", "snr_com_db", "rmse_range_m",
              "rmse_velocity_mps", "crlb_range_m", "crlb_velocity_mps",
              "rate_bpshz", "trials", "seed", "error"]


@dataclass(frozen=True)
class ExperimentSpec:
    fc_hz: float
    bandwidth_hz: float
    m_subcarriers: int
    n_symbols: int
    range_m: float
    velocity_kmh: float
    waveforms: tuple
    snr_sweep_db: tuple          # (start, stop, step), inclusive endpoints
    output_csv: str
    cp_fraction: float = 0.25
    rcs_m2: float = 1.0
    antenna_gain: float = 100.0
    trials: int = 1000
    oversample_n: int = 64       # N' = oversample_n * N of the waveform frame
    oversample_m: int = 64
    seed: int = 1234
    constellation: str = "qpsk"
    noise_sigma: float = 1.0
    workers: int = 1
    otfs_n_symbols: int = 8
    otfs_m_subcarriers: int = 16
    search_range_max_m: float | None = None
    search_velocity_max_kmh: float | None = None
    rate_channel: str = "com"

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.waveforms:
            raise ConfigError("waveforms must list at least one waveform")
        for wf in self.waveforms:
            if wf not in KNOWN_WAVEFORMS:
                raise ConfigError(
                    f"waveforms: unknown waveform {wf!r} "
                    f"(known: {', '.join(KNOWN_WAVEFORMS)})")
        start, stop, step = self.snr_sweep_db
        if step <= 0 or stop < start:
            raise ConfigError("snr_sweep_db must satisfy start <= stop, step > 0")
        if self.rate_channel not in ("com", "radar"):
            raise ConfigError("rate_channel must be 'com' or 'radar'")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    @property
    def snr_values_db(self):
        start, stop, step = self.snr_sweep_db
        return np.arange(start, stop + step / 2.0, step)

    @property
    def velocity_mps(self):
        return self.velocity_kmh / 3.6


@dataclass(frozen=True)
class ResultRow:
    waveform: str
    snr_rad_db: float
    snr_com_db: float
    rmse_range_m: float
    rmse_velocity_mps: float
    crlb_range_m: float
    crlb_velocity_mps: float
    rate_bpshz: float
    trials: int
    seed: int
    error: str = ""


# ---------------------------------------------------------------------------
# config file parsing
# ---------------------------------------------------------------------------

def _parse_waveforms(text):
    return tuple(w.strip().lower() for w in text.split(",") if w.strip())


def _parse_sweep(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(
            f"snr_sweep_db: expected 'start:stop:step', got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"snr_sweep_db: {exc}") from exc


_KEY_PARSERS = {
    "fc_hz": float,
    "bandwidth_hz": float,
    "m_subcarriers": int,
    "n_symbols": int,
    "cp_fraction": float,
    "range_m": float,
    "velocity_kmh": float,
    "rcs_m2": float,
    "antenna_gain": float,
    "waveforms": _parse_waveforms,
    "snr_sweep_db": _parse_sweep,
    "trials": int,
    "oversample_n": int,
    "oversample_m": int,
    "seed": int,
    "output_csv": str,
    "constellation": str,
    "noise_sigma": float,
    "workers": int,
    "otfs_n_symbols": int,
    "otfs_m_subcarriers": int,
    "search_range_max_m": float,
    "search_velocity_max_kmh": float,
    "rate_channel": str,
}

_REQUIRED_KEYS = ("fc_hz", "bandwidth_hz", "m_subcarriers", "n_symbols",
                  "range_m", "velocity_kmh", "waveforms", "snr_sweep_db",
                  "output_csv")


def parse_config_text(text, source="<config>"):
    """Parse the flat `key = value` config format into an ExperimentSpec."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _KEY_PARSERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _KEY_PARSERS[key](val)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {exc}")
    missing = [k for k in _REQUIRED_KEYS if k not in values]
    if missing:
        raise ConfigError(f"{source}: missing required keys: {', '.join(missing)}")
    return ExperimentSpec(**values)


def load_spec(path):
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    return parse_config_text(path.read_text(), source=str(path))


# ---------------------------------------------------------------------------
# per-waveform preparation
# ---------------------------------------------------------------------------

@dataclass
class _WaveformContext:
    waveform: str
    cfg: object
    target: object
    grid: object
    crlb_unit: object                 # bound report at snr_rad = 1
    symbols: object = None
    bank: object = None               # OTFS matched bank
    psi_true: object = None           # OTFS cross-talk at the true target
    fmcw_cfg: object = None
    rate_sigma: np.ndarray | None = None  # OTFS comm-channel singular values
    rate_cfg: object = None


def _search_limits(spec, cfg, waveform):
    if spec.search_range_max_m is not None:
        r_max = spec.search_range_max_m
    elif waveform == "ofdm":
        r_max = cfg.max_range_ofdm_m
    else:
        r_max = cfg.max_range_otfs_m
    v_max = (spec.search_velocity_max_kmh or 1080.0) / 3.6
    tau_max = 2.0 * r_max / SPEED_OF_LIGHT
    nu_max = 2.0 * v_max * cfg.fc_hz / SPEED_OF_LIGHT
    if waveform in ("otfs", "fmcw"):
        # the cross-talk model only admits tau < T and |nu| < delta_f
        tau_max = min(tau_max, cfg.symbol_duration * (1.0 - 1e-9))
        nu_max = min(nu_max, 0.95 * cfg.subcarrier_spacing)
    return tau_max, nu_max


def _reduced_frame(spec):
    delta_f = spec.bandwidth_hz / spec.m_subcarriers
    return make_frame_config(spec.fc_hz, delta_f * spec.otfs_m_subcarriers,
                             spec.otfs_m_subcarriers, spec.otfs_n_symbols,
                             cp_fraction=0.0)


def _rate_singular_values(spec):
    """Singular values of the communication-geometry cross-talk matrix.

    Computed on the full configured frame (the rate is an analytic metric,
    independent of the reduced ML-search frame).
    """
    cfg = make_frame_config(spec.fc_hz, spec.bandwidth_hz, spec.m_subcarriers,
                            spec.n_symbols, spec.cp_fraction)
    if spec.rate_channel == "com":
        chan = linkbudget.one_way_channel(spec.range_m, spec.velocity_mps,
                                          spec.fc_hz)
        tau, nu = chan.delay_s, chan.doppler_hz
    else:
        tau = 2.0 * spec.range_m / SPEED_OF_LIGHT
        nu = 2.0 * spec.velocity_mps * spec.fc_hz / SPEED_OF_LIGHT
    psi = otfs.build_psi(cfg, tau, nu, otfs.MODE_APPROX)
    return linkbudget.otfs_channel_singular_values(psi), cfg


def _prepare(spec, waveform, monte_carlo=True):
    if waveform == "ofdm":
        cfg = make_frame_config(spec.fc_hz, spec.bandwidth_hz,
                                spec.m_subcarriers, spec.n_symbols,
                                spec.cp_fraction)
        target = make_target_from_kinematics(spec.range_m, spec.velocity_mps,
                                             1.0, cfg)
        tau_max, nu_max = _search_limits(spec, cfg, waveform)
        grid = make_estimation_grid(cfg, spec.oversample_n * cfg.n_symbols,
                                    spec.oversample_m * cfg.m_subcarriers,
                                    tau_max, nu_max, waveform="ofdm")
        symbols = generate_symbols(
            cfg, spec.constellation,
            derived_seed(spec.seed, waveform, "symbols"),
            domain=DOMAIN_TIME_FREQUENCY)
        return _WaveformContext(waveform, cfg, target, grid,
                                crlb_unit=ofdm.crlb_closed_form(cfg, 1.0),
                                symbols=symbols)

    cfg = _reduced_frame(spec)
    target = make_target_from_kinematics(spec.range_m, spec.velocity_mps,
                                         1.0, cfg)
    tau_max, nu_max = _search_limits(spec, cfg, waveform)

    if waveform == "otfs":
        grid = make_estimation_grid(cfg, spec.oversample_n * cfg.n_symbols,
                                    spec.oversample_m * cfg.m_subcarriers,
                                    tau_max, nu_max, waveform="otfs")
        symbols = generate_symbols(
            cfg, spec.constellation,
            derived_seed(spec.seed, waveform, "symbols"),
            domain=DOMAIN_DELAY_DOPPLER)
        if monte_carlo:
            bank = otfs.matched_bank(cfg, symbols.vector, grid)
            psi_true = otfs.build_psi(cfg, target.delay_s, target.doppler_hz)
        else:
            bank = psi_true = None
        crlb_unit = otfs.crlb_numeric_otfs(cfg, symbols.vector,
                                           target.delay_s, target.doppler_hz,
                                           snr_rad=1.0)
        rate_sigma, rate_cfg = _rate_singular_values(spec)
        return _WaveformContext(waveform, cfg, target, grid, crlb_unit,
                                symbols=symbols, bank=bank, psi_true=psi_true,
                                rate_sigma=rate_sigma, rate_cfg=rate_cfg)

    fmcw_cfg = fmcw_mod.fmcw_from_frame(cfg)
    grid = make_estimation_grid(cfg, spec.oversample_n * cfg.n_symbols,
                                spec.oversample_m * cfg.m_subcarriers,
                                tau_max, nu_max, waveform="fmcw")
    return _WaveformContext(waveform, cfg, target, grid,
                            crlb_unit=fmcw_mod.crlb_fmcw(fmcw_cfg, 1.0),
                            fmcw_cfg=fmcw_cfg)


# ---------------------------------------------------------------------------
# Monte Carlo execution
# ---------------------------------------------------------------------------

def _run_trial(ctx, spec, snr_rad, snr_index, trial_index):
    rng = make_rng(spec.seed, ctx.waveform, int(snr_index), int(trial_index))
    phase = rng.uniform(0.0, 2.0 * np.pi)
    gain = math.sqrt(snr_rad / ctx.cfg.avg_power) * np.exp(1j * phase)
    target = dataclasses.replace(ctx.target, gain=gain)
    if ctx.waveform == "ofdm":
        obs = ofdm.synthesize_observation(ctx.cfg, ctx.symbols, target,
                                          spec.noise_sigma, seed=rng)
        est = ofdm.ml_estimate(obs, ctx.grid)
    elif ctx.waveform == "otfs":
        obs = otfs.synthesize_observation_otfs(ctx.cfg, ctx.symbols, target,
                                               spec.noise_sigma, seed=rng,
                                               psi=ctx.psi_true)
        est = otfs.ml_estimate_otfs(obs, bank=ctx.bank)
    else:
        beat = fmcw_mod.synthesize_beat_signal(ctx.fmcw_cfg, target,
                                               spec.noise_sigma, seed=rng)
        est = fmcw_mod.ml_estimate_fmcw(beat, ctx.grid, ctx.fmcw_cfg)
    return ((est.range_m - ctx.target.range_m) ** 2,
            (est.velocity_mps - ctx.target.velocity_mps) ** 2)


def _run_point(ctx, spec, budget, snr_index, snr_db, workers):
    snr_rad = 10.0 ** (snr_db / 10.0)
    snr_com = snr_rad * budget.g0_sq / budget.h0_sq
    err_r = np.empty(spec.trials)
    err_v = np.empty(spec.trials)

    def work(trial):
        err_r[trial], err_v[trial] = _run_trial(ctx, spec, snr_rad,
                                                snr_index, trial)

    if workers <= 1:
        for t in range(spec.trials):
            work(t)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, range(spec.trials)))

    if ctx.waveform == "ofdm":
        rate = linkbudget.rate_ofdm(ctx.cfg, snr_com)
    elif ctx.waveform == "otfs":
        rate = linkbudget.rate_otfs_from_singular_values(
            ctx.rate_sigma, snr_com, ctx.rate_cfg.grid_size)
    else:
        rate = float("nan")

    return ResultRow(
        waveform=ctx.waveform,
        snr_rad_db=float(snr_db),
        snr_com_db=10.0 * math.log10(snr_com),
        rmse_range_m=float(np.sqrt(np.mean(err_r))),
        rmse_velocity_mps=float(np.sqrt(np.mean(err_v))),
        crlb_range_m=math.sqrt(ctx.crlb_unit.var_range / snr_rad),
        crlb_velocity_mps=math.sqrt(ctx.crlb_unit.var_velocity / snr_rad),
        rate_bpshz=rate,
        trials=spec.trials,
        seed=spec.seed,
    )


def _error_row(spec, waveform, snr_db, budget, message):
    snr_rad = 10.0 ** (snr_db / 10.0)
    snr_com = snr_rad * budget.g0_sq / budget.h0_sq
    return ResultRow(waveform=waveform, snr_rad_db=float(snr_db),
                     snr_com_db=10.0 * math.log10(snr_com),
                     rmse_range_m=float("nan"),
                     rmse_velocity_mps=float("nan"),
                     crlb_range_m=float("nan"),
                     crlb_velocity_mps=float("nan"),
                     rate_bpshz=float("nan"), trials=0, seed=spec.seed,
                     error=message)


def validate_spec(spec):
    """Construct frames, targets, grids and the budget without heavy setup.

    Raises ConfigError/AdmissibilityError on the first inconsistency; cheap
    enough for the CLI validate subcommand.
    """
    linkbudget.compute_link_budget(spec.fc_hz, spec.rcs_m2, spec.antenna_gain,
                                   spec.range_m, avg_power=1.0)
    for waveform in spec.waveforms:
        if waveform == "ofdm":
            cfg = make_frame_config(spec.fc_hz, spec.bandwidth_hz,
                                    spec.m_subcarriers, spec.n_symbols,
                                    spec.cp_fraction)
        else:
            cfg = _reduced_frame(spec)
        make_target_from_kinematics(spec.range_m, spec.velocity_mps, 1.0, cfg)
        tau_max, nu_max = _search_limits(spec, cfg, waveform)
        make_estimation_grid(cfg, spec.oversample_n * cfg.n_symbols,
                             spec.oversample_m * cfg.m_subcarriers,
                             tau_max, nu_max, waveform=waveform)
        if waveform == "fmcw":
            fmcw_mod.fmcw_from_frame(cfg)


def run_experiment(spec, workers=None, monte_carlo=True):
    """Run the configured sweep; returns rows sorted by (waveform, snr).

    Module errors are recorded per row in the error column instead of
    aborting the remaining sweep.  With monte_carlo=False only the bound and
    rate columns are filled (no trials).
    """
    workers = spec.workers if workers is None else workers
    budget = linkbudget.compute_link_budget(spec.fc_hz, spec.rcs_m2,
                                            spec.antenna_gain, spec.range_m,
                                            avg_power=1.0)
    rows = []
    for waveform in spec.waveforms:
        try:
            ctx = _prepare(spec, waveform, monte_carlo=monte_carlo)
        except (RadcomError, ValueError) as exc:
            rows.extend(_error_row(spec, waveform, snr_db, budget,
                                   f"{type(exc).__name__}: {exc}")
                        for snr_db in spec.snr_values_db)
            continue
        for snr_index, snr_db in enumerate(spec.snr_values_db):
            try:
                if monte_carlo:
                    row = _run_point(ctx, spec, budget, snr_index, snr_db,
                                     workers)
                else:
                    row = _bounds_row(ctx, spec, budget, snr_db)
            except (RadcomError, ValueError) as exc:
                row = _error_row(spec, waveform, snr_db, budget,
                                 f"{type(exc).__name__}: {exc}")
            rows.append(row)
    rows.sort(key=lambda r: (r.waveform, r.snr_rad_db))
    return rows


def _bounds_row(ctx, spec, budget, snr_db):
    snr_rad = 10.0 ** (snr_db / 10.0)
    snr_com = snr_rad * budget.g0_sq / budget.h0_sq
    if ctx.waveform == "ofdm":
        rate = linkbudget.rate_ofdm(ctx.cfg, snr_com)
    elif ctx.waveform == "otfs":
        rate = linkbudget.rate_otfs_from_singular_values(
            ctx.rate_sigma, snr_com, ctx.rate_cfg.grid_size)
    else:
        rate = float("nan")
    return ResultRow(
        waveform=ctx.waveform, snr_rad_db=float(snr_db),
        snr_com_db=10.0 * math.log10(snr_com),
        rmse_range_m=float("nan"), rmse_velocity_mps=float("nan"),
        crlb_range_m=math.sqrt(ctx.crlb_unit.var_range / snr_rad),
        crlb_velocity_mps=math.sqrt(ctx.crlb_unit.var_velocity / snr_rad),
        rate_bpshz=rate, trials=0, seed=spec.seed)


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

def _format_value(value):
    if isinstance(value, float):
        return f"{value:.17e}"
    return str(value)


def write_csv(rows, path):
    """Write rows (sorted by waveform, snr) in full double precision."""
    rows = sorted(rows, key=lambda r: (r.waveform, r.snr_rad_db))
    path = Path(path)
    if path.parent and not path.parent.exists():
        raise RadcomError(f"output directory does not exist: {path.parent}")
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([_format_value(getattr(row, name))
                             for name in CSV_HEADER])
    return path


def read_csv(path):
    """Parse a results CSV back into ResultRow records (for tests/tools)."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != CSV_HEADER:
            raise RadcomError(f"unexpected CSV header in {path}")
        rows = []
        for rec in reader:
            kwargs = dict(zip(CSV_HEADER, rec))
            rows.append(ResultRow(
                waveform=kwargs["waveform"],
                snr_rad_db=float(kwargs["snr_rad_db"]),
                snr_com_db=float(kwargs["snr_com_db"]),
                rmse_range_m=float(kwargs["rmse_range_m"]),
                rmse_velocity_mps=float(kwargs["rmse_velocity_mps"]),
                crlb_range_m=float(kwargs["crlb_range_m"]),
                crlb_velocity_mps=float(kwargs["crlb_velocity_mps"]),
                rate_bpshz=float(kwargs["rate_bpshz"]),
                trials=int(kwargs["trials"]),
                seed=int(kwargs["seed"]),
                error=kwargs["error"],
            ))
    return rows
