"""Monte Carlo harness: seeded trials, SNR sweeps and summary metrics.

Every trial derives its own random stream from (seed, trial_index), draws
channels, reference matrices, symbols and one unit-variance noise vector,
and evaluates every SNR point by rescaling that noise. Results are
therefore independent of scheduling: sweeps aggregate in trial order and
give identical output for any worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .baselines import build_no_ia_precoders, genie_channels
from .errors import ConfigError, DegenerateChannels, NearSingular, RankDeficient, SizeMismatch
from .functions import FunctionSpec, postprocess, preprocess
from .sia import (
    aligned_interference_dimension,
    build_aggregation_beamformers,
    build_reference_matrices,
    build_sia_matrices,
)
from .system import _complex_normal, draw_channels, draw_symbols, partition, superpose

# Whole-set redraws allowed per trial when a construction degenerates.
SET_REDRAW_BUDGET = 100


@dataclass
class TrialResult:
    nmse: np.ndarray          # (2,) per cell, ||recovered - target||^2 / ||target||^2
    leakage: np.ndarray       # (2,) per AP, post-beamforming interference power ratio
    aligned_rank: np.ndarray  # (2,) per interfering cell, at the victim AP
    tx_power: np.ndarray      # (K, 2) per-device transmit power, diagnostic
    noise_std: float
    analytic_nmse: float      # noise-only NMSE prediction for this trial
    err_power: np.ndarray     # (2,) raw recovered-error power
    sig_power: np.ndarray     # (2,) raw target power
    redraws: int


@dataclass
class _TrialComponents:
    """Noise-independent pieces of one trial, reusable across SNR points."""

    devices: int
    signal_dim: int
    target: np.ndarray        # (2, dof) sum of home-cell symbols
    sa_error: np.ndarray      # (2, dof) recovered desired signal minus target
    leak_vec: np.ndarray      # (2, dof) beamformed interference
    leak_ratio: np.ndarray    # (2,)
    beam_noise: np.ndarray    # (2, dof) beamformed unit-variance noise
    signal_power: float       # received desired power per antenna, AP average
    tx_power: np.ndarray      # (K, 2)
    aligned_rank: np.ndarray  # (2,)
    redraws: int

    def noise_std_for(self, snr_db):
        if snr_db is None:
            return 0.0
        return math.sqrt(self.signal_power / 10.0 ** (snr_db / 10.0))

    def evaluate(self, snr_db=None):
        sigma = self.noise_std_for(snr_db)
        err = self.sa_error + self.leak_vec + sigma * self.beam_noise
        err_power = np.sum(np.abs(err) ** 2, axis=1)
        sig_power = np.sum(np.abs(self.target) ** 2, axis=1)
        return TrialResult(
            nmse=err_power / sig_power,
            leakage=self.leak_ratio.copy(),
            aligned_rank=self.aligned_rank.copy(),
            tx_power=self.tx_power,
            noise_std=sigma,
            analytic_nmse=sigma**2 / self.devices,
            err_power=err_power,
            sig_power=sig_power,
            redraws=self.redraws,
        )


def _build_components(config, trial_index, symbols=None):
    config.validate()
    part = partition(config.antennas)
    rng = np.random.default_rng([config.seed, trial_index])
    reference = build_reference_matrices(
        config.antennas, part.interference_dim, rng, fixed=config.fixed_reference)
    beamformer = build_aggregation_beamformers(reference)
    redraws = 0
    for _ in range(SET_REDRAW_BUDGET):
        channels = draw_channels(config, rng)
        redraws += channels.redraws
        if config.scheme == "genie":
            channels = genie_channels(channels)
        try:
            if config.scheme == "sia":
                precoders = build_sia_matrices(channels, reference).precoder
            else:
                precoders = build_no_ia_precoders(channels, beamformer)
        except (NearSingular, RankDeficient):
            redraws += 1
            continue
        break
    else:
        raise DegenerateChannels(
            f"no usable channel draw after {SET_REDRAW_BUDGET} attempts")

    if symbols is None:
        symbols = draw_symbols(config, rng)
    else:
        symbols = np.asarray(symbols, dtype=np.complex128)
        expected = (config.devices, 2, part.signal_dim)
        if symbols.shape != expected:
            raise SizeMismatch(f"symbols must have shape {expected}, got {symbols.shape}")
    noise_unit = _complex_normal(rng, (2, config.antennas))

    desired, interference = superpose(channels, precoders, symbols)
    target = symbols.sum(axis=0)
    recovered_desired = np.einsum("idm,im->id", beamformer, desired)
    sa_error = recovered_desired - target
    leak_vec = np.einsum("idm,im->id", beamformer, interference)
    interference_power = np.sum(np.abs(interference) ** 2, axis=1)
    leak_power = np.sum(np.abs(leak_vec) ** 2, axis=1)
    safe = np.where(interference_power > 0.0, interference_power, 1.0)
    leak_ratio = np.where(interference_power > 0.0, leak_power / safe, 0.0)
    beam_noise = np.einsum("idm,im->id", beamformer, noise_unit)
    signal_power = float(np.sum(np.abs(desired) ** 2)) / (2.0 * config.antennas)
    tx = np.einsum("kimd,kid->kim", precoders, symbols)
    tx_power = np.sum(np.abs(tx) ** 2, axis=2)
    aligned = np.array([
        aligned_interference_dimension(i, channels, precoders) for i in (0, 1)
    ])
    return _TrialComponents(
        devices=config.devices,
        signal_dim=part.signal_dim,
        target=target,
        sa_error=sa_error,
        leak_vec=leak_vec,
        leak_ratio=leak_ratio,
        beam_noise=beam_noise,
        signal_power=signal_power,
        tx_power=tx_power,
        aligned_rank=aligned,
        redraws=redraws,
    )


def run_trial(config, trial_index, snr_db=None):
    """One seeded trial: draw, build, transmit and score.

    snr_db=None runs the noiseless pipeline (noise_std = 0). The result is
    a pure function of (config, trial_index, snr_db).
    """
    return _build_components(config, trial_index).evaluate(snr_db)


def run_functional_trial(config, data, trial_index=0, snr_db=None):
    """Carry per-device data through the full functional pipeline.

    `data` has shape (K, 2, signal_dim) and holds each device's real
    inputs. The values are pre-processed for config.function, sent over
    the air with config.scheme, recovered and post-processed. Returns the
    per-cell function estimates, shape (2, signal_dim).
    """
    config.validate()
    spec = FunctionSpec(config.function, config.devices)
    dof = partition(config.antennas).signal_dim
    data = np.asarray(data, dtype=np.float64)
    expected = (config.devices, 2, dof)
    if data.shape != expected:
        raise SizeMismatch(f"data must have shape {expected}, got {data.shape}")
    symbols = np.empty(expected, dtype=np.complex128)
    for k in range(config.devices):
        for i in (0, 1):
            symbols[k, i] = preprocess(spec, data[k, i])
    comp = _build_components(config, trial_index, symbols=symbols)
    sigma = comp.noise_std_for(snr_db)
    recovered = comp.target + comp.sa_error + comp.leak_vec + sigma * comp.beam_noise
    return np.stack([postprocess(spec, recovered[i]) for i in (0, 1)])


def analytic_noise_mse(beamformer, noise_std, signal_power):
    """Noise-only NMSE prediction.

    With orthonormal beamformer rows the recovered noise power is
    noise_std**2 times the stream count; dividing by the expected
    aggregate signal power gives the predicted NMSE.
    """
    beamformer = np.asarray(beamformer)
    if beamformer.ndim != 2:
        raise SizeMismatch("beamformer must be 2-D")
    gram = beamformer @ beamformer.conj().T
    if not np.allclose(gram, np.eye(beamformer.shape[0]), atol=1e-8):
        raise ValueError("beamformer rows must be orthonormal")
    if noise_std < 0:
        raise ValueError("noise_std must be non-negative")
    if signal_power <= 0:
        raise ValueError("signal_power must be positive")
    return noise_std**2 * beamformer.shape[0] / signal_power


@dataclass
class SweepPoint:
    snr_db: float
    trials: int
    nmse_mean: float       # pooled: total error power over total target power
    nmse_median: float     # median of the per-cell per-trial ratios
    leakage_mean: float
    aligned_rank: int
    analytic_nmse: float   # mean per-trial noise-only prediction
    oracle_gap: float      # mean(expectation-normalised NMSE - prediction)
    oracle_gap_se: float   # standard error of that gap
    err_power_mean: float


@dataclass
class SweepResult:
    config: object
    points: list
    dof_slope: float


def worker_count():
    """Worker cap: AIRCOMP_WORKERS if set, else the CPU count."""
    raw = os.environ.get("AIRCOMP_WORKERS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"AIRCOMP_WORKERS must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ConfigError("AIRCOMP_WORKERS must be at least 1")
    return value


def _sweep_batch(config, start, stop):
    """Evaluate trials [start, stop) at every SNR point; returns stacked arrays."""
    grid = tuple(config.snr_db_grid)
    count = stop - start
    points = len(grid)
    out = {
        "nmse": np.empty((count, points, 2)),
        "err_power": np.empty((count, points, 2)),
        "noise_var": np.empty((count, points)),
        "sig_power": np.empty((count, 2)),
        "leakage": np.empty((count, 2)),
        "aligned_rank": np.empty((count, 2), dtype=np.int64),
    }
    for offset, trial in enumerate(range(start, stop)):
        comp = _build_components(config, trial)
        for p, snr_db in enumerate(grid):
            res = comp.evaluate(snr_db)
            out["nmse"][offset, p] = res.nmse
            out["err_power"][offset, p] = res.err_power
            out["noise_var"][offset, p] = res.noise_std**2
        out["sig_power"][offset] = np.sum(np.abs(comp.target) ** 2, axis=1)
        out["leakage"][offset] = comp.leak_ratio
        out["aligned_rank"][offset] = comp.aligned_rank
    return out


def _batch_ranges(trials, workers):
    chunks = min(trials, max(1, workers))
    base, extra = divmod(trials, chunks)
    ranges = []
    start = 0
    for c in range(chunks):
        size = base + (1 if c < extra else 0)
        ranges.append((start, start + size))
        start += size
    return ranges


def fit_nmse_slope(snr_db, nmse, lo=None, hi=None):
    """Least-squares slope of log10(nmse) against SNR in dB over [lo, hi].

    Points with non-positive or non-finite NMSE are excluded; returns nan
    when fewer than two points remain.
    """
    x = np.asarray(snr_db, dtype=np.float64)
    y = np.asarray(nmse, dtype=np.float64)
    mask = np.isfinite(y) & (y > 0)
    if lo is not None:
        mask &= x >= lo
    if hi is not None:
        mask &= x <= hi
    if np.count_nonzero(mask) < 2:
        return float("nan")
    return float(np.polyfit(x[mask], np.log10(y[mask]), 1)[0])


def run_sweep(config, workers=None):
    """Sweep the SNR grid with config.trials Monte Carlo trials per point.

    The slope of log10(mean NMSE) is fitted over the top half of the grid.
    Output is identical for any worker count.
    """
    config.validate()
    if workers is None:
        workers = worker_count()
    ranges = _batch_ranges(config.trials, workers)
    if workers == 1 or len(ranges) == 1:
        batches = [_sweep_batch(config, a, b) for a, b in ranges]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep_batch, config, a, b) for a, b in ranges]
            batches = [f.result() for f in futures]
    merged = {key: np.concatenate([b[key] for b in batches]) for key in batches[0]}

    grid = tuple(float(s) for s in config.snr_db_grid)
    dof = partition(config.antennas).signal_dim
    expected_sig_power = config.devices * dof
    total_sig = merged["sig_power"].sum()
    points = []
    for p, snr_db in enumerate(grid):
        err = merged["err_power"][:, p, :]
        ratios = merged["nmse"][:, p, :]
        predicted = merged["noise_var"][:, p] / config.devices
        normalised = err.mean(axis=1) / expected_sig_power
        gap = normalised - predicted
        se = float(gap.std(ddof=1) / math.sqrt(len(gap))) if len(gap) > 1 else float("nan")
        points.append(SweepPoint(
            snr_db=snr_db,
            trials=config.trials,
            nmse_mean=float(err.sum() / total_sig),
            nmse_median=float(np.median(ratios)),
            leakage_mean=float(merged["leakage"].mean()),
            aligned_rank=int(merged["aligned_rank"].max()),
            analytic_nmse=float(predicted.mean()),
            oracle_gap=float(gap.mean()),
            oracle_gap_se=se,
            err_power_mean=float(err.mean()),
        ))
    lo = (min(grid) + max(grid)) / 2.0
    slope = fit_nmse_slope(grid, [pt.nmse_mean for pt in points], lo=lo)
    return SweepResult(config=config, points=points, dof_slope=slope)
