"""Scenario configuration, channel generation and the received-signal model.

The layout is fixed: two cells, one access point per cell, `devices`
devices per cell, and `antennas` antennas on every node (devices need a
square channel to invert their cross link). Channels are i.i.d. complex
Gaussian and stay fixed for the duration of a trial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import ConfigError, DegenerateChannels, SizeMismatch
from .linalg import COND_LIMIT

SCHEMES = ("sia", "no_ia", "genie")
FUNCTIONS = ("sum", "mean", "geomean")

DEFAULT_SNR_GRID = tuple(float(s) for s in range(0, 45, 5))
DEFAULT_TRIALS = 200

# Redraw attempts allowed per matrix before the draw is declared degenerate.
MATRIX_REDRAW_BUDGET = 100


@dataclass
class SystemConfig:
    antennas: int                          # M, per node
    devices: int                           # K, per cell
    snr_db_grid: tuple = DEFAULT_SNR_GRID  # sweep points, dB, strictly ascending
    trials: int = DEFAULT_TRIALS           # Monte Carlo trials per point
    seed: int = 0                          # base seed; trials derive their own streams
    scheme: str = "sia"                    # sia | no_ia | genie
    function: str = "mean"                 # sum | mean | geomean
    num_cells: int = 2                     # the construction is specific to two cells
    fixed_reference: bool = False          # identity-column references, for hand checks

    def validate(self):
        if self.antennas == 1:
            raise ConfigError("M=1 yields zero AirComp DoF")
        if self.antennas < 1:
            raise ConfigError(f"antennas must be positive, got {self.antennas}")
        if self.devices < 1:
            raise ConfigError(f"devices must be positive, got {self.devices}")
        if self.num_cells != 2:
            raise ConfigError("num_cells is fixed at 2")
        if self.trials < 1:
            raise ConfigError(f"trials must be positive, got {self.trials}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigError("seed must be an integer")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {'/'.join(SCHEMES)}, got {self.scheme!r}")
        if self.function not in FUNCTIONS:
            raise ConfigError(f"function must be one of {'/'.join(FUNCTIONS)}, got {self.function!r}")
        grid = tuple(float(s) for s in self.snr_db_grid)
        if len(grid) == 0:
            raise ConfigError("snr_db_grid must not be empty")
        if any(not math.isfinite(s) for s in grid):
            raise ConfigError("snr_db_grid entries must be finite")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("snr_db_grid must be strictly ascending")
        return self

    def to_flat(self):
        """Flat key=value view used by config files and manifests."""
        return {
            "antennas": str(self.antennas),
            "devices": str(self.devices),
            "snr_db_grid": ",".join(format(float(s), ".12g") for s in self.snr_db_grid),
            "trials": str(self.trials),
            "seed": str(self.seed),
            "scheme": self.scheme,
            "function": self.function,
            "num_cells": str(self.num_cells),
            "fixed_reference": "true" if self.fixed_reference else "false",
        }

    @classmethod
    def from_flat(cls, mapping):
        known = {f.name for f in fields(cls)}
        unknown = set(mapping) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        missing = {"antennas", "devices"} - set(mapping)
        if missing:
            raise ConfigError(f"missing config keys: {', '.join(sorted(missing))}")
        kw = {}
        try:
            for key, raw in mapping.items():
                if key in ("antennas", "devices", "trials", "seed", "num_cells"):
                    kw[key] = int(raw)
                elif key == "snr_db_grid":
                    parts = [p for p in str(raw).split(",") if p.strip() != ""]
                    kw[key] = tuple(float(p) for p in parts)
                elif key == "fixed_reference":
                    kw[key] = _parse_bool(raw)
                else:
                    kw[key] = str(raw)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
        return cls(**kw)


def _parse_bool(raw):
    text = str(raw).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


def parse_config_file(path):
    """Read a flat key=value config file (blank lines and # comments ignored)."""
    mapping = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {stripped!r}")
            key, _, value = stripped.partition("=")
            mapping[key.strip()] = value.strip()
    return mapping


@dataclass(frozen=True)
class Partition:
    signal_dim: int        # interference-free aggregated streams per cell
    interference_dim: int  # dimensions ceded to the neighbour cell's interference


def partition(antennas):
    """Split an M-dimensional receive space into signal and interference parts.

    Even M splits evenly; odd M gives the spare dimension to the
    interference side, so the signal side is floor(M/2).
    """
    if antennas < 1:
        raise ValueError("antennas must be positive")
    half = antennas // 2
    return Partition(half, antennas - half)


@dataclass
class ChannelSet:
    direct: np.ndarray  # (K, 2, M, M), device (k, i) to its own AP i
    cross: np.ndarray   # (K, 2, M, M), device (k, i) to the other AP
    redraws: int = 0    # matrices rejected by the conditioning guard

    @property
    def devices(self):
        return self.direct.shape[0]

    @property
    def antennas(self):
        return self.direct.shape[-1]


def _complex_normal(rng, shape):
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) / math.sqrt(2.0)


def _guard_conditioning(mats, rng, budget=MATRIX_REDRAW_BUDGET):
    """Redraw any matrix in the stack whose condition number exceeds COND_LIMIT."""
    svals = np.linalg.svd(mats, compute_uv=False)
    bad = svals[..., 0] > COND_LIMIT * svals[..., -1]
    bad |= svals[..., 0] == 0.0
    redraws = 0
    m = mats.shape[-1]
    for idx in zip(*np.nonzero(bad)):
        for _ in range(budget):
            redraws += 1
            candidate = _complex_normal(rng, (m, m))
            s = np.linalg.svd(candidate, compute_uv=False)
            if s[0] != 0.0 and s[0] <= COND_LIMIT * s[-1]:
                mats[idx] = candidate
                break
        else:
            raise DegenerateChannels(
                f"matrix redraw budget ({budget}) exhausted under the conditioning guard")
    return redraws


def draw_channels(config, rng, budget=MATRIX_REDRAW_BUDGET):
    """Draw all 4*K channel matrices for one trial.

    Both stacks are i.i.d. CN(0, 1); any matrix with condition number
    above COND_LIMIT is redrawn so the cross channels stay invertible in
    double precision.
    """
    config.validate()
    k, m = config.devices, config.antennas
    direct = _complex_normal(rng, (k, 2, m, m))
    redraws = _guard_conditioning(direct, rng, budget)
    cross = _complex_normal(rng, (k, 2, m, m))
    redraws += _guard_conditioning(cross, rng, budget)
    return ChannelSet(direct, cross, redraws)


def draw_symbols(config, rng):
    """Unit-variance i.i.d. complex Gaussian symbols, shape (K, 2, signal_dim)."""
    config.validate()
    dof = partition(config.antennas).signal_dim
    return _complex_normal(rng, (config.devices, 2, dof))


def _check_superpose_args(channels, precoders, symbols):
    k, m = channels.devices, channels.antennas
    precoders = np.asarray(precoders)
    symbols = np.asarray(symbols)
    if channels.direct.shape != (k, 2, m, m) or channels.cross.shape != (k, 2, m, m):
        raise SizeMismatch(f"inconsistent channel stacks {channels.direct.shape} / {channels.cross.shape}")
    if precoders.ndim != 4 or precoders.shape[:3] != (k, 2, m):
        raise SizeMismatch(f"precoders must be (K, 2, M, dof), got {precoders.shape}")
    if symbols.shape != (k, 2, precoders.shape[3]):
        raise SizeMismatch(f"symbols must be (K, 2, dof), got {symbols.shape}")
    return precoders, symbols


def superpose(channels, precoders, symbols):
    """Noise-free received components at both APs.

    Returns (desired, interference), each of shape (2, M). desired[i]
    accumulates direct[k, i] @ precoders[k, i] @ symbols[k, i] over the
    home cell; interference[i] accumulates the other cell's devices
    through their cross channels.
    """
    precoders, symbols = _check_superpose_args(channels, precoders, symbols)
    tx = np.einsum("kimd,kid->kim", precoders, symbols)
    desired = np.einsum("kimn,kin->im", channels.direct, tx)
    caused = np.einsum("kimn,kin->im", channels.cross, tx)
    return desired, caused[::-1].copy()


def receive(channels, precoders, symbols, noise_std, rng=None):
    """Received vectors at both APs: both cells' superposition plus noise.

    noise_std = 0 returns the noiseless superposition exactly and does not
    touch `rng`. Returns a tuple (y_1, y_2) of length-M vectors.
    """
    if noise_std < 0:
        raise ValueError("noise_std must be non-negative")
    desired, interference = superpose(channels, precoders, symbols)
    received = desired + interference
    if noise_std > 0:
        if rng is None:
            raise ValueError("rng is required when noise_std > 0")
        received = received + noise_std * _complex_normal(rng, received.shape)
    return received[0], received[1]
