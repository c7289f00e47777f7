"""Simultaneous signal-and-interference alignment for two-cell AirComp.

Each device cascades three stages. An interference-alignment stage
inverts the device's cross channel, so every device of a cell reaches the
neighbour AP through the cell's common reference matrix; that confines
the whole cell's interference to a fixed low-dimensional subspace
regardless of the device count. The reference matrix itself is the
second stage. A signal-alignment stage then right-inverts the effective
home-AP channel so the wanted symbols arrive pre-summed. Each AP projects
its received vector onto the orthogonal complement of the other cell's
reference subspace, which removes the aligned interference and leaves the
plain sum of the home cell's symbol vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RankDeficient, SizeMismatch
from .linalg import (
    FULL_RANK_RTOL,
    RANK_RTOL,
    as_matrix,
    gaussian_matrix,
    inverse,
    left_null_space_basis,
    numerical_rank,
    right_inverse,
)
from .system import partition


@dataclass
class SiaMatrices:
    """All matrices of one aligned trial.

    reference:    (2, M, N') per-cell interference reference matrices
    beamformer:   (2, dof, M) aggregation beamformers, orthonormal rows
    ia_component: (K, 2, M, M) inverted cross channels
    sa_component: (K, 2, N', dof) right inverses of the effective channels
    precoder:     (K, 2, M, dof) full cascades ia @ reference @ sa
    """

    reference: np.ndarray
    beamformer: np.ndarray
    ia_component: np.ndarray
    sa_component: np.ndarray
    precoder: np.ndarray


def build_reference_matrices(antennas, interference_dim, rng=None, fixed=False):
    """Two full-column-rank reference matrices, one per cell, shape (2, M, N').

    Random draws are orthonormalised (QR) so the aggregation beamformers
    inherit a well-conditioned null-space problem. fixed=True uses
    identity columns instead (first block for cell 1, last block for
    cell 2), convenient for hand-checked examples.
    """
    expected = partition(antennas).interference_dim
    if interference_dim != expected:
        raise ValueError(
            f"interference_dim must be {expected} for M={antennas}, got {interference_dim}")
    if fixed:
        eye = np.eye(antennas, dtype=np.complex128)
        return np.stack([eye[:, :interference_dim], eye[:, antennas - interference_dim:]])
    if rng is None:
        raise ValueError("rng is required for random reference matrices")
    refs = []
    for _ in range(2):
        q, _ = np.linalg.qr(gaussian_matrix(antennas, interference_dim, rng))
        refs.append(q)
    return np.stack(refs)


def build_aggregation_beamformers(reference):
    """Per-AP beamformers annihilating the other cell's reference subspace.

    Returns (2, dof, M); row i is orthonormal and satisfies
    beamformer[i] @ reference[j] = 0 for j != i.
    """
    reference = np.asarray(reference)
    if reference.ndim != 3 or reference.shape[0] != 2:
        raise SizeMismatch(f"reference must be (2, M, N'), got {reference.shape}")
    return np.stack([
        left_null_space_basis(reference[1]),
        left_null_space_basis(reference[0]),
    ])


def build_precoder(device, cell, channels, beamformer, reference):
    """Cascaded precoder for one device of one cell.

    Returns (ia, sa, full): ia inverts the device's cross channel, sa
    right-inverts the effective channel beamformer @ direct @ ia @
    reference, and full = ia @ reference @ sa. Raises NearSingular or
    RankDeficient on degenerate draws; callers redraw the channel set.
    """
    beamformer = as_matrix(beamformer, "beamformer")
    reference = as_matrix(reference, "reference")
    ia = inverse(channels.cross[device, cell])
    effective = beamformer @ channels.direct[device, cell] @ ia @ reference
    sa = right_inverse(effective)
    return ia, sa, ia @ (reference @ sa)


def build_sia_matrices(channels, reference):
    """Build beamformers and all K*2 precoders for one channel draw.

    Vectorised equivalent of calling build_precoder per device. Assumes
    the cross channels already passed the draw-time conditioning guard.
    """
    reference = np.asarray(reference)
    beamformer = build_aggregation_beamformers(reference)
    k, m = channels.devices, channels.antennas
    dof = beamformer.shape[1]
    nprime = reference.shape[2]
    ia = np.linalg.inv(channels.cross)
    sa = np.empty((k, 2, nprime, dof), dtype=np.complex128)
    precoder = np.empty((k, 2, m, dof), dtype=np.complex128)
    for i in (0, 1):
        through = channels.direct[:, i] @ ia[:, i]
        effective = beamformer[i] @ (through @ reference[i])
        svals = np.linalg.svd(effective, compute_uv=False)
        if np.any(svals[:, -1] <= FULL_RANK_RTOL * svals[:, 0]):
            raise RankDeficient("effective channel lost row rank; redraw the channel set")
        sa[:, i] = np.linalg.pinv(effective)
        precoder[:, i] = ia[:, i] @ (reference[i] @ sa[:, i])
    return SiaMatrices(reference, beamformer, ia, sa, precoder)


def aligned_interference_dimension(cell, channels, precoders, tol=RANK_RTOL):
    """Dimension cell `cell` occupies at the other AP after precoding.

    Numerical rank of the M x (K * dof) horizontal stack of the
    cross-channel blocks cross[k, cell] @ precoders[k, cell].
    """
    precoders = np.asarray(precoders)
    blocks = channels.cross[:, cell] @ precoders[:, cell]
    stack = blocks.transpose(1, 0, 2).reshape(channels.antennas, -1)
    return numerical_rank(stack, tol)


def recover(beamformer, received):
    """Project a received vector onto the home signal space (the estimate
    of the home cell's symbol sum)."""
    beamformer = as_matrix(beamformer, "beamformer")
    received = np.asarray(received, dtype=np.complex128)
    if received.ndim != 1 or received.shape[0] != beamformer.shape[1]:
        raise SizeMismatch(
            f"received must be a length-{beamformer.shape[1]} vector, got {received.shape}")
    return beamformer @ received
