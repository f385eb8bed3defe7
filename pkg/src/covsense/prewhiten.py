"""Whitening transform for noise shaped by a known narrowband filter.

With filter taps f(0..K), L consecutive filtered-noise samples have
covariance sigma^2 G where G = F F^T and F is the L x (L+K) banded filter
matrix.  G is symmetric positive definite, so it has a unique SPD square
root Q; transforming a covariance estimate as Q^{-1} R Q^{-1} restores a
scaled identity for the noise contribution.  Q depends only on the filter,
so the inverse is precomputed once and stored.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covariance import CovarianceEstimate
from .errors import DimensionMismatch, MalformedBuffer, SingularFilter

_EIG_FLOOR = 1e-10


@dataclass(frozen=True)
class FilterSpec:
    taps: np.ndarray

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=np.float64)
        object.__setattr__(self, "taps", taps)
        if taps.ndim != 1 or len(taps) == 0:
            raise MalformedBuffer("filter needs at least one tap")
        if not np.all(np.isfinite(taps)):
            raise MalformedBuffer("filter taps must be finite")
        if not np.any(taps):
            raise MalformedBuffer("filter needs at least one nonzero tap")

    @property
    def order(self) -> int:
        return len(self.taps) - 1


@dataclass(frozen=True)
class WhiteningTransform:
    dim: int
    q_matrix: np.ndarray
    q_inverse_matrix: np.ndarray


def build_filter_matrix(filt: FilterSpec, smoothing: int) -> np.ndarray:
    """Banded L x (L+K) matrix: row r carries the taps in columns r ... r+K."""
    if smoothing < 1:
        raise DimensionMismatch(f"smoothing must be >= 1, got {smoothing}")
    k = filt.order
    mat = np.zeros((smoothing, smoothing + k))
    for r in range(smoothing):
        mat[r, r: r + k + 1] = filt.taps
    return mat


def whitening_transform(filt: FilterSpec, smoothing: int) -> WhiteningTransform:
    """Q^{-1} for the unique SPD square root Q of G = F F^T."""
    f_mat = build_filter_matrix(filt, smoothing)
    gram = f_mat @ f_mat.T
    eigvals, eigvecs = np.linalg.eigh(gram)
    if eigvals[0] <= _EIG_FLOOR * eigvals[-1]:
        raise SingularFilter(
            f"filter Gram matrix numerically singular (eig ratio "
            f"{eigvals[0] / eigvals[-1]:.3e})"
        )
    sqrt_q = eigvecs @ np.diag(np.sqrt(eigvals)) @ eigvecs.T
    inv_q = eigvecs @ np.diag(1.0 / np.sqrt(eigvals)) @ eigvecs.T
    sqrt_q = (sqrt_q + sqrt_q.T) / 2.0
    inv_q = (inv_q + inv_q.T) / 2.0
    return WhiteningTransform(dim=smoothing, q_matrix=sqrt_q, q_inverse_matrix=inv_q)


def apply_whitening(
    cov: CovarianceEstimate, transform: WhiteningTransform
) -> CovarianceEstimate:
    """Q^{-1} R Q^{-1}, symmetrized; structure tag downgrades to generic."""
    if cov.dim != transform.dim:
        raise DimensionMismatch(
            f"covariance dim {cov.dim} != transform dim {transform.dim}"
        )
    qi = transform.q_inverse_matrix
    out = qi @ cov.entries @ qi
    out = (out + out.T) / 2.0
    return CovarianceEstimate(entries=out, structure="generic")
