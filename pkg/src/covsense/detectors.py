"""Test statistics and threshold decisions.

The ratio statistics compare summed (absolute or squared) covariance entries
against the diagonal sum; under noise-only input the ratio concentrates near
one, and correlated signal inflates it.  The energy statistic is the plain
average power of the window and, unlike the ratios, is not scale invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .covariance import CovarianceEstimate, SampleBuffer
from .errors import AllZeroInput, DomainError, InvalidPsi


@dataclass(frozen=True)
class DetectorStatistics:
    t_num: float
    t_den: float
    ratio: float
    kind: str  # cav | frobenius | generalized


@dataclass(frozen=True)
class Decision:
    present: bool
    statistic: float
    threshold: float


def _ratio_stats(t_num: float, t_den: float, kind: str) -> DetectorStatistics:
    if t_den == 0.0:
        raise AllZeroInput("diagonal statistic is zero; ratio undefined")
    return DetectorStatistics(t_num=t_num, t_den=t_den, ratio=t_num / t_den, kind=kind)


def cav_statistics(cov: CovarianceEstimate) -> DetectorStatistics:
    """T_num = (1/d) sum |r_nm|, T_den = (1/d) sum |r_nn|."""
    d = cov.dim
    mags = np.abs(cov.entries)
    return _ratio_stats(float(mags.sum()) / d, float(np.trace(mags)) / d, "cav")


def frobenius_statistics(cov: CovarianceEstimate) -> DetectorStatistics:
    """Squared-magnitude variant of the CAV statistics."""
    d = cov.dim
    sq = cov.entries ** 2
    return _ratio_stats(float(sq.sum()) / d, float(np.trace(sq)) / d, "frobenius")


def generalized_statistics(
    cov: CovarianceEstimate,
    psi_offdiag: Callable[[Sequence[float]], float],
    psi_diag: Callable[[Sequence[float]], float],
) -> DetectorStatistics:
    """Ratio statistics from caller-supplied non-negative functionals.

    psi_diag is applied to the diagonal entries, psi_offdiag to the
    off-diagonal entries; the numerator is their sum.  Both functionals must
    be non-negative and vanish only on the all-zero collection; a negative
    probe value raises InvalidPsi.
    """
    diag = np.diag(cov.entries).copy()
    off_mask = ~np.eye(cov.dim, dtype=bool)
    offdiag = cov.entries[off_mask]
    t_den = float(psi_diag(diag))
    t_off = float(psi_offdiag(offdiag))
    if t_den < 0 or t_off < 0:
        raise InvalidPsi("psi functional returned a negative value")
    return _ratio_stats(t_den + t_off, t_den, "generalized")


def decide(stats: DetectorStatistics, threshold: float) -> Decision:
    """Declare presence iff the ratio strictly exceeds the threshold."""
    if not np.isfinite(threshold) or threshold < 1.0:
        raise DomainError(f"threshold must be finite and >= 1, got {threshold}")
    return Decision(
        present=stats.ratio > threshold, statistic=stats.ratio, threshold=threshold
    )


def energy_detect(
    buffer: SampleBuffer, assumed_noise_power: float, threshold_factor: float
) -> Decision:
    """Compare average window power against threshold_factor * assumed power."""
    if assumed_noise_power <= 0:
        raise DomainError("assumed_noise_power must be positive")
    if threshold_factor <= 0:
        raise DomainError("threshold_factor must be positive")
    win = buffer.window()
    statistic = float(win @ win) / buffer.n_s
    threshold = threshold_factor * assumed_noise_power
    return Decision(present=statistic > threshold, statistic=statistic, threshold=threshold)
