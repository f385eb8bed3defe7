"""Closed-form analytic layer.

Gaussian tail function and its inverse, ratio-detector threshold and
false-alarm/detection probability predictions, correlation strength,
required sample counts for both the ratio detector and energy detection,
and the break-even comparison between the two.

All detection-probability formulas here are large-sample, low-SNR central
limit approximations; they predict trends well but are not exact finite
sample distributions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import DegenerateDesign, DomainError, InvalidDesign

_P_MIN = 1e-12


def q_function(t: float) -> float:
    """Gaussian upper-tail probability Q(t) = P(Z > t)."""
    if not np.isfinite(t):
        raise DomainError(f"t must be finite, got {t}")
    return float(ndtr(-t))


def q_inverse(p: float) -> float:
    """Inverse of q_function on (1e-12, 1 - 1e-12)."""
    if not (_P_MIN < p < 1.0 - _P_MIN):
        raise DomainError(f"p must be in ({_P_MIN}, {1 - _P_MIN}), got {p}")
    return float(-ndtri(p))


@dataclass(frozen=True)
class DetectionDesign:
    """Analytic parameter bundle: smoothing L, sample count, Pfa target, SNR."""

    smoothing: int
    n_s: int
    pfa_target: float
    snr: float = 0.0

    def __post_init__(self):
        if self.smoothing < 2:
            raise InvalidDesign(f"smoothing must be >= 2, got {self.smoothing}")
        if self.n_s < 1:
            raise InvalidDesign(f"n_s must be >= 1, got {self.n_s}")
        if not (0.0 < self.pfa_target < 0.5):
            raise InvalidDesign(
                f"pfa_target must lie in (0, 0.5), got {self.pfa_target}"
            )
        if self.snr < 0:
            raise InvalidDesign(f"snr must be >= 0, got {self.snr}")
        if self.n_s <= 2.0 * q_inverse(self.pfa_target) ** 2:
            raise InvalidDesign(
                "n_s too small: threshold denominator would be non-positive"
            )


@dataclass(frozen=True)
class CorrelationProfile:
    """Normalized signal autocorrelations alpha_1 ... alpha_{L-1}."""

    alphas: np.ndarray

    def __post_init__(self):
        alphas = np.asarray(self.alphas, dtype=np.float64)
        object.__setattr__(self, "alphas", alphas)
        if np.any(np.abs(alphas) > 1.0 + 1e-9):
            raise DomainError("normalized correlations must satisfy |alpha_l| <= 1")


def cav_threshold(design: DetectionDesign) -> float:
    """Ratio threshold meeting the target false-alarm probability.

    gamma = (1 + (L-1) sqrt(2/(N_s pi))) / (1 - Q^{-1}(Pfa) sqrt(2/N_s)).
    """
    ell, n_s = design.smoothing, design.n_s
    num = 1.0 + (ell - 1) * math.sqrt(2.0 / (n_s * math.pi))
    den = 1.0 - q_inverse(design.pfa_target) * math.sqrt(2.0 / n_s)
    if den <= 0:
        raise InvalidDesign("threshold denominator non-positive")
    return num / den


def cav_pfa(threshold: float, smoothing: int, n_s: int) -> float:
    """Predicted false-alarm probability of the ratio detector at a threshold."""
    if threshold < 1.0:
        raise DomainError(f"threshold must be >= 1, got {threshold}")
    num = 1.0 + (smoothing - 1) * math.sqrt(2.0 / (n_s * math.pi))
    arg = (num / threshold - 1.0) / math.sqrt(2.0 / n_s)
    return 1.0 - q_function(arg)


def correlation_strength(profile: CorrelationProfile, smoothing: int) -> float:
    """Upsilon_L = (2/L) sum_{l=1}^{L-1} (L-l) |alpha_l|."""
    if len(profile.alphas) != smoothing - 1:
        raise DomainError(
            f"profile must have L-1 = {smoothing - 1} entries, got {len(profile.alphas)}"
        )
    weights = np.arange(smoothing - 1, 0, -1)
    return float(2.0 / smoothing * (weights @ np.abs(profile.alphas)))


def predict_ratio_h0(smoothing: int, n_s: int) -> float:
    """Mean noise-only ratio: 1 + (L-1) sqrt(2/(pi N_s))."""
    return 1.0 + (smoothing - 1) * math.sqrt(2.0 / (math.pi * n_s))


def predict_ratio_h1(snr: float, upsilon: float) -> float:
    """Large-sample signal-present ratio: 1 + Upsilon_L SNR / (SNR + 1)."""
    return 1.0 + upsilon * snr / (snr + 1.0)


def cav_pd(threshold: float, snr: float, upsilon: float, n_s: int) -> float:
    """Predicted detection probability at a threshold."""
    if threshold < 1.0:
        raise DomainError(f"threshold must be >= 1, got {threshold}")
    arg = (
        1.0 / threshold + upsilon * snr / (threshold * (snr + 1.0)) - 1.0
    ) / math.sqrt(2.0 / n_s)
    return 1.0 - q_function(arg)


def expected_t1_h1(
    snr: float,
    profile: CorrelationProfile,
    smoothing: int,
    n_s: int,
    noise_power: float,
) -> float:
    """Approximate mean of the summed-magnitude statistic with signal present.

    Combines the folded-normal means of the lag correlations: each lag l
    contributes |alpha_l| sigma_s^2 weighted by the probability mass on the
    dominant sign plus a fluctuation term that decays as 1/sqrt(N_s).
    Reduces to (1 + (L-1) sqrt(2/(pi N_s))) sigma_eta^2 at snr = 0.
    """
    if snr < 0 or noise_power <= 0:
        raise DomainError("need snr >= 0 and noise_power > 0")
    if len(profile.alphas) != smoothing - 1:
        raise DomainError(f"profile must have L-1 = {smoothing - 1} entries")
    sig_s2 = snr * noise_power
    total = sig_s2 + noise_power
    weights = np.arange(smoothing - 1, 0, -1).astype(float)
    abs_alpha = np.abs(profile.alphas)
    tau = abs_alpha * snr * math.sqrt(n_s) / (1.0 + snr)
    # sqrt(2/pi) * int_tau^inf exp(-u^2/2) du == 2 Q(tau)
    tail = 2.0 * ndtr(-tau)
    signal_term = (2.0 * sig_s2 / smoothing) * float(
        weights @ (abs_alpha * (1.0 - tail))
    )
    fluct_term = (2.0 * total / smoothing) * math.sqrt(2.0 / (math.pi * n_s)) * float(
        weights @ (2.0 - np.exp(-(tau ** 2) / 2.0))
    )
    return total + signal_term + fluct_term


def required_samples_cav(
    pd: float, pfa: float, smoothing: int, upsilon: float, snr: float
) -> int:
    """Sample count for the ratio detector to reach (pd, pfa)."""
    if not (0.0 < pfa < pd < 1.0):
        raise DomainError(f"need 0 < pfa < pd < 1, got pfa={pfa}, pd={pd}")
    if upsilon * snr <= 0.0:
        raise DegenerateDesign("upsilon * snr must be positive for a finite count")
    num = 2.0 * (
        q_inverse(pfa) - q_inverse(pd) + (smoothing - 1) / math.sqrt(math.pi)
    ) ** 2
    return math.ceil(num / (upsilon * snr) ** 2)


def required_samples_energy(pd: float, pfa: float, snr: float) -> int:
    """Sample count for ideal energy detection to reach (pd, pfa)."""
    if not (0.0 < pfa <= pd < 1.0):
        raise DomainError(f"need 0 < pfa <= pd < 1, got pfa={pfa}, pd={pd}")
    if snr <= 0.0:
        raise DegenerateDesign("snr must be positive for a finite count")
    return math.ceil(2.0 * (q_inverse(pfa) - q_inverse(pd)) ** 2 / snr ** 2)


def cav_advantage_boundary(pd: float, pfa: float, smoothing: int) -> float:
    """Correlation strength above which the ratio detector needs fewer samples."""
    if not (0.0 < pfa < pd < 1.0):
        raise DomainError(f"need 0 < pfa < pd < 1, got pfa={pfa}, pd={pd}")
    return 1.0 + (smoothing - 1) / (
        math.sqrt(math.pi) * (q_inverse(pfa) - q_inverse(pd))
    )


def cav_advantage(pd: float, pfa: float, smoothing: int, upsilon: float) -> bool:
    """True iff the ratio detector beats ideal energy detection on sample count."""
    return upsilon > cav_advantage_boundary(pd, pfa, smoothing)


def best_smoothing_factor(pd, pfa, alpha_profile_fn, l_range):
    """Smoothing factor minimizing the required sample count.

    The SNR enters the count only as a global factor, so the argmin is
    evaluated at snr = 1.  Ties break toward the smaller L.
    """
    l_values = sorted(l_range)
    if not l_values:
        raise DegenerateDesign("l_range is empty")
    best = None
    for ell in l_values:
        profile = CorrelationProfile(alphas=np.asarray(alpha_profile_fn(ell), dtype=float))
        upsilon = correlation_strength(profile, ell)
        if upsilon == 0.0:
            continue
        exact = (
            2.0
            * (q_inverse(pfa) - q_inverse(pd) + (ell - 1) / math.sqrt(math.pi)) ** 2
            / upsilon ** 2
        )
        if best is None or exact < best[1]:
            best = (ell, exact)
    if best is None:
        raise DegenerateDesign("correlation strength is zero for every candidate L")
    return best[0], math.ceil(best[1])


def noise_uncertainty_bound(alpha_support) -> float:
    """Largest 10 log10(alpha) over a support of linear power-ratio values."""
    values = np.atleast_1d(np.asarray(alpha_support, dtype=np.float64))
    if np.any(values <= 0):
        raise DomainError("uncertainty factors must be positive")
    return float(np.max(10.0 * np.log10(values)))


def uncertainty_interval(b_db: float) -> tuple[float, float]:
    """Linear support [10^(-B/10), 10^(B/10)] of a B-dB uniform uncertainty."""
    if b_db < 0:
        raise DomainError(f"b_db must be >= 0, got {b_db}")
    return 10.0 ** (-b_db / 10.0), 10.0 ** (b_db / 10.0)
