"""Sample autocorrelations and (block-)Toeplitz sample covariance matrices.

The raw input is a window of real samples carrying an explicit lag prefix:
a buffer with smoothing depth L and N_s correlation terms holds
N_s + L - 1 samples, the first L - 1 being x(-(L-1)), ..., x(-1).  All
estimators here are pure functions of immutable inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import toeplitz

from .errors import MalformedBuffer

# Above this size plain dot products can lose enough bits to threaten the
# 1e-12 oracle tolerance; switch to compensated summation.
_FSUM_THRESHOLD = 1_000_000


@dataclass(frozen=True)
class SampleBuffer:
    """A finite window of real received samples with an explicit lag prefix."""

    samples: np.ndarray
    n_s: int
    smoothing: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", samples)
        if self.n_s < 1 or self.smoothing < 1:
            raise MalformedBuffer(
                f"need n_s >= 1 and smoothing >= 1, got n_s={self.n_s}, "
                f"smoothing={self.smoothing}"
            )
        expected = self.n_s + self.smoothing - 1
        if samples.ndim != 1 or len(samples) != expected:
            raise MalformedBuffer(
                f"buffer must hold n_s + L - 1 = {expected} samples, got "
                f"{samples.shape}"
            )
        if not np.all(np.isfinite(samples)):
            raise MalformedBuffer("buffer contains non-finite samples")

    def window(self) -> np.ndarray:
        """The N_s samples x(0) ... x(N_s - 1)."""
        return self.samples[self.smoothing - 1:]

    def lagged(self, lag: int) -> np.ndarray:
        """The N_s samples x(-lag) ... x(N_s - 1 - lag)."""
        start = self.smoothing - 1 - lag
        return self.samples[start: start + self.n_s]


@dataclass(frozen=True)
class MultiAntennaBuffer:
    """Per-antenna sample buffers sharing a common n_s and smoothing depth."""

    channels: tuple[SampleBuffer, ...]

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        if len(self.channels) < 1:
            raise MalformedBuffer("need at least one antenna channel")
        first = self.channels[0]
        for ch in self.channels[1:]:
            if ch.n_s != first.n_s or ch.smoothing != first.smoothing:
                raise MalformedBuffer("all channels must share n_s and smoothing")

    @property
    def antennas(self) -> int:
        return len(self.channels)

    @property
    def n_s(self) -> int:
        return self.channels[0].n_s

    @property
    def smoothing(self) -> int:
        return self.channels[0].smoothing


@dataclass(frozen=True)
class AutocorrVector:
    """Sample autocorrelations lambda(0) ... lambda(L-1)."""

    values: np.ndarray
    n_s: int

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))

    @property
    def smoothing(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class CovarianceEstimate:
    """Symmetric sample covariance matrix with a structure tag."""

    entries: np.ndarray
    structure: str = field(default="toeplitz")  # toeplitz | block_toeplitz | generic

    def __post_init__(self):
        object.__setattr__(self, "entries", np.asarray(self.entries, dtype=np.float64))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _lag_product(x: np.ndarray, y: np.ndarray, n_s: int) -> float:
    if n_s >= _FSUM_THRESHOLD:
        return math.fsum(x * y) / n_s
    return float(x @ y) / n_s


def compute_autocorrelations(buffer: SampleBuffer) -> AutocorrVector:
    """lambda(l) = (1/N_s) sum_m x(m) x(m-l), l = 0 ... L-1."""
    win = buffer.window()
    values = np.array(
        [_lag_product(win, buffer.lagged(l), buffer.n_s) for l in range(buffer.smoothing)]
    )
    return AutocorrVector(values=values, n_s=buffer.n_s)


def build_toeplitz_covariance(acf: AutocorrVector) -> CovarianceEstimate:
    """Place lambda(|n - m|) on each diagonal of an L x L matrix."""
    return CovarianceEstimate(entries=toeplitz(acf.values), structure="toeplitz")


def compute_multiantenna_covariance(buffer: MultiAntennaBuffer) -> CovarianceEstimate:
    """Block-Toeplitz ML x ML covariance from cross-correlations.

    Rows and columns are indexed by (lag a, antenna i) in interleaved order
    [all antennas at lag 0, all at lag 1, ...]; the ((i,a),(j,b)) entry is
    lambda_ij(a-b) with lambda_ij(-l) = lambda_ji(l).
    """
    m = buffer.antennas
    big_l = buffer.smoothing
    n_s = buffer.n_s
    wins = [ch.window() for ch in buffer.channels]
    lam = np.empty((m, m, big_l))
    for i in range(m):
        for j in range(m):
            for lag in range(big_l):
                lam[i, j, lag] = _lag_product(wins[i], buffer.channels[j].lagged(lag), n_s)
    dim = m * big_l
    entries = np.empty((dim, dim))
    for a in range(big_l):
        for i in range(m):
            for b in range(big_l):
                for j in range(m):
                    lag = a - b
                    entries[a * m + i, b * m + j] = (
                        lam[i, j, lag] if lag >= 0 else lam[j, i, -lag]
                    )
    structure = "toeplitz" if m == 1 else "block_toeplitz"
    return CovarianceEstimate(entries=entries, structure=structure)
