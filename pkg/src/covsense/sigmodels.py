"""Test-signal and channel generators.

Every generator is a pure function of (spec, count, rng stream): identical
(seed, stream_id) pairs reproduce identical output on every platform, which
is what makes parallel Monte Carlo trials order-independent.  Streams are
counter-based (Philox) keyed by (seed, stream_id).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .covariance import SampleBuffer, compute_autocorrelations
from .errors import InvalidSpec, ZeroSignal
from .theory import CorrelationProfile

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_id: int

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed & _MASK64, self.stream_id & _MASK64], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise InvalidSpec(f"rng must be an RngStream or numpy Generator, got {type(rng)}")


@dataclass(frozen=True)
class SignalSpec:
    """Source signal selection.

    For the FM microphone model the defaults put the carrier at a low IF so
    the oversampled signal stays highly correlated over typical smoothing
    depths; tone and deviation are the soft-speaker convention.
    """

    variant: str = "none"  # wireless_mic_fm | bpsk_iid | none
    sample_rate_hz: float = 6e6
    if_center_hz: float = 50e3
    mod_tone_hz: float = 3900.0
    fm_deviation_hz: float = 15000.0

    def __post_init__(self):
        if self.variant not in ("wireless_mic_fm", "bpsk_iid", "none"):
            raise InvalidSpec(f"unknown signal variant {self.variant!r}")
        if self.variant == "wireless_mic_fm":
            if not (0.0 < self.if_center_hz < self.sample_rate_hz / 2.0):
                raise InvalidSpec("need 0 < if_center_hz < sample_rate_hz / 2")
            if self.fm_deviation_hz < 0:
                raise InvalidSpec("fm_deviation_hz must be >= 0")
            if self.mod_tone_hz <= 0:
                raise InvalidSpec("mod_tone_hz must be positive")


@dataclass(frozen=True)
class ChannelSpec:
    """Per-antenna real tap sequences plus a normalized Doppler rate."""

    taps_per_antenna: tuple = field(default_factory=tuple)
    doppler_fd: float = 0.0

    def __post_init__(self):
        taps = tuple(np.asarray(t, dtype=np.float64) for t in self.taps_per_antenna)
        object.__setattr__(self, "taps_per_antenna", taps)
        if len(taps) < 1:
            raise InvalidSpec("need at least one antenna tap sequence")
        for t in taps:
            if t.ndim != 1 or len(t) == 0 or not np.all(np.isfinite(t)):
                raise InvalidSpec("each tap sequence must be non-empty and finite")
        if not (0.0 <= self.doppler_fd < 0.5):
            raise InvalidSpec(f"doppler_fd must lie in [0, 0.5), got {self.doppler_fd}")

    @property
    def antennas(self) -> int:
        return len(self.taps_per_antenna)

    @property
    def max_order(self) -> int:
        return max(len(t) - 1 for t in self.taps_per_antenna)


def gen_noise(count: int, noise_power: float, rng) -> np.ndarray:
    """iid zero-mean Gaussian samples with the given variance."""
    if noise_power <= 0:
        raise InvalidSpec(f"noise_power must be positive, got {noise_power}")
    g = _as_generator(rng)
    return np.sqrt(noise_power) * g.standard_normal(count)


def gen_wireless_mic(count: int, spec: SignalSpec, rng) -> np.ndarray:
    """Single-tone FM at a real IF with a fresh uniform phase per call."""
    if spec.variant != "wireless_mic_fm":
        raise InvalidSpec(f"spec variant is {spec.variant!r}, not wireless_mic_fm")
    g = _as_generator(rng)
    phi0 = g.uniform(0.0, 2.0 * np.pi)
    n = np.arange(count)
    fs = spec.sample_rate_hz
    phase = (
        2.0 * np.pi * spec.if_center_hz * n / fs
        + (spec.fm_deviation_hz / spec.mod_tone_hz)
        * np.sin(2.0 * np.pi * spec.mod_tone_hz * n / fs)
        + phi0
    )
    return np.cos(phase)


def gen_bpsk_source(count: int, rng) -> np.ndarray:
    """iid equiprobable +/-1 samples."""
    g = _as_generator(rng)
    return (2 * g.integers(0, 2, size=count) - 1).astype(np.float64)


def apply_channel(source: np.ndarray, channel: ChannelSpec, antenna_index: int) -> np.ndarray:
    """Convolve the source with one antenna's taps (time-variant if fd > 0).

    The output has length len(source) - n_taps + 1: only indices where the
    full tap span overlaps the source.  With fd > 0 each tap k is rotated at
    rate (n_taps - k)/n_taps * fd cycles/sample and the real part of the
    complex sum is returned; the fd = 0 path accumulates identically so the
    two agree bit-for-bit at fd = 0.
    """
    taps = channel.taps_per_antenna[antenna_index]
    n_taps = len(taps)
    if len(source) < n_taps:
        raise InvalidSpec("source shorter than the channel response")
    out_len = len(source) - n_taps + 1
    if channel.doppler_fd == 0.0:
        out = np.zeros(out_len)
        for k in range(n_taps):
            out += taps[k] * source[n_taps - 1 - k: len(source) - k]
        return out
    n_abs = np.arange(n_taps - 1, len(source))
    acc = np.zeros(out_len, dtype=np.complex128)
    for k in range(n_taps):
        rot = np.exp(1j * 2.0 * np.pi * n_abs * ((n_taps - k) / n_taps) * channel.doppler_fd)
        acc += taps[k] * rot * source[n_taps - 1 - k: len(source) - k]
    return acc.real


def build_stacked_channel_matrix(channel: ChannelSpec, smoothing: int) -> np.ndarray:
    """Block-banded ML x (N+L) channel matrix for the stacked receive vector.

    Row block a (lag) holds h(0) ... h(N) in columns a ... a+N; shorter
    antenna responses are zero-padded to the common order N.
    """
    if channel.doppler_fd != 0.0:
        raise InvalidSpec("stacked channel matrix is defined for doppler_fd = 0")
    m = channel.antennas
    order = channel.max_order
    h = np.zeros((m, order + 1))
    for i, taps in enumerate(channel.taps_per_antenna):
        h[i, : len(taps)] = taps
    mat = np.zeros((m * smoothing, order + smoothing))
    for a in range(smoothing):
        mat[a * m: (a + 1) * m, a: a + order + 1] = h
    return mat


def mix_at_snr(
    signal_samples: np.ndarray,
    noise_power: float,
    target_snr: float,
    smoothing: int,
    rng,
) -> SampleBuffer:
    """Scale the signal to the target SNR, add fresh noise, package a buffer.

    target_snr = 0 yields a pure-noise buffer of the same length.
    """
    if target_snr < 0:
        raise InvalidSpec(f"target_snr must be >= 0, got {target_snr}")
    signal_samples = np.asarray(signal_samples, dtype=np.float64)
    count = len(signal_samples)
    n_s = count - smoothing + 1
    noise = gen_noise(count, noise_power, rng)
    if target_snr == 0.0:
        return SampleBuffer(samples=noise, n_s=n_s, smoothing=smoothing)
    power = float(np.mean(signal_samples ** 2))
    if power == 0.0:
        raise ZeroSignal("cannot scale a zero-power signal to positive SNR")
    scale = np.sqrt(target_snr * noise_power / power)
    return SampleBuffer(samples=scale * signal_samples + noise, n_s=n_s, smoothing=smoothing)


def estimate_alpha_profile(signal_samples: np.ndarray, smoothing: int) -> CorrelationProfile:
    """Normalized lag correlations of a noiseless signal, lags 1 ... L-1."""
    signal_samples = np.asarray(signal_samples, dtype=np.float64)
    if len(signal_samples) < smoothing:
        raise InvalidSpec("need at least L samples to estimate L-1 lags")
    buf = SampleBuffer(
        samples=signal_samples, n_s=len(signal_samples) - smoothing + 1, smoothing=smoothing
    )
    acf = compute_autocorrelations(buf)
    if acf.values[0] == 0.0:
        raise ZeroSignal("zero-power signal has no correlation profile")
    alphas = np.clip(acf.values[1:] / acf.values[0], -1.0, 1.0)
    return CorrelationProfile(alphas=alphas)


def draw_noise_uncertainty(b_db: float, rng) -> float:
    """Linear uncertainty factor 10^(U/10), U uniform on [-B, B] dB."""
    if b_db < 0:
        raise InvalidSpec(f"b_db must be >= 0, got {b_db}")
    if b_db == 0.0:
        return 1.0
    g = _as_generator(rng)
    return float(10.0 ** (g.uniform(-b_db, b_db) / 10.0))
