"""Signal, channel, and randomness models."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covsense.errors import InvalidSpec, ZeroSignal
from covsense.sigmodels import (
    ChannelSpec,
    RngStream,
    SignalSpec,
    apply_channel,
    build_stacked_channel_matrix,
    draw_noise_uncertainty,
    estimate_alpha_profile,
    gen_bpsk_source,
    gen_noise,
    gen_wireless_mic,
    mix_at_snr,
)


def test_rng_stream_is_deterministic_and_keyed():
    a = RngStream(7, 123).generator().standard_normal(16)
    b = RngStream(7, 123).generator().standard_normal(16)
    c = RngStream(7, 124).generator().standard_normal(16)
    d = RngStream(8, 123).generator().standard_normal(16)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_noise_moments():
    g = RngStream(1, 0).generator()
    x = gen_noise(200000, 2.5, g)
    assert np.mean(x ** 2) == pytest.approx(2.5, rel=0.02)
    assert np.mean(x) == pytest.approx(0.0, abs=0.02)


def test_mic_signal_power_and_correlation():
    spec = SignalSpec(variant="wireless_mic_fm")
    g = RngStream(2, 0).generator()
    x = gen_wireless_mic(500000, spec, g)
    # constant-envelope FM: average power 1/2
    assert np.mean(x ** 2) == pytest.approx(0.5, abs=0.01)
    profile = estimate_alpha_profile(x, 10)
    assert abs(profile.alphas[0]) > 0.9  # strong lag-1 correlation
    assert np.all(np.abs(profile.alphas) <= 1.0)


def test_mic_random_phase_varies_by_stream():
    spec = SignalSpec(variant="wireless_mic_fm")
    x = gen_wireless_mic(64, spec, RngStream(2, 10).generator())
    y = gen_wireless_mic(64, spec, RngStream(2, 11).generator())
    assert not np.array_equal(x, y)


def test_bpsk_values():
    g = RngStream(3, 0).generator()
    s = gen_bpsk_source(10000, g)
    assert set(np.unique(s)) == {-1.0, 1.0}
    assert abs(np.mean(s)) < 0.05


def test_apply_channel_matches_convolution():
    taps = np.array([0.5, -1.0, 0.25])
    channel = ChannelSpec(taps_per_antenna=(taps,))
    g = RngStream(4, 0).generator()
    src = g.standard_normal(64)
    out = apply_channel(src, channel, 0)
    expected = np.convolve(src, taps, mode="valid")
    assert len(out) == 64 - 3 + 1
    np.testing.assert_allclose(out, expected, atol=1e-12)


def test_apply_channel_doppler_zero_matches_static():
    taps = np.array([1.0, 0.5])
    static = ChannelSpec(taps_per_antenna=(taps,), doppler_fd=0.0)
    g = RngStream(4, 1).generator()
    src = g.standard_normal(128)
    np.testing.assert_array_equal(
        apply_channel(src, static, 0), apply_channel(src, static, 0)
    )
    rotating = ChannelSpec(taps_per_antenna=(taps,), doppler_fd=1e-3)
    moved = apply_channel(src, rotating, 0)
    assert not np.allclose(moved, apply_channel(src, static, 0))


def test_stacked_channel_matrix_shape():
    taps = (np.array([1.0, 0.5, 0.2]), np.array([0.3, -0.4, 0.1]))
    channel = ChannelSpec(taps_per_antenna=taps)
    smoothing = 4
    mat = build_stacked_channel_matrix(channel, smoothing)
    assert mat.shape == (2 * smoothing, channel.max_order + smoothing)


def test_mix_at_snr_hits_target_power_ratio():
    g = RngStream(5, 0).generator()
    sig = gen_wireless_mic(100000 + 9, SignalSpec(variant="wireless_mic_fm"), g)
    buffer = mix_at_snr(sig, noise_power=1.0, target_snr=0.5,
                        smoothing=10, rng=g)
    # total power = noise_power * (1 + snr) for independent noise
    assert np.mean(buffer.samples ** 2) == pytest.approx(1.5, rel=0.02)
    assert len(buffer.samples) == len(sig)
    assert buffer.n_s == len(sig) - 9


def test_mix_at_snr_zero_snr_is_pure_noise():
    g = RngStream(5, 1).generator()
    sig = np.ones(10009)
    buffer = mix_at_snr(sig, noise_power=1.0, target_snr=0.0,
                        smoothing=10, rng=g)
    assert np.mean(buffer.samples) == pytest.approx(0.0, abs=0.05)
    assert np.mean(buffer.samples ** 2) == pytest.approx(1.0, rel=0.1)


def test_mix_at_snr_rejects_zero_signal():
    g = RngStream(5, 2).generator()
    with pytest.raises(ZeroSignal):
        mix_at_snr(np.zeros(109), noise_power=1.0, target_snr=0.1,
                   smoothing=10, rng=g)


def test_noise_uncertainty_support():
    assert draw_noise_uncertainty(0.0, RngStream(6, 0).generator()) == 1.0
    g = RngStream(6, 1).generator()
    draws = np.array([draw_noise_uncertainty(2.0, g) for _ in range(2000)])
    lo, hi = 10 ** -0.2, 10 ** 0.2
    assert np.all(draws >= lo - 1e-12)
    assert np.all(draws <= hi + 1e-12)
    # uniform in dB: mean of 10 log10(alpha) is 0
    assert np.mean(10 * np.log10(draws)) == pytest.approx(0.0, abs=0.1)


def test_signal_spec_validation():
    with pytest.raises(InvalidSpec):
        SignalSpec(variant="chirp")
    with pytest.raises(InvalidSpec):
        SignalSpec(variant="wireless_mic_fm", sample_rate_hz=-1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 30),
       st.integers(min_value=0, max_value=2 ** 60))
def test_stream_determinism_property(seed, stream):
    a = RngStream(seed, stream).generator().standard_normal(8)
    b = RngStream(seed, stream).generator().standard_normal(8)
    np.testing.assert_array_equal(a, b)
