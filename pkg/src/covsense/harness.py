"""Seeded Monte Carlo engine.

Trial t of sweep point p always draws from the counter-based stream
(base_seed, purpose | p | t), so results are reproducible and independent
of execution order or parallelism.  Aggregation is exact integer counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .covariance import (
    MultiAntennaBuffer,
    SampleBuffer,
    build_toeplitz_covariance,
    compute_autocorrelations,
    compute_multiantenna_covariance,
)
from .detectors import cav_statistics, frobenius_statistics
from .errors import InvalidSpec, ZeroSignal
from .prewhiten import FilterSpec, apply_whitening, whitening_transform
from .sigmodels import (
    ChannelSpec,
    RngStream,
    SignalSpec,
    apply_channel,
    draw_noise_uncertainty,
    gen_bpsk_source,
    gen_noise,
    gen_wireless_mic,
)
from .theory import DetectionDesign, cav_threshold, q_inverse

_PURPOSE_MEASURE = 0
_PURPOSE_CALIBRATE = 1

RANDOM_TAP_POWER_NORMALIZED = True  # equal-power Gaussian taps, unit total power


@dataclass(frozen=True)
class ExperimentSpec:
    detector: str = "cav"  # cav | frobenius | energy
    signal: SignalSpec = field(default_factory=SignalSpec)
    channel: ChannelSpec | None = None
    random_channel_taps: int = 0  # redraw this many Gaussian taps per trial
    doppler_fd: float = 0.0
    antennas: int = 1
    smoothing: int = 10
    n_s: int = 50000
    snr_list: tuple = ()
    pfa_target: float = 0.1
    noise_power: float = 1.0
    noise_uncertainty_db: float = 0.0
    threshold_source: str = "analytic"  # analytic | monte_carlo | explicit
    explicit_threshold: float | None = None
    analytic_ml: bool = False  # allow the closed form with L -> M*L
    n_sources: int = 1
    noise_filter: tuple | None = None  # taps coloring the noise (prewhitening tests)
    whiten: bool = False
    trials: int = 1000
    calibration_trials: int = 2000
    base_seed: int = 0

    def __post_init__(self):
        if self.detector not in ("cav", "frobenius", "energy"):
            raise InvalidSpec(f"unknown detector {self.detector!r}")
        if self.trials < 1 or self.calibration_trials < 1:
            raise InvalidSpec("trial counts must be >= 1")
        if self.antennas < 1:
            raise InvalidSpec("antennas must be >= 1")
        if any(s < 0 for s in self.snr_list):
            raise InvalidSpec("snr values must be >= 0")
        if self.detector == "energy" and self.antennas > 1:
            raise InvalidSpec("energy detection is single-antenna")
        if self.antennas > 1 and self.channel is None and self.random_channel_taps == 0:
            raise InvalidSpec("multi-antenna experiments need a channel model")
        if self.threshold_source not in ("analytic", "monte_carlo", "explicit"):
            raise InvalidSpec(f"unknown threshold source {self.threshold_source!r}")
        if self.threshold_source == "explicit" and self.explicit_threshold is None:
            raise InvalidSpec("explicit threshold source needs a threshold value")
        if self.n_sources < 1:
            raise InvalidSpec("n_sources must be >= 1")
        if self.noise_uncertainty_db < 0:
            raise InvalidSpec("noise_uncertainty_db must be >= 0")


@dataclass(frozen=True)
class TrialOutcome:
    trial_index: int
    hypothesis: str  # H0 | H1
    statistic: float
    threshold: float
    detected: bool
    seed: int


@dataclass(frozen=True)
class SweepPoint:
    axis_value: float
    estimate: float
    stderr: float
    trials: int
    threshold: float
    snr_db: float | None = None


@dataclass(frozen=True)
class SweepResult:
    axis: str
    points: tuple


def _stream_id(purpose: int, point_index: int, trial_index: int) -> int:
    return (purpose << 56) | (point_index << 40) | trial_index


def energy_threshold_factor(pfa_target: float, n_s: int) -> float:
    """Gaussian large-sample factor on the normalized average-power statistic."""
    return 1.0 + q_inverse(pfa_target) * math.sqrt(2.0 / n_s)


def _trial_channel(spec: ExperimentSpec, g: np.random.Generator) -> ChannelSpec | None:
    if spec.random_channel_taps > 0:
        taps = g.standard_normal((spec.antennas, spec.random_channel_taps))
        taps /= math.sqrt(spec.random_channel_taps)
        return ChannelSpec(taps_per_antenna=tuple(taps), doppler_fd=spec.doppler_fd)
    if spec.channel is not None:
        if spec.doppler_fd != spec.channel.doppler_fd and spec.doppler_fd != 0.0:
            return ChannelSpec(
                taps_per_antenna=spec.channel.taps_per_antenna,
                doppler_fd=spec.doppler_fd,
            )
        return spec.channel
    return None


def _signal_realization(
    spec: ExperimentSpec, g: np.random.Generator, n_total: int
) -> list[np.ndarray]:
    """Noiseless per-antenna signal components, unscaled."""
    sigs = [np.zeros(n_total) for _ in range(spec.antennas)]
    for _ in range(spec.n_sources):
        channel = _trial_channel(spec, g)
        order = channel.max_order if channel is not None else 0
        src_len = n_total + order
        if spec.signal.variant == "wireless_mic_fm":
            src = gen_wireless_mic(src_len, spec.signal, g)
        elif spec.signal.variant == "bpsk_iid":
            src = gen_bpsk_source(src_len, g)
        else:
            raise InvalidSpec("signal variant 'none' has no H1 realization")
        if channel is None:
            sigs[0] = sigs[0] + src
        else:
            for i in range(spec.antennas):
                sigs[i] = sigs[i] + apply_channel(src, channel, i)
    return sigs


def _colored_noise(spec: ExperimentSpec, g: np.random.Generator, n_total: int) -> np.ndarray:
    taps = np.asarray(spec.noise_filter, dtype=np.float64)
    raw = gen_noise(n_total + len(taps) - 1, spec.noise_power, g)
    filt_channel = ChannelSpec(taps_per_antenna=(taps,))
    return apply_channel(raw, filt_channel, 0)


def _ratio_statistic(spec: ExperimentSpec, buffers: list[SampleBuffer]) -> float:
    if spec.antennas == 1:
        cov = build_toeplitz_covariance(compute_autocorrelations(buffers[0]))
    else:
        cov = compute_multiantenna_covariance(MultiAntennaBuffer(channels=tuple(buffers)))
    if spec.whiten:
        if spec.noise_filter is None:
            raise InvalidSpec("whitening requires a noise filter specification")
        transform = whitening_transform(
            FilterSpec(taps=np.asarray(spec.noise_filter, dtype=np.float64)),
            spec.smoothing * spec.antennas,
        )
        cov = apply_whitening(cov, transform)
    stats = cav_statistics(cov) if spec.detector == "cav" else frobenius_statistics(cov)
    return stats.ratio


def run_trial(
    spec: ExperimentSpec,
    snr: float,
    threshold: float,
    trial_index: int,
    point_index: int = 0,
    purpose: int = _PURPOSE_MEASURE,
) -> TrialOutcome:
    """One independent sensing event.

    `threshold` is the ratio threshold for covariance detectors and the
    threshold factor on the assumed noise power for energy detection.
    """
    sid = _stream_id(purpose, point_index, trial_index)
    g = RngStream(spec.base_seed, sid).generator()
    n_total = spec.n_s + spec.smoothing - 1

    alpha = 1.0
    if spec.detector == "energy" and spec.noise_uncertainty_db > 0:
        alpha = draw_noise_uncertainty(spec.noise_uncertainty_db, g)

    def fresh_noise() -> np.ndarray:
        if spec.noise_filter is not None:
            return _colored_noise(spec, g, n_total)
        return gen_noise(n_total, spec.noise_power, g)

    if snr == 0.0:
        hypothesis = "H0"
        samples = [fresh_noise() for _ in range(spec.antennas)]
    else:
        hypothesis = "H1"
        sigs = _signal_realization(spec, g, n_total)
        power = float(np.mean([np.mean(s ** 2) for s in sigs]))
        if power == 0.0:
            raise ZeroSignal("signal realization has zero power")
        scale = math.sqrt(snr * spec.noise_power / power)
        samples = [scale * s + fresh_noise() for s in sigs]

    buffers = [
        SampleBuffer(samples=x, n_s=spec.n_s, smoothing=spec.smoothing) for x in samples
    ]

    if spec.detector == "energy":
        win = buffers[0].window()
        statistic = float(win @ win) / spec.n_s
        decision_threshold = threshold * alpha * spec.noise_power
    else:
        statistic = _ratio_statistic(spec, buffers)
        decision_threshold = threshold

    return TrialOutcome(
        trial_index=trial_index,
        hypothesis=hypothesis,
        statistic=statistic,
        threshold=decision_threshold,
        detected=statistic > decision_threshold,
        seed=sid,
    )


def run_trials(
    spec: ExperimentSpec,
    snr: float,
    threshold: float,
    point_index: int = 0,
    purpose: int = _PURPOSE_MEASURE,
) -> list[TrialOutcome]:
    return [
        run_trial(spec, snr, threshold, t, point_index, purpose)
        for t in range(spec.trials)
    ]


def calibrate_threshold_mc(
    detector: str,
    smoothing: int,
    n_s: int,
    antennas: int,
    pfa_target: float,
    trials: int,
    base_seed: int,
    noise_power: float = 1.0,
    point_index: int = 0,
    noise_filter: tuple | None = None,
    whiten: bool = False,
) -> float:
    """Empirical (1 - pfa_target) quantile of the noise-only statistic."""
    spec = ExperimentSpec(
        detector=detector,
        signal=SignalSpec(variant="none"),
        antennas=antennas,
        smoothing=smoothing,
        n_s=n_s,
        pfa_target=pfa_target,
        noise_power=noise_power,
        threshold_source="explicit",
        explicit_threshold=math.inf,
        noise_filter=noise_filter,
        whiten=whiten,
        trials=trials,
        base_seed=base_seed,
        channel=None if antennas == 1 else ChannelSpec(
            taps_per_antenna=tuple(np.ones(1) for _ in range(antennas))
        ),
    )
    outcomes = run_trials(spec, 0.0, math.inf, point_index, _PURPOSE_CALIBRATE)
    stats = np.array([o.statistic for o in outcomes])
    if detector == "energy":
        stats = stats / noise_power
    return float(np.quantile(stats, 1.0 - pfa_target))


def resolve_threshold(spec: ExperimentSpec, point_index: int = 0) -> float:
    """Ratio threshold (covariance detectors) or factor (energy detection)."""
    if spec.detector == "energy":
        if spec.threshold_source == "explicit":
            return float(spec.explicit_threshold)
        if spec.threshold_source == "monte_carlo":
            return calibrate_threshold_mc(
                "energy", spec.smoothing, spec.n_s, 1, spec.pfa_target,
                spec.calibration_trials, spec.base_seed, spec.noise_power, point_index,
            )
        return energy_threshold_factor(spec.pfa_target, spec.n_s)
    if spec.threshold_source == "explicit":
        return float(spec.explicit_threshold)
    if spec.threshold_source == "monte_carlo":
        return calibrate_threshold_mc(
            spec.detector, spec.smoothing, spec.n_s, spec.antennas, spec.pfa_target,
            spec.calibration_trials, spec.base_seed, spec.noise_power, point_index,
            spec.noise_filter, spec.whiten,
        )
    if spec.detector != "cav":
        raise InvalidSpec(
            "no closed-form threshold for this detector; use monte_carlo or explicit"
        )
    effective_l = spec.smoothing
    if spec.antennas > 1:
        if not spec.analytic_ml:
            raise InvalidSpec(
                "multi-antenna analytic threshold is unvalidated; use monte_carlo "
                "or enable analytic_ml explicitly"
            )
        effective_l = spec.smoothing * spec.antennas
    design = DetectionDesign(
        smoothing=effective_l, n_s=spec.n_s, pfa_target=spec.pfa_target
    )
    return cav_threshold(design)


def _aggregate(
    outcomes: list[TrialOutcome], axis_value: float, threshold: float,
    snr_db: float | None,
) -> SweepPoint:
    hits = sum(o.detected for o in outcomes)
    n = len(outcomes)
    p = hits / n
    return SweepPoint(
        axis_value=axis_value,
        estimate=p,
        stderr=math.sqrt(p * (1.0 - p) / n),
        trials=n,
        threshold=threshold,
        snr_db=snr_db,
    )


def estimate_pfa(
    spec: ExperimentSpec, point_index: int = 0, threshold: float | None = None
) -> SweepPoint:
    """Empirical false-alarm rate over noise-only trials."""
    if threshold is None:
        threshold = resolve_threshold(spec, point_index)
    outcomes = run_trials(spec, 0.0, threshold, point_index)
    return _aggregate(outcomes, spec.noise_uncertainty_db, threshold, None)


def estimate_pd(
    spec: ExperimentSpec, snr: float, point_index: int = 0,
    threshold: float | None = None,
) -> SweepPoint:
    """Empirical detection rate over signal-plus-noise trials."""
    if spec.signal.variant == "none" and snr > 0:
        raise InvalidSpec("cannot estimate Pd without a signal variant")
    if threshold is None:
        threshold = resolve_threshold(spec, point_index)
    outcomes = run_trials(spec, snr, threshold, point_index)
    snr_db = 10.0 * math.log10(snr) if snr > 0 else None
    return _aggregate(outcomes, snr, threshold, snr_db)


_AXES = ("snr", "L", "n_s", "doppler", "antennas", "pfa", "uncertainty")


def _point_spec(spec: ExperimentSpec, axis: str, value) -> ExperimentSpec:
    if axis == "snr":
        return replace(spec, snr_list=(float(value),))
    if axis == "L":
        return replace(spec, smoothing=int(value))
    if axis == "n_s":
        return replace(spec, n_s=int(value))
    if axis == "doppler":
        return replace(spec, doppler_fd=float(value))
    if axis == "antennas":
        return replace(spec, antennas=int(value))
    if axis == "pfa":
        return replace(spec, pfa_target=float(value))
    if axis == "uncertainty":
        return replace(spec, noise_uncertainty_db=float(value))
    raise InvalidSpec(f"unknown sweep axis {axis!r}; choose from {_AXES}")


def run_sweep(spec: ExperimentSpec, axis: str, values) -> SweepResult:
    """One estimate per axis value; thresholds re-derived at every point."""
    values = list(values)
    if not values:
        raise InvalidSpec("sweep needs at least one axis value")
    points = []
    for idx, value in enumerate(values):
        pspec = _point_spec(spec, axis, value)
        threshold = resolve_threshold(pspec, idx)
        if pspec.signal.variant == "none":
            point = estimate_pfa(pspec, idx, threshold)
        else:
            if not pspec.snr_list:
                raise InvalidSpec("sweep over a non-snr axis needs an snr value")
            point = estimate_pd(pspec, pspec.snr_list[0], idx, threshold)
        points.append(replace(point, axis_value=float(value)))
    return SweepResult(axis=axis, points=tuple(points))
