"""Covariance-based spectrum sensing: detectors, design formulas, and a
seeded Monte Carlo experiment harness."""

from .covariance import (
    AutocorrVector,
    CovarianceEstimate,
    MultiAntennaBuffer,
    SampleBuffer,
    build_toeplitz_covariance,
    compute_autocorrelations,
    compute_multiantenna_covariance,
)
from .detectors import (
    Decision,
    DetectorStatistics,
    cav_statistics,
    decide,
    energy_detect,
    frobenius_statistics,
    generalized_statistics,
)
from .errors import (
    AllZeroInput,
    CovsenseError,
    DegenerateDesign,
    DimensionMismatch,
    DomainError,
    InvalidDesign,
    InvalidPsi,
    InvalidSpec,
    MalformedBuffer,
    SingularFilter,
    ZeroSignal,
)
from .harness import (
    ExperimentSpec,
    SweepPoint,
    SweepResult,
    TrialOutcome,
    calibrate_threshold_mc,
    energy_threshold_factor,
    estimate_pd,
    estimate_pfa,
    resolve_threshold,
    run_sweep,
    run_trial,
    run_trials,
)
from .presets import PRESETS, PresetJob
from .prewhiten import (
    FilterSpec,
    WhiteningTransform,
    apply_whitening,
    build_filter_matrix,
    whitening_transform,
)
from .sigmodels import (
    ChannelSpec,
    RngStream,
    SignalSpec,
    apply_channel,
    draw_noise_uncertainty,
    estimate_alpha_profile,
    gen_bpsk_source,
    gen_noise,
    gen_wireless_mic,
    mix_at_snr,
)
from .theory import (
    CorrelationProfile,
    DetectionDesign,
    best_smoothing_factor,
    cav_advantage,
    cav_advantage_boundary,
    cav_pd,
    cav_pfa,
    cav_threshold,
    correlation_strength,
    expected_t1_h1,
    noise_uncertainty_bound,
    predict_ratio_h0,
    predict_ratio_h1,
    q_function,
    q_inverse,
    required_samples_cav,
    required_samples_energy,
    uncertainty_interval,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
