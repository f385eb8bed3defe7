"""Acceptance gate: eleven end-to-end criteria, one pass/fail line each.

Heavy Monte Carlo runs are shared through module-scoped fixtures.  Every
criterion prints `criterion N: PASS|FAIL (details)` before asserting, so a
plain `pytest -v tests/test_acceptance.py` gives the full scorecard.
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from covsense.covariance import (
    MultiAntennaBuffer,
    SampleBuffer,
    build_toeplitz_covariance,
    compute_autocorrelations,
    compute_multiantenna_covariance,
)
from covsense.detectors import cav_statistics
from covsense.harness import (
    ExperimentSpec,
    calibrate_threshold_mc,
    energy_threshold_factor,
    estimate_pd,
    estimate_pfa,
    run_trial,
    run_trials,
)
from covsense.presets import preset_table1
from covsense.prewhiten import FilterSpec, build_filter_matrix, whitening_transform
from covsense.sigmodels import RngStream, SignalSpec, gen_wireless_mic, estimate_alpha_profile
from covsense.theory import (
    DetectionDesign,
    cav_advantage_boundary,
    cav_pd,
    cav_threshold,
    correlation_strength,
    predict_ratio_h0,
    required_samples_cav,
    required_samples_energy,
)

SEED = 20260826
TRIALS = 1000
CAL_TRIALS = 2000


def _check(number: int, ok: bool, detail: str) -> None:
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {number} failed: {detail}"


def _combined_se(a, b) -> float:
    return math.sqrt(a.stderr ** 2 + b.stderr ** 2)


def _mic_spec(**kw) -> ExperimentSpec:
    base = dict(
        detector="cav", signal=SignalSpec(variant="wireless_mic_fm"),
        smoothing=10, n_s=50000, pfa_target=0.1, threshold_source="analytic",
        trials=TRIALS, calibration_trials=CAL_TRIALS, base_seed=SEED,
    )
    base.update(kw)
    return ExperimentSpec(**base)


@pytest.fixture(scope="module")
def mic_pd_snr():
    """Microphone-signal detection rates at the analytic threshold,
    SNR in {-18, -20, -22} dB (shared by criteria 4 and 5)."""
    spec = _mic_spec()
    out = {}
    for idx, snr_db in enumerate((-18.0, -20.0, -22.0)):
        out[snr_db] = estimate_pd(spec, 10.0 ** (snr_db / 10.0), point_index=idx)
    return out


@pytest.fixture(scope="module")
def multiantenna_points():
    """BPSK through random 5-tap channels, L=8, N_s=25000, SNR=-18 dB,
    Monte Carlo thresholds, M in {1, 2, 4} (criterion 7)."""
    snr = 10.0 ** (-1.8)
    out = {}
    for idx, m in enumerate((1, 2, 4)):
        spec = ExperimentSpec(
            detector="cav", signal=SignalSpec(variant="bpsk_iid"),
            random_channel_taps=5, antennas=m, smoothing=8, n_s=25000,
            pfa_target=0.1, threshold_source="monte_carlo",
            trials=TRIALS, calibration_trials=CAL_TRIALS, base_seed=SEED,
        )
        thr = calibrate_threshold_mc("cav", 8, 25000, m, 0.1, CAL_TRIALS, SEED,
                                     point_index=idx)
        pd = estimate_pd(spec, snr, point_index=idx, threshold=thr)
        pfa = estimate_pfa(
            replace(spec, signal=SignalSpec(variant="none")),
            point_index=idx, threshold=thr,
        )
        out[m] = (pd, pfa)
    return out


def test_criterion_01_false_alarm_table():
    jobs = {job.label: job for job in preset_table1(SEED, trials=TRIALS)}
    cav_spec = jobs["table1-cav"].spec
    cav = estimate_pfa(cav_spec)
    energy_spec = jobs["table1-energy"].spec
    energies = {}
    for idx, b_db in enumerate(jobs["table1-energy"].values):
        energies[b_db] = estimate_pfa(
            replace(energy_spec, noise_uncertainty_db=b_db), point_index=idx
        ).estimate
    ok = abs(cav.estimate - 0.099) <= 0.03
    ok = ok and abs(energies[0.0] - 0.102) <= 0.03
    ok = ok and all(energies[b] >= 0.30 for b in (0.5, 1.0, 1.5, 2.0))
    detail = (f"cav={cav.estimate:.3f} vs 0.099+-0.03; "
              f"energy={ {b: round(p, 3) for b, p in energies.items()} }")
    _check(1, ok, detail)


def test_criterion_02_threshold_formula_validity():
    points = [(0.1, 10, 50000), (0.01, 10, 50000), (0.1, 8, 25000), (0.01, 8, 25000)]
    pfa_errors = {}
    for idx, (pfa, ell, n_s) in enumerate(points):
        gamma = cav_threshold(DetectionDesign(smoothing=ell, n_s=n_s, pfa_target=pfa))
        spec = ExperimentSpec(
            detector="cav", signal=SignalSpec(variant="none"), smoothing=ell,
            n_s=n_s, pfa_target=pfa, trials=TRIALS, base_seed=SEED,
        )
        est = estimate_pfa(spec, point_index=idx, threshold=gamma).estimate
        pfa_errors[(pfa, ell, n_s)] = est - pfa
    clause1 = all(abs(e) <= 0.03 for e in pfa_errors.values())

    mc_diffs = {}
    for idx, (ell, n_s) in enumerate(((10, 50000), (8, 25000))):
        gamma = cav_threshold(DetectionDesign(smoothing=ell, n_s=n_s, pfa_target=0.1))
        mc = calibrate_threshold_mc("cav", ell, n_s, 1, 0.1, CAL_TRIALS, SEED,
                                    point_index=10 + idx)
        mc_diffs[(ell, n_s)] = mc - gamma
    clause2 = all(abs(d) <= 0.005 for d in mc_diffs.values())

    detail = (f"empirical-pfa errors {{point: err}}="
              f"{ {k: round(v, 4) for k, v in pfa_errors.items()} } (|err|<=0.03); "
              f"mc-vs-analytic diffs={ {k: round(v, 5) for k, v in mc_diffs.items()} }"
              f" (|diff|<=0.005)")
    _check(2, clause1 and clause2, detail)


def test_criterion_03_h0_concentration():
    spec = ExperimentSpec(
        detector="cav", signal=SignalSpec(variant="none"), smoothing=10,
        n_s=50000, trials=TRIALS, base_seed=SEED,
    )
    outcomes = run_trials(spec, 0.0, math.inf)
    mean_ratio = float(np.mean([o.statistic for o in outcomes]))
    predicted = predict_ratio_h0(10, 50000)
    ok = abs(mean_ratio - 1.032114) <= 0.005
    _check(3, ok, f"mean H0 ratio={mean_ratio:.6f} vs {predicted:.6f} +- 0.005")


def test_criterion_04_detector_ordering_at_minus20(mic_pd_snr):
    snr = 0.01
    cav = mic_pd_snr[-20.0]
    e0_spec = _mic_spec(detector="energy")
    e0 = estimate_pd(e0_spec, snr, point_index=20)
    e1 = estimate_pd(replace(e0_spec, noise_uncertainty_db=1.0), snr, point_index=21)
    gap0 = cav.estimate - e0.estimate
    ok = gap0 >= 2.0 * _combined_se(cav, e0)
    ok = ok and (e1.estimate <= cav.estimate - 0.2)
    detail = (f"cav={cav.estimate:.3f}, energy(B=0)={e0.estimate:.3f} "
              f"(gap {gap0:.3f} >= 2se {2 * _combined_se(cav, e0):.3f}), "
              f"energy(B=1dB)={e1.estimate:.3f} <= cav-0.2={cav.estimate - 0.2:.3f}")
    _check(4, ok, detail)


def test_criterion_05_theory_vs_simulation_pd(mic_pd_snr):
    sig = gen_wireless_mic(2 ** 20, SignalSpec(variant="wireless_mic_fm"),
                           RngStream(SEED, 999).generator())
    upsilon = correlation_strength(estimate_alpha_profile(sig, 10), 10)
    gamma = cav_threshold(DetectionDesign(smoothing=10, n_s=50000, pfa_target=0.1))
    diffs = {}
    for snr_db, point in mic_pd_snr.items():
        snr = 10.0 ** (snr_db / 10.0)
        predicted = cav_pd(gamma, snr, upsilon, 50000)
        diffs[snr_db] = predicted - point.estimate
    ok = all(abs(d) <= 0.10 for d in diffs.values())
    _check(5, ok, f"upsilon={upsilon:.3f}; predicted-minus-empirical="
                  f"{ {k: round(v, 3) for k, v in diffs.items()} } (|diff|<=0.10)")


def test_criterion_06_smoothing_insensitivity():
    snr = 0.01
    rates = {}
    for idx, ell in enumerate((8, 10, 12, 14)):
        spec = _mic_spec(smoothing=ell, pfa_target=0.01)
        rates[ell] = estimate_pd(spec, snr, point_index=30 + idx).estimate
    spread = max(rates.values()) - min(rates.values())
    _check(6, spread < 0.15,
           f"Pd by L={ {k: round(v, 3) for k, v in rates.items()} }, "
           f"spread={spread:.3f} < 0.15")


def test_criterion_07_multiantenna_ordering(mic_pd_snr, multiantenna_points):
    pts = multiantenna_points
    pd1, pfa1 = pts[1]
    pd2, _ = pts[2]
    pd4, _ = pts[4]
    ok = pd4.estimate - pd2.estimate >= 2.0 * _combined_se(pd4, pd2)
    ok = ok and pd2.estimate - pd1.estimate >= 2.0 * _combined_se(pd2, pd1)
    ok = ok and pd1.estimate > pfa1.estimate + 2.0 * _combined_se(pd1, pfa1)
    detail = (f"Pd(M=4)={pd4.estimate:.3f} > Pd(M=2)={pd2.estimate:.3f} > "
              f"Pd(M=1)={pd1.estimate:.3f} > Pfa(M=1)={pfa1.estimate:.3f}, "
              f"each by 2 combined se")
    _check(7, ok, detail)


def test_criterion_08_doppler_trend():
    snr = 10.0 ** (-1.1)
    thr = calibrate_threshold_mc("cav", 8, 25000, 2, 0.1, CAL_TRIALS, SEED,
                                 point_index=40)
    rates = []
    for idx, fd in enumerate((0.0, 1e-3, 5e-3, 1e-2)):
        spec = ExperimentSpec(
            detector="cav", signal=SignalSpec(variant="bpsk_iid"),
            random_channel_taps=5, doppler_fd=fd, antennas=2, smoothing=8,
            n_s=25000, pfa_target=0.1, threshold_source="explicit",
            explicit_threshold=thr, trials=TRIALS, base_seed=SEED,
        )
        rates.append(estimate_pd(spec, snr, point_index=41 + idx))
    ok = all(
        rates[i + 1].estimate
        <= rates[i].estimate + 2.0 * _combined_se(rates[i], rates[i + 1])
        for i in range(len(rates) - 1)
    )
    _check(8, ok, "Pd over fd={0,1e-3,5e-3,1e-2}: "
           + str([round(r.estimate, 3) for r in rates])
           + " non-increasing within 2 combined se")


def test_criterion_09_prewhitening():
    gamma = cav_threshold(DetectionDesign(smoothing=10, n_s=50000, pfa_target=0.1))
    base = ExperimentSpec(
        detector="cav", signal=SignalSpec(variant="none"), smoothing=10,
        n_s=50000, pfa_target=0.1, noise_filter=(1.0, 1.0),
        trials=TRIALS, base_seed=SEED,
    )
    raw = estimate_pfa(base, point_index=50, threshold=gamma).estimate
    white = estimate_pfa(replace(base, whiten=True), point_index=51,
                         threshold=gamma).estimate
    ok = raw > 0.2 and abs(white - 0.1) <= 0.03
    _check(9, ok, f"unwhitened Pfa={raw:.3f} (> 0.2); "
                  f"whitened Pfa={white:.3f} (target 0.1 +- 0.03)")


def test_criterion_10_analytic_spot_checks():
    gamma = cav_threshold(DetectionDesign(smoothing=10, n_s=50000, pfa_target=0.1))
    n_c = required_samples_cav(0.9, 0.1, 10, 2.0, 0.01)
    n_e = required_samples_energy(0.9, 0.1, 0.01)
    boundary = cav_advantage_boundary(0.9, 0.1, 10)
    ok = (abs(gamma - 1.04055) <= 1e-4 and abs(n_c - 291912) <= 10
          and abs(n_e - 131390) <= 10 and abs(boundary - 2.981) <= 0.01)
    _check(10, ok, f"gamma1={gamma:.6f}, Nc={n_c}, Ne={n_e}, "
                   f"boundary={boundary:.4f}")


def test_criterion_11_property_suite():
    rng = np.random.default_rng(7)
    x = rng.standard_normal(512)
    buf = SampleBuffer(samples=x, n_s=512 - 9, smoothing=10)
    cov = build_toeplitz_covariance(compute_autocorrelations(buf))
    ratio = cav_statistics(cov).ratio

    scaled = SampleBuffer(samples=3.7 * x, n_s=512 - 9, smoothing=10)
    cov_s = build_toeplitz_covariance(compute_autocorrelations(scaled))
    scale_ok = math.isclose(cav_statistics(cov_s).ratio, ratio, rel_tol=1e-9)

    sym_ok = np.array_equal(cov.entries, cov.entries.T)
    toeplitz_ok = all(
        np.all(np.diagonal(cov.entries, k) == np.diagonal(cov.entries, k)[0])
        for k in range(10)
    )

    lam = cov.entries[0]
    weighted = abs(lam[0]) + 0.2 * sum((10 - l) * abs(lam[l]) for l in range(1, 10))
    form_ok = math.isclose(np.abs(cov.entries).sum() / 10.0, weighted, rel_tol=1e-12)

    f = FilterSpec(taps=np.array([1.0, 1.0]))
    tr = whitening_transform(f, 10)
    mat = build_filter_matrix(f, 10)
    sqrt_ok = np.allclose(tr.q_matrix @ tr.q_matrix, mat @ mat.T, atol=1e-9)

    stacked = compute_multiantenna_covariance(MultiAntennaBuffer(channels=(buf,)))
    brute_ok = np.allclose(stacked.entries, cov.entries, rtol=1e-12)

    spec = ExperimentSpec(detector="cav", signal=SignalSpec(variant="none"),
                          smoothing=6, n_s=2000, trials=16, base_seed=5)
    seq = [o.statistic for o in run_trials(spec, 0.0, math.inf)]
    rev = [run_trial(spec, 0.0, math.inf, t).statistic
           for t in reversed(range(16))][::-1]
    repro_ok = seq == rev

    ok = all((scale_ok, sym_ok, toeplitz_ok, form_ok, sqrt_ok, brute_ok, repro_ok))
    _check(11, ok, f"scale={scale_ok}, symmetry={sym_ok}, toeplitz={toeplitz_ok}, "
                   f"form-equivalence={form_ok}, sqrt={sqrt_ok}, "
                   f"brute-force={brute_ok}, reproducibility={repro_ok}")
