"""Experiment bundles reproducing the published figure and table designs.

Each preset expands to a list of (label, spec, axis, values) jobs; the CLI
runs them in order and concatenates the resulting CSV rows.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .harness import ExperimentSpec
from .sigmodels import SignalSpec


@dataclass(frozen=True)
class PresetJob:
    label: str
    spec: ExperimentSpec
    axis: str
    values: tuple


def _snr_lin(db_values) -> tuple:
    return tuple(10.0 ** (db / 10.0) for db in db_values)


def _mic() -> SignalSpec:
    return SignalSpec(variant="wireless_mic_fm")


def _bpsk() -> SignalSpec:
    return SignalSpec(variant="bpsk_iid")


def preset_table1(seed: int, trials: int = 1000) -> list[PresetJob]:
    """False-alarm rates: covariance detector plus energy detection with
    0 to 2 dB noise uncertainty.  The covariance threshold is calibrated by
    simulation; the energy threshold is the closed-form factor."""
    cav = ExperimentSpec(
        detector="cav", signal=SignalSpec(variant="none"), smoothing=10, n_s=50000,
        pfa_target=0.1, threshold_source="monte_carlo", trials=trials, base_seed=seed,
    )
    energy = replace(cav, detector="energy", threshold_source="analytic")
    return [
        PresetJob("table1-cav", cav, "uncertainty", (0.0,)),
        PresetJob("table1-energy", energy, "uncertainty", (0.0, 0.5, 1.0, 1.5, 2.0)),
    ]


def preset_fig1(seed: int, trials: int = 1000) -> list[PresetJob]:
    """Detection probability vs SNR for the FM microphone signal."""
    snrs = _snr_lin(range(-24, -8, 2))
    cav = ExperimentSpec(
        detector="cav", signal=_mic(), smoothing=10, n_s=50000, pfa_target=0.1,
        threshold_source="monte_carlo", trials=trials, base_seed=seed,
    )
    eg0 = replace(cav, detector="energy", threshold_source="analytic")
    eg1 = replace(eg0, noise_uncertainty_db=1.0)
    return [
        PresetJob("fig1-cav", cav, "snr", snrs),
        PresetJob("fig1-energy-0db", eg0, "snr", snrs),
        PresetJob("fig1-energy-1db", eg1, "snr", snrs),
    ]


def preset_fig2(seed: int, trials: int = 1000) -> list[PresetJob]:
    """ROC at SNR = -20 dB."""
    pfas = (0.02, 0.05, 0.1, 0.15, 0.2)
    snr = _snr_lin([-20.0])
    cav = ExperimentSpec(
        detector="cav", signal=_mic(), smoothing=10, n_s=50000, snr_list=snr,
        threshold_source="monte_carlo", trials=trials, base_seed=seed,
    )
    eg = replace(cav, detector="energy", threshold_source="analytic")
    return [
        PresetJob("fig2-cav", cav, "pfa", pfas),
        PresetJob("fig2-energy", eg, "pfa", pfas),
    ]


def preset_fig3(seed: int, trials: int = 1000) -> list[PresetJob]:
    """Detection probability vs sample count at SNR = -20 dB."""
    sizes = (12500, 25000, 50000, 100000)
    snr = _snr_lin([-20.0])
    cav = ExperimentSpec(
        detector="cav", signal=_mic(), smoothing=10, pfa_target=0.01, snr_list=snr,
        threshold_source="monte_carlo", trials=trials, base_seed=seed,
    )
    eg = replace(cav, detector="energy", threshold_source="analytic")
    return [
        PresetJob("fig3-cav", cav, "n_s", sizes),
        PresetJob("fig3-energy", eg, "n_s", sizes),
    ]


def preset_fig4(seed: int, trials: int = 1000) -> list[PresetJob]:
    """Smoothing-factor sensitivity at SNR = -20 dB, Pfa = 0.01."""
    spec = ExperimentSpec(
        detector="cav", signal=_mic(), n_s=50000, pfa_target=0.01,
        snr_list=_snr_lin([-20.0]), threshold_source="monte_carlo",
        trials=trials, base_seed=seed,
    )
    return [PresetJob("fig4-cav", spec, "L", tuple(range(4, 15)))]


def _antenna_spec(seed: int, trials: int, antennas: int, n_sources: int = 1) -> ExperimentSpec:
    return ExperimentSpec(
        detector="cav", signal=_bpsk(), random_channel_taps=5, antennas=antennas,
        smoothing=8, n_s=25000, pfa_target=0.1, threshold_source="monte_carlo",
        calibration_trials=1000, n_sources=n_sources, trials=trials, base_seed=seed,
    )


def preset_fig6(seed: int, trials: int = 1000) -> list[PresetJob]:
    """Multi-antenna detection, one iid source through 5-tap channels."""
    snrs = _snr_lin(range(-22, -6, 2))
    return [
        PresetJob(f"fig6-M{m}", _antenna_spec(seed, trials, m), "snr", snrs)
        for m in (1, 2, 4)
    ]


def preset_fig7(seed: int, trials: int = 1000) -> list[PresetJob]:
    """Time-variant channels: detection vs normalized Doppler, M = 2."""
    spec = replace(_antenna_spec(seed, trials, 2), snr_list=_snr_lin([-11.0]))
    return [PresetJob("fig7-doppler", spec, "doppler", (0.0, 1e-4, 1e-3, 5e-3, 1e-2))]


def preset_fig8(seed: int, trials: int = 1000) -> list[PresetJob]:
    """Multi-antenna detection with three independent sources."""
    snrs = _snr_lin(range(-22, -6, 2))
    return [
        PresetJob(f"fig8-M{m}", _antenna_spec(seed, trials, m, n_sources=3), "snr", snrs)
        for m in (1, 2, 4)
    ]


PRESETS = {
    "table1": preset_table1,
    "fig1": preset_fig1,
    "fig2": preset_fig2,
    "fig3": preset_fig3,
    "fig4": preset_fig4,
    "fig6": preset_fig6,
    "fig7": preset_fig7,
    "fig8": preset_fig8,
}
