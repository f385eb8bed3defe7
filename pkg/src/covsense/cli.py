"""Command-line front end.

Subcommands: detect (file-based sensing), theory (closed-form evaluations),
calibrate (simulation-based thresholds), simulate (Monte Carlo sweeps and
figure presets with CSV output).

Exit codes: 0 signal absent, 10 signal present, 2 usage error, 3 data
error, 4 numeric/domain error.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import sampleio
from .covariance import SampleBuffer, build_toeplitz_covariance, compute_autocorrelations
from .detectors import cav_statistics, decide, frobenius_statistics
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
from .harness import ExperimentSpec, _point_spec, calibrate_threshold_mc, run_sweep
from .presets import PRESETS
from .prewhiten import FilterSpec, apply_whitening, whitening_transform
from .sigmodels import SignalSpec
from .theory import (
    CorrelationProfile,
    DetectionDesign,
    cav_advantage,
    cav_pd,
    cav_threshold,
    correlation_strength,
    required_samples_cav,
    required_samples_energy,
)

EXIT_ABSENT = 0
EXIT_PRESENT = 10
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

CSV_HEADER = "detector,signal,axis,axis_value,snr_db,L,Ns,M,trials,threshold,estimate,stderr,seed"

_SIGNAL_NAMES = {"mic": "wireless_mic_fm", "bpsk": "bpsk_iid", "none": "none"}


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _parse_db_list(text: str) -> list[float]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InvalidSpec(f"range syntax is a:b:step, got {text!r}")
        a, b, step = (float(p) for p in parts)
        if step <= 0:
            raise InvalidSpec("range step must be positive")
        out = []
        v = a
        while v <= b + 1e-9:
            out.append(round(v, 12))
            v += step
        return out
    return [float(p) for p in text.split(",") if p.strip()]


def _cmd_detect(args) -> int:
    samples = sampleio.read_samples(args.infile, binary=args.binary)
    smoothing = args.L
    n_s = len(samples) - smoothing + 1
    if n_s < 1:
        raise MalformedBuffer(
            f"file holds {len(samples)} samples; need more than L-1 = {smoothing - 1}"
        )
    buffer = SampleBuffer(samples=samples, n_s=n_s, smoothing=smoothing)
    cov = build_toeplitz_covariance(compute_autocorrelations(buffer))
    if args.whiten_filter:
        taps = sampleio.read_taps(args.whiten_filter)
        transform = whitening_transform(FilterSpec(taps=taps), smoothing)
        cov = apply_whitening(cov, transform)
    if args.detector == "frob":
        stats = frobenius_statistics(cov)
    else:
        stats = cav_statistics(cov)
    if args.threshold is not None:
        threshold = args.threshold
    else:
        design = DetectionDesign(smoothing=smoothing, n_s=n_s, pfa_target=args.pfa)
        threshold = cav_threshold(design)
    decision = decide(stats, threshold)
    print(f"T_num={_fmt(stats.t_num)}")
    print(f"T_den={_fmt(stats.t_den)}")
    print(f"ratio={_fmt(stats.ratio)}")
    print(f"threshold={_fmt(threshold)}")
    print(f"verdict={'present' if decision.present else 'absent'}")
    return EXIT_PRESENT if decision.present else EXIT_ABSENT


def _cmd_theory(args) -> int:
    design = DetectionDesign(smoothing=args.L, n_s=args.Ns, pfa_target=args.pfa)
    gamma1 = cav_threshold(design)
    print(f"gamma1={_fmt(gamma1)}")
    upsilon = None
    if args.alpha_file:
        alphas = sampleio.read_alpha_profile(args.alpha_file, args.L)
        upsilon = correlation_strength(CorrelationProfile(alphas=alphas), args.L)
        print(f"upsilon={_fmt(upsilon)}")
    snr = 10.0 ** (args.snr_db / 10.0) if args.snr_db is not None else None
    if snr is not None and upsilon is not None:
        print(f"pd_pred={_fmt(cav_pd(gamma1, snr, upsilon, args.Ns))}")
    if args.pd is not None and snr is not None:
        print(f"Ne={required_samples_energy(args.pd, args.pfa, snr)}")
        if upsilon is not None:
            print(f"Nc={required_samples_cav(args.pd, args.pfa, args.L, upsilon, snr)}")
    if args.pd is not None and upsilon is not None:
        verdict = cav_advantage(args.pd, args.pfa, args.L, upsilon)
        print(f"cav_advantage={'true' if verdict else 'false'}")
    return EXIT_ABSENT


def _cmd_calibrate(args) -> int:
    detector = {"frob": "frobenius"}.get(args.detector, args.detector)
    mc = calibrate_threshold_mc(
        detector, args.L, args.Ns, args.M, args.pfa, args.trials, args.seed
    )
    print(f"mc_threshold={_fmt(mc)}")
    if detector == "cav" and args.M == 1:
        design = DetectionDesign(smoothing=args.L, n_s=args.Ns, pfa_target=args.pfa)
        print(f"analytic_threshold={_fmt(cav_threshold(design))}")
    return EXIT_ABSENT


def _spec_from_flags(args) -> tuple[ExperimentSpec, str, list]:
    signal = SignalSpec(variant=_SIGNAL_NAMES[args.signal])
    taps = args.channel_taps
    if taps == 0 and args.M > 1:
        taps = 5
    snr_db = _parse_db_list(args.snr_db) if args.snr_db else []
    snr_lin = [10.0 ** (db / 10.0) for db in snr_db]
    spec = ExperimentSpec(
        detector={"frob": "frobenius"}.get(args.detector, args.detector),
        signal=signal,
        random_channel_taps=taps,
        doppler_fd=args.doppler,
        antennas=args.M,
        smoothing=args.L,
        n_s=args.Ns,
        snr_list=tuple(snr_lin),
        pfa_target=args.pfa,
        noise_uncertainty_db=args.noise_uncertainty_db,
        threshold_source=args.threshold_source,
        explicit_threshold=args.threshold,
        analytic_ml=args.analytic_ml,
        n_sources=args.n_sources,
        trials=args.trials,
        base_seed=args.seed,
    )
    axis = args.sweep
    if axis == "snr":
        values = snr_lin
    elif args.axis_values:
        values = [float(v) for v in args.axis_values.split(",") if v.strip()]
    else:
        raise InvalidSpec(f"sweep over {axis!r} needs --axis-values")
    if not values:
        raise InvalidSpec("sweep needs at least one axis value")
    return spec, axis, values


def _sweep_rows(label_spec, axis, values) -> list[str]:
    result = run_sweep(label_spec, axis, values)
    rows = []
    for value, point in zip(values, result.points):
        pspec = _point_spec(label_spec, axis, value)
        snr_db = point.snr_db
        if snr_db is None and pspec.snr_list and pspec.signal.variant != "none":
            snr_db = 10.0 * math.log10(pspec.snr_list[0])
        rows.append(
            ",".join(
                [
                    pspec.detector,
                    pspec.signal.variant,
                    axis,
                    _fmt(float(value)),
                    _fmt(snr_db),
                    str(pspec.smoothing),
                    str(pspec.n_s),
                    str(pspec.antennas),
                    str(point.trials),
                    _fmt(point.threshold),
                    _fmt(point.estimate),
                    _fmt(point.stderr),
                    str(pspec.base_seed),
                ]
            )
        )
    return rows


def _cmd_simulate(args) -> int:
    rows = [CSV_HEADER]
    if args.preset:
        jobs = PRESETS[args.preset](args.seed, trials=args.trials)
        for job in jobs:
            rows.extend(_sweep_rows(job.spec, job.axis, list(job.values)))
    else:
        spec, axis, values = _spec_from_flags(args)
        rows.extend(_sweep_rows(spec, axis, values))
    text = "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_ABSENT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covsense")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="run a detector over a sample file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--binary", action="store_true")
    p.add_argument("--L", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--threshold", type=float)
    group.add_argument("--pfa", type=float)
    p.add_argument("--detector", choices=("cav", "frob"), default="cav")
    p.add_argument("--whiten-filter", dest="whiten_filter")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("theory", help="evaluate the closed-form design formulas")
    p.add_argument("--pfa", type=float, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--Ns", type=int, required=True)
    p.add_argument("--pd", type=float)
    p.add_argument("--snr-db", dest="snr_db", type=float)
    p.add_argument("--alpha-file", dest="alpha_file")
    p.set_defaults(func=_cmd_theory)

    p = sub.add_parser("calibrate", help="Monte Carlo threshold calibration")
    p.add_argument("--detector", choices=("cav", "frob", "frobenius", "energy"), default="cav")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--Ns", type=int, required=True)
    p.add_argument("--pfa", type=float, required=True)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--M", type=int, default=1)
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("simulate", help="Monte Carlo experiment sweeps (CSV)")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--detector", choices=("cav", "frob", "frobenius", "energy"), default="cav")
    p.add_argument("--signal", choices=("mic", "bpsk", "none"), default="none")
    p.add_argument("--snr-db", dest="snr_db", help="a:b:step or comma list, in dB")
    p.add_argument("--L", type=int, default=10)
    p.add_argument("--Ns", type=int, default=50000)
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--pfa", type=float, default=0.1)
    p.add_argument("--noise-uncertainty-db", dest="noise_uncertainty_db", type=float, default=0.0)
    p.add_argument("--doppler", type=float, default=0.0)
    p.add_argument("--channel-taps", dest="channel_taps", type=int, default=0)
    p.add_argument("--n-sources", dest="n_sources", type=int, default=1)
    p.add_argument("--sweep", choices=("snr", "L", "n_s", "doppler", "antennas", "pfa", "uncertainty"), default="snr")
    p.add_argument("--axis-values", dest="axis_values")
    p.add_argument("--threshold-source", dest="threshold_source",
                   choices=("analytic", "monte_carlo", "explicit"), default="analytic")
    p.add_argument("--threshold", type=float)
    p.add_argument("--analytic-ml", dest="analytic_ml", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except (InvalidSpec,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MalformedBuffer, AllZeroInput, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (
        DomainError,
        InvalidDesign,
        DegenerateDesign,
        SingularFilter,
        DimensionMismatch,
        InvalidPsi,
        ZeroSignal,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except CovsenseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
