"""Sample, tap, and correlation-profile file formats.

Text samples: one real number per line in decimal notation.
Binary samples: consecutive 64-bit little-endian IEEE-754 values.
Filter taps: text, one tap per line.
Alpha profiles: text lines "l value".
"""

from __future__ import annotations

import numpy as np

from .errors import MalformedBuffer


def read_samples(path, binary: bool = False) -> np.ndarray:
    if binary:
        data = np.fromfile(path, dtype="<f8")
    else:
        try:
            data = np.loadtxt(path, dtype=np.float64, ndmin=1)
        except ValueError as exc:
            raise MalformedBuffer(f"cannot parse sample file {path}: {exc}") from exc
    if data.ndim != 1:
        raise MalformedBuffer(f"sample file {path} must be a flat list of reals")
    return data


def write_samples(path, samples, binary: bool = False) -> None:
    samples = np.asarray(samples, dtype=np.float64)
    if binary:
        samples.astype("<f8").tofile(path)
    else:
        with open(path, "w") as fh:
            for value in samples:
                fh.write(f"{value!r}\n")


def read_taps(path) -> np.ndarray:
    taps = np.loadtxt(path, dtype=np.float64, ndmin=1)
    if taps.ndim != 1:
        raise MalformedBuffer(f"tap file {path} must hold one tap per line")
    return taps


def read_alpha_profile(path, smoothing: int) -> np.ndarray:
    """Lags 1 ... L-1 from "l value" lines; missing lags default to zero."""
    rows = np.loadtxt(path, dtype=np.float64, ndmin=2)
    if rows.shape[1] != 2:
        raise MalformedBuffer(f"alpha file {path} must hold 'lag value' pairs")
    alphas = np.zeros(smoothing - 1)
    for lag, value in rows:
        lag = int(lag)
        if 1 <= lag <= smoothing - 1:
            alphas[lag - 1] = value
    return alphas
