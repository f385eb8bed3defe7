#!/usr/bin/env python3
"""Run one of the figure presets (fig1-fig4, fig6-fig8) and write its CSV.

Usage: python scripts/run_figure.py fig1 [--trials N] [--seed S] [--out FILE]
"""

import argparse
import sys

from covsense.cli import main as cli_main
from covsense.presets import PRESETS


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("preset", choices=sorted(k for k in PRESETS if k != "table1"))
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out")
    args = parser.parse_args()
    out = args.out or f"{args.preset}.csv"
    return cli_main(
        [
            "simulate",
            "--preset", args.preset,
            "--trials", str(args.trials),
            "--seed", str(args.seed),
            "--out", out,
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
