#!/usr/bin/env python3
"""Reproduce the false-alarm table: covariance detector vs energy detection
under 0 to 2 dB noise uncertainty.

Usage: python scripts/run_table1.py [--trials N] [--seed S] [--out FILE]
"""

import argparse
import sys

from covsense.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="table1.csv")
    args = parser.parse_args()
    return cli_main(
        [
            "simulate",
            "--preset", "table1",
            "--trials", str(args.trials),
            "--seed", str(args.seed),
            "--out", args.out,
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
