#!/usr/bin/env python3
"""Deviation-probability sweeps: q against the gap, and against sensitivity.

Emits two CSVs with header ``x,s,q,sigma`` (one row per grid point and
symmetric-difference size), ready for the plotting tool's q_sweep kind.
The gap sweep fixes sensitivity 1; the sensitivity sweep fixes gap 15.
Privacy parameters are epsilon=1, delta=0.01.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from privroute.analytics import path_deviation_prob
from privroute.graph import format_float
from privroute.release import sigma_from

S_VALUES = (1, 2, 4, 8, 16)


def rows_vs_alpha(alphas, sigma):
    for s in S_VALUES:
        for a in alphas:
            yield a, s, path_deviation_prob(a, s, sigma), sigma


def rows_vs_delta_f(delta_fs, epsilon, delta, alpha):
    for s in S_VALUES:
        for df in delta_fs:
            sigma = sigma_from(epsilon, delta, df)
            yield df, s, path_deviation_prob(alpha, s, sigma), sigma


def write_csv(path: Path, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["x,s,q,sigma"]
    lines += [
        f"{format_float(x)},{s},{format_float(q)},{format_float(sig)}"
        for x, s, q, sig in rows
    ]
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path}")


def run(args: argparse.Namespace) -> int:
    epsilon, delta = 1.0, 0.01
    sigma = sigma_from(epsilon, delta, 1.0)
    out = Path(args.output_dir)
    alphas = np.linspace(0.5, 40.0, args.points)
    write_csv(out / "q_vs_alpha.csv", rows_vs_alpha(alphas, sigma))
    delta_fs = np.linspace(0.2, 8.0, args.points)
    write_csv(out / "q_vs_delta_f.csv", rows_vs_delta_f(delta_fs, epsilon, delta, 15.0))
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--output-dir", required=True)
    parser.add_argument("--points", type=int, default=60)
    sys.exit(run(parser.parse_args()))
