#!/usr/bin/env python3
"""Wheel robustness sweep: spoke/rim weight ratios x noise levels, N=101.

Noise percentages reference the circumference (Uniform[0,1]) weight scale,
not the overall mean: scaling sigma with the spoke-inflated mean would grow
the noise with r and invert the robustness comparison across ratios.
"""

import argparse
import sys

from privroute.cli import main as cli_main
from privroute.generators import generate_wheel

RATIOS = (1, 20, 50, 100)
NOISE_PCTS = (20, 50, 100)


def rim_mean(n: int, r: float, weight_seed: int) -> float:
    g = generate_wheel(n, r, weight_seed)
    rim = [w for u, _, w in g.edges if u != 0]
    return sum(rim) / len(rim)


def run(args: argparse.Namespace) -> int:
    for r in RATIOS:
        base = rim_mean(args.n, float(r), args.weight_seed)
        for pct in NOISE_PCTS:
            out = f"{args.output_dir}/wheel_r{r}_noise{pct}"
            code = cli_main(
                [
                    "simulate",
                    "--graph-class", "wheel",
                    "--n", str(args.n),
                    "--r", str(r),
                    "--weight-seed", str(args.weight_seed),
                    "--sigma", str(pct / 100.0 * base),
                    "--trials", str(args.trials),
                    "--seed", str(args.seed),
                    "--output-dir", out,
                ]
            )
            if code != 0:
                return code
            print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--output-dir", required=True)
    parser.add_argument("--n", type=int, default=101)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--weight-seed", type=int, default=1)
    parser.add_argument("--seed", type=int, default=1)
    sys.exit(run(parser.parse_args()))
