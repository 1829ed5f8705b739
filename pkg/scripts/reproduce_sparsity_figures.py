#!/usr/bin/env python3
"""Sparsity sweep on a 20x20 grid: zero-weight edge fractions x noise levels.

Sigma is always taken relative to the post-sparsity mean edge weight, so
higher sparsity also means less absolute noise at the same percentage.
"""

import argparse
import sys

from privroute.cli import main as cli_main

SPARSITIES = (0.0, 0.25, 0.5, 0.75)
NOISE_PCTS = (20, 50)


def run(args: argparse.Namespace) -> int:
    for sp in SPARSITIES:
        for pct in NOISE_PCTS:
            out = f"{args.output_dir}/grid_n{args.n}_sp{sp}_noise{pct}"
            code = cli_main(
                [
                    "simulate",
                    "--graph-class", "grid",
                    "--n", str(args.n),
                    "--sparsity", str(sp),
                    "--weight-seed", str(args.weight_seed),
                    "--noise-pct", str(pct),
                    "--trials", str(args.trials),
                    "--seed", str(args.seed),
                    "--pairs", args.pairs,
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
    parser.add_argument("--n", type=int, default=20)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--weight-seed", type=int, default=1)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--pairs", default="all")
    sys.exit(run(parser.parse_args()))
