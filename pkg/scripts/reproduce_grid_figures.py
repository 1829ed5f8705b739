#!/usr/bin/env python3
"""Grid bias sweep: sizes x noise levels, one simulate run per cell.

Writes one output directory per (size, noise) combination, each holding
records.csv / aggregate.csv / trends.txt. Render the aggregates with the
plotting tool (kind=category_bars) to get grouped-bar figures.
"""

import argparse
import sys

from privroute.cli import main as cli_main

NOISE_PCTS = (20, 50, 100, 200)


def run(args: argparse.Namespace) -> int:
    for n in args.sizes:
        pairs = "all" if n <= 20 else f"sample:{args.sample_k}"
        for pct in NOISE_PCTS:
            out = f"{args.output_dir}/grid_n{n}_noise{pct}"
            code = cli_main(
                [
                    "simulate",
                    "--graph-class", "grid",
                    "--n", str(n),
                    "--weight-seed", str(args.weight_seed),
                    "--noise-pct", str(pct),
                    "--trials", str(args.trials),
                    "--seed", str(args.seed),
                    "--pairs", pairs,
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
    parser.add_argument("--sizes", type=int, nargs="+", default=[10, 20])
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--weight-seed", type=int, default=1)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--sample-k", type=int, default=500,
                        help="pairs per category on large grids")
    sys.exit(run(parser.parse_args()))
