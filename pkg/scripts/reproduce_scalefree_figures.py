#!/usr/bin/env python3
"""Scale-free sweep: power-law exponents x noise levels.

Each run keeps the topology seed fixed so the same largest-connected
component is perturbed at every noise level.
"""

import argparse
import sys

from privroute.cli import main as cli_main

GAMMAS = (1.5, 2.0, 2.5, 3.0)
NOISE_PCTS = (20, 50, 100, 200)


def run(args: argparse.Namespace) -> int:
    for gamma in GAMMAS:
        for pct in NOISE_PCTS:
            out = f"{args.output_dir}/scalefree_g{gamma}_noise{pct}"
            code = cli_main(
                [
                    "simulate",
                    "--graph-class", "scale_free",
                    "--n", str(args.n),
                    "--gamma", str(gamma),
                    "--weight-seed", str(args.weight_seed),
                    "--topology-seed", str(args.topology_seed),
                    "--noise-pct", str(pct),
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
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--weight-seed", type=int, default=1)
    parser.add_argument("--topology-seed", type=int, default=1)
    parser.add_argument("--seed", type=int, default=1)
    sys.exit(run(parser.parse_args()))
