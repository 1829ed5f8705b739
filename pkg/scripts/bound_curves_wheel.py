#!/usr/bin/env python3
"""Bound-vs-beta curves on a 21-node wheel for two pair types.

Produces one bounds.csv per pair (hub-to-rim, and two diametrically
opposite rim nodes); render both together with the plotting tool
(kind=bound_curves) for a shared-axes comparison.
"""

import argparse
import sys

from privroute.cli import main as cli_main


def run(args: argparse.Namespace) -> int:
    rim_a = 1
    rim_b = 1 + (args.n - 1) // 2
    for label, (s, t) in {"hub_rim": (0, rim_a), "diametric": (rim_a, rim_b)}.items():
        code = cli_main(
            [
                "bounds",
                "--graph-class", "wheel",
                "--n", str(args.n),
                "--r", "1",
                "--weight-seed", str(args.weight_seed),
                "--sigma", str(args.sigma),
                "--source", str(s),
                "--target", str(t),
                "--beta-start", str(args.beta_start),
                "--beta-stop", str(args.beta_stop),
                "--beta-count", str(args.beta_count),
                "--output-dir", f"{args.output_dir}/{label}",
            ]
        )
        if code != 0:
            return code
        print(f"wrote {args.output_dir}/{label}/bounds.csv")
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--output-dir", required=True)
    parser.add_argument("--n", type=int, default=21)
    parser.add_argument("--sigma", type=float, default=0.3)
    parser.add_argument("--weight-seed", type=int, default=1)
    parser.add_argument("--beta-start", type=float, default=0.02)
    parser.add_argument("--beta-stop", type=float, default=4.0)
    parser.add_argument("--beta-count", type=int, default=50)
    sys.exit(run(parser.parse_args()))
