"""Batch figure rendering from simulation CSVs.

Three figure kinds, each fed by a CSV the simulator CLI emits:

* ``category_bars`` -- grouped bars of relative-bias bucket probabilities
  per distance category, from an ``aggregate.csv``.
* ``bound_curves``  -- bound/exact values against beta, from one or more
  ``bounds.csv`` files (one curve family per file, shared axes).
* ``q_sweep``       -- deviation probability against a swept parameter,
  one curve per symmetric-difference size, from a ``q_vs_*.csv``.

This tool never recomputes statistics: every plotted number comes straight
from the input file. Output is written as both PNG and SVG.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.figure import Figure

EXPECTED_COLUMNS = {
    "category_bars": [
        "category",
        "bucket_lo_pct",
        "bucket_hi_pct",
        "probability",
        "pair_trial_count",
    ],
    "bound_curves": [
        "beta",
        "sum_bound",
        "coarse_bound",
        "exact",
        "corollary_bound",
        "sigma",
        "ensemble_size",
        "s_max",
    ],
    "q_sweep": ["x", "s", "q", "sigma"],
}

PLOT_KINDS = tuple(EXPECTED_COLUMNS)


class SchemaError(ValueError):
    """Input CSV does not match the simulator's output contract."""


@dataclass(frozen=True)
class PlotJob:
    inputs: tuple[Path, ...]
    kind: str
    output: Path
    title: str = ""

    def __post_init__(self) -> None:
        if self.kind not in PLOT_KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}; use one of {PLOT_KINDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        if self.kind != "bound_curves" and len(self.inputs) != 1:
            raise ValueError(f"{self.kind} takes exactly one input CSV")


@dataclass
class RenderResult:
    """Figure plus the numbers behind it, for inspection before rasterizing."""

    figure: Figure
    # category -> bucket label -> probability (category_bars)
    bar_heights: dict[int, dict[str, float]] = field(default_factory=dict)
    # curve label -> (x values, y values)
    curves: dict[str, tuple[list[float], list[float]]] = field(default_factory=dict)
    outputs: tuple[Path, ...] = ()


def read_rows(path: Path, kind: str) -> list[dict[str, str]]:
    expected = EXPECTED_COLUMNS[kind]
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        got = reader.fieldnames or []
        if got != expected:
            for col_got, col_want in zip(got, expected):
                if col_got != col_want:
                    raise SchemaError(
                        f"{path}: column {col_got!r} where {col_want!r} expected"
                    )
            missing = expected[len(got):]
            extra = got[len(expected):]
            raise SchemaError(
                f"{path}: missing columns {missing}" if missing
                else f"{path}: unexpected columns {extra}"
            )
        return list(reader)


def bucket_label(lo: str, hi: str) -> str:
    if hi == "":
        return f">{float(lo):g}%"
    if float(lo) == float(hi):
        return f"{float(lo):g}%"
    return f"({float(lo):g},{float(hi):g}]%"


def _build_category_bars(job: PlotJob) -> RenderResult:
    rows = read_rows(job.inputs[0], "category_bars")
    heights: dict[int, dict[str, float]] = {}
    labels: list[str] = []
    for row in rows:
        cat = int(row["category"])
        label = bucket_label(row["bucket_lo_pct"], row["bucket_hi_pct"])
        if label not in labels:
            labels.append(label)
        heights.setdefault(cat, {})[label] = float(row["probability"])
    cats = sorted(heights)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    n_buckets = len(labels)
    width = 0.9 / n_buckets
    for b, label in enumerate(labels):
        xs = [c + (b - (n_buckets - 1) / 2) * width for c in cats]
        ys = [heights[c].get(label, 0.0) for c in cats]
        ax.bar(xs, ys, width=width, label=label)
    ax.set_xticks(cats)
    ax.set_xticklabels([f"Category {c}" for c in cats])
    ax.set_ylabel("empirical probability")
    ax.set_ylim(0.0, 1.0)
    ax.legend(title="relative bias", fontsize=8, ncols=4)
    if job.title:
        ax.set_title(job.title)
    return RenderResult(figure=fig, bar_heights=heights)


def _build_bound_curves(job: PlotJob) -> RenderResult:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    curves: dict[str, tuple[list[float], list[float]]] = {}
    for path in job.inputs:
        rows = read_rows(path, "bound_curves")
        betas = [float(r["beta"]) for r in rows]
        stem = path.parent.name or path.stem
        series = {"sum_bound": [float(r["sum_bound"]) for r in rows],
                  "coarse_bound": [float(r["coarse_bound"]) for r in rows]}
        if any(r["exact"] != "" for r in rows):
            series["exact"] = [float(r["exact"]) for r in rows if r["exact"] != ""]
        for name, ys in series.items():
            label = f"{stem}:{name}"
            curves[label] = (betas[: len(ys)], ys)
            style = {"exact": "-", "sum_bound": "--", "coarse_bound": ":"}[name]
            ax.plot(betas[: len(ys)], ys, style, label=label)
    ax.set_xlabel("beta")
    ax.set_ylabel("probability of bias >= beta")
    ax.legend(fontsize=8)
    if job.title:
        ax.set_title(job.title)
    return RenderResult(figure=fig, curves=curves)


def _build_q_sweep(job: PlotJob) -> RenderResult:
    rows = read_rows(job.inputs[0], "q_sweep")
    by_s: dict[int, list[tuple[float, float]]] = {}
    for row in rows:
        by_s.setdefault(int(row["s"]), []).append((float(row["x"]), float(row["q"])))
    fig, ax = plt.subplots(figsize=(7, 4.5))
    curves = {}
    for s in sorted(by_s):
        pts = sorted(by_s[s])
        xs, ys = [p[0] for p in pts], [p[1] for p in pts]
        curves[f"s={s}"] = (xs, ys)
        ax.plot(xs, ys, label=f"|S| = {s}")
    ax.set_xlabel("swept parameter")
    ax.set_ylabel("deviation probability q")
    ax.legend(fontsize=8)
    if job.title:
        ax.set_title(job.title)
    return RenderResult(figure=fig, curves=curves)


_BUILDERS = {
    "category_bars": _build_category_bars,
    "bound_curves": _build_bound_curves,
    "q_sweep": _build_q_sweep,
}


def build_figure(job: PlotJob) -> RenderResult:
    """Figure plus data model, not yet written to disk."""
    for path in job.inputs:
        if not path.exists():
            raise FileNotFoundError(f"input CSV not found: {path}")
    return _BUILDERS[job.kind](job)


def render(job: PlotJob) -> RenderResult:
    """Build the figure and write it as PNG and SVG next to ``job.output``."""
    result = build_figure(job)
    base = job.output
    if base.suffix in (".png", ".svg"):
        base = base.with_suffix("")
    base.parent.mkdir(parents=True, exist_ok=True)
    outputs = (base.with_suffix(".png"), base.with_suffix(".svg"))
    for out in outputs:
        result.figure.savefig(out, dpi=150, bbox_inches="tight")
    plt.close(result.figure)
    result.outputs = outputs
    return result


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="privroute-plot", description="Render figures from simulator CSVs"
    )
    parser.add_argument("--input", action="append", required=True,
                        help="input CSV (repeat for bound_curves overlays)")
    parser.add_argument("--kind", choices=PLOT_KINDS, required=True)
    parser.add_argument("--output", required=True,
                        help="output image base path (.png and .svg written)")
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)
    try:
        job = PlotJob(
            inputs=tuple(Path(p) for p in args.input),
            kind=args.kind,
            output=Path(args.output),
            title=args.title,
        )
        result = render(job)
    except (SchemaError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    for out in result.outputs:
        print(f"wrote {out}")
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
