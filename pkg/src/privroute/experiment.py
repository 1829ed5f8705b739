"""Monte-Carlo harness: releases, realized bias, and per-category bucketing.

The protocol: build one ground-truth graph, draw ``trials`` privatized
releases, route every selected node pair on each release, cost the chosen
path on the true graph, and tabulate relative bias into percentage buckets
per distance category. Categories 1..4 are the quartiles of the all-pairs
true shortest-path weight distribution (1 = closest pairs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .generators import GraphSpec, build_graph
from .graph import (
    Path,
    WeightedGraph,
    distances_from,
    path_weight,
    shortest_path_tree,
)
from .release import PrivacyParams, release
from .seeds import PAIR_SAMPLING_STREAM, TRIAL_STREAM, generator, substream

CATEGORIES = (1, 2, 3, 4)

# Relative-bias buckets in percent: exactly-zero, then lower-exclusive /
# upper-inclusive ranges, then everything above 100.
BUCKET_BOUNDS_PCT: tuple[tuple[float, float | None], ...] = (
    (0.0, 0.0),
    (0.0, 10.0),
    (10.0, 20.0),
    (20.0, 40.0),
    (40.0, 60.0),
    (60.0, 100.0),
    (100.0, None),
)
ZERO_BUCKET = 0
OVER_100_BUCKET = len(BUCKET_BOUNDS_PCT) - 1


def bucket_index(rel_bias: float) -> int:
    """Bucket for a relative bias given as a fraction (0.25 = 25%)."""
    if rel_bias < 0:
        raise ValueError(f"relative bias must be >= 0, got {rel_bias}")
    if rel_bias == 0.0:
        return ZERO_BUCKET
    pct = rel_bias * 100.0
    for idx, (lo, hi) in enumerate(BUCKET_BOUNDS_PCT[1:-1], start=1):
        if lo < pct <= hi:
            return idx
    return OVER_100_BUCKET


@dataclass(frozen=True, slots=True)
class BiasRecord:
    """One (trial, pair) outcome, costed on the true graph."""

    trial: int
    source: int
    target: int
    true_weight: float
    realized_weight: float
    bias: float
    rel_bias: float
    rel_bias_defined: bool


def realized_bias(
    g_true: WeightedGraph,
    g_noisy: WeightedGraph,
    source: int,
    target: int,
    trial: int = 0,
) -> BiasRecord:
    """Route on the noisy graph, pay true-graph prices.

    The perceived shortest path is found on ``g_noisy``; both it and the
    true optimum are costed on ``g_true``. Zero-weight optima (possible
    under sparsity) leave the relative bias undefined.
    """
    if g_noisy.node_count != g_true.node_count or [
        e[:2] for e in g_noisy.edges
    ] != [e[:2] for e in g_true.edges]:
        raise ValueError("graphs do not share topology")
    p_tilde = shortest_path_tree(g_noisy, source, stop_at=target).path(target)
    p_star = shortest_path_tree(g_true, source, stop_at=target).path(target)
    return _record(g_true, p_star, p_tilde, source, target, trial)


def _record(
    g_true: WeightedGraph,
    p_star: Path,
    p_tilde: Path,
    source: int,
    target: int,
    trial: int,
) -> BiasRecord:
    true_w = path_weight(g_true, p_star)
    realized_w = path_weight(g_true, p_tilde)
    bias = realized_w - true_w
    defined = true_w > 0.0
    return BiasRecord(
        trial=trial,
        source=source,
        target=target,
        true_weight=true_w,
        realized_weight=realized_w,
        bias=bias,
        rel_bias=bias / true_w if defined else 0.0,
        rel_bias_defined=defined,
    )


def categorize_pairs(g: WeightedGraph) -> dict[tuple[int, int], int]:
    """Quartile category (1..4) per unordered distinct node pair.

    Quartile cut points use the nearest-rank percentile of the all-pairs
    true shortest-path weight distribution; a pair sitting exactly on a cut
    goes to the lower category.
    """
    weights: dict[tuple[int, int], float] = {}
    for i in range(g.node_count - 1):
        dists = distances_from(g, i)
        for j in range(i + 1, g.node_count):
            d = dists[j]
            if d == float("inf"):
                raise ValueError(f"graph is disconnected: no path {i} -> {j}")
            weights[(i, j)] = d
    ordered = sorted(weights.values())
    q1 = nearest_rank_percentile(ordered, 25.0)
    q2 = nearest_rank_percentile(ordered, 50.0)
    q3 = nearest_rank_percentile(ordered, 75.0)
    categories = {}
    for pair, w in weights.items():
        if w <= q1:
            categories[pair] = 1
        elif w <= q2:
            categories[pair] = 2
        elif w <= q3:
            categories[pair] = 3
        else:
            categories[pair] = 4
    return categories


def nearest_rank_percentile(sorted_values: list[float], pct: float) -> float:
    """Nearest-rank percentile: the ceil(p/100 * n)-th smallest value."""
    if not sorted_values:
        raise ValueError("empty sample")
    n = len(sorted_values)
    rank = min(max(math.ceil(pct / 100.0 * n), 1), n)
    return sorted_values[rank - 1]


@dataclass(frozen=True)
class PairSampling:
    """Which node pairs to simulate: all of them, or k per category."""

    mode: str = "all"
    k: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("all", "sample"):
            raise ValueError(f"pair sampling mode must be all|sample, got {self.mode!r}")
        if self.mode == "sample" and (self.k is None or self.k < 1):
            raise ValueError("sample mode needs k >= 1")


def select_pairs(
    categories: Mapping[tuple[int, int], int],
    sampling: PairSampling,
    seed,
) -> list[tuple[int, int]]:
    """Deterministic pair selection; sampled pairs come k-per-category."""
    if sampling.mode == "all":
        return sorted(categories)
    rng = generator(seed)
    chosen: list[tuple[int, int]] = []
    for cat in CATEGORIES:
        members = sorted(p for p, c in categories.items() if c == cat)
        if not members:
            continue
        k = min(sampling.k, len(members))
        idx = rng.choice(len(members), size=k, replace=False)
        chosen.extend(members[i] for i in sorted(int(x) for x in idx))
    return sorted(chosen)


@dataclass(frozen=True)
class CategoryTable:
    """Empirical bucket probabilities per category.

    Probabilities are over (pair, trial) records with a defined relative
    bias; records whose true optimum has weight zero are counted in
    ``undefined_counts`` instead. ``pair_mean_rel_bias`` averages each
    pair's defined records across trials (None when never defined).
    """

    bucket_counts: tuple[tuple[int, ...], ...]
    undefined_counts: tuple[int, ...]
    pair_counts: tuple[int, ...]
    mean_rel_bias: tuple[float, ...]
    pair_mean_rel_bias: Mapping[tuple[int, int], float | None]

    def defined_total(self, category: int) -> int:
        return sum(self.bucket_counts[category - 1])

    def probability(self, category: int, bucket: int) -> float:
        total = self.defined_total(category)
        if total == 0:
            return 0.0
        return self.bucket_counts[category - 1][bucket] / total

    def probabilities(self, category: int) -> tuple[float, ...]:
        return tuple(
            self.probability(category, b) for b in range(len(BUCKET_BOUNDS_PCT))
        )


def build_category_table(
    records: Iterable[BiasRecord],
    categories: Mapping[tuple[int, int], int],
) -> CategoryTable:
    records = list(records)
    counts = [[0] * len(BUCKET_BOUNDS_PCT) for _ in CATEGORIES]
    undefined = [0] * len(CATEGORIES)
    rel_sum = [0.0] * len(CATEGORIES)
    per_pair_sum: dict[tuple[int, int], float] = {}
    per_pair_n: dict[tuple[int, int], int] = {}
    for rec in records:
        cat = categories[(rec.source, rec.target)]
        if not rec.rel_bias_defined:
            undefined[cat - 1] += 1
            continue
        counts[cat - 1][bucket_index(rec.rel_bias)] += 1
        rel_sum[cat - 1] += rec.rel_bias
        key = (rec.source, rec.target)
        per_pair_sum[key] = per_pair_sum.get(key, 0.0) + rec.rel_bias
        per_pair_n[key] = per_pair_n.get(key, 0) + 1
    pair_counts = [0] * len(CATEGORIES)
    seen_pairs = {(r.source, r.target) for r in records}
    for pair in seen_pairs:
        pair_counts[categories[pair] - 1] += 1
    pair_means: dict[tuple[int, int], float | None] = {
        pair: (per_pair_sum[pair] / per_pair_n[pair] if pair in per_pair_n else None)
        for pair in seen_pairs
    }
    mean_rel = tuple(
        rel_sum[c] / sum(counts[c]) if sum(counts[c]) else 0.0
        for c in range(len(CATEGORIES))
    )
    return CategoryTable(
        bucket_counts=tuple(tuple(row) for row in counts),
        undefined_counts=tuple(undefined),
        pair_counts=tuple(pair_counts),
        mean_rel_bias=mean_rel,
        pair_mean_rel_bias=pair_means,
    )


@dataclass(frozen=True)
class ExperimentResult:
    graph: WeightedGraph
    privacy: PrivacyParams
    categories: Mapping[tuple[int, int], int]
    pairs: tuple[tuple[int, int], ...]
    records: tuple[BiasRecord, ...]
    table: CategoryTable


def run_experiment(
    spec: GraphSpec,
    privacy: PrivacyParams,
    trials: int,
    master_seed: int,
    sampling: PairSampling = PairSampling(),
) -> ExperimentResult:
    """Full protocol for one configuration.

    Trial ``t``'s release uses a stream keyed by (master_seed, t), so
    results for a trial do not depend on how many trials run. Records come
    back sorted by (trial, source, target).
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    g_true = build_graph(spec)
    return run_experiment_on_graph(g_true, privacy, trials, master_seed, sampling)


def run_experiment_on_graph(
    g_true: WeightedGraph,
    privacy: PrivacyParams,
    trials: int,
    master_seed: int,
    sampling: PairSampling = PairSampling(),
) -> ExperimentResult:
    categories = categorize_pairs(g_true)
    pairs = select_pairs(
        categories, sampling, substream(master_seed, PAIR_SAMPLING_STREAM)
    )
    by_source: dict[int, list[int]] = {}
    for i, j in pairs:
        by_source.setdefault(i, []).append(j)
    star_paths: dict[tuple[int, int], Path] = {}
    for i, targets in by_source.items():
        tree = shortest_path_tree(g_true, i)
        for j in targets:
            star_paths[(i, j)] = tree.path(j)
    records: list[BiasRecord] = []
    for t in range(trials):
        noisy = release(
            g_true, privacy.sigma, substream(master_seed, TRIAL_STREAM, t)
        ).graph
        for i, targets in by_source.items():
            tree = shortest_path_tree(noisy, i)
            for j in targets:
                records.append(
                    _record(g_true, star_paths[(i, j)], tree.path(j), i, j, t)
                )
    records.sort(key=lambda r: (r.trial, r.source, r.target))
    table = build_category_table(records, categories)
    return ExperimentResult(
        graph=g_true,
        privacy=privacy,
        categories=categories,
        pairs=tuple(pairs),
        records=tuple(records),
        table=table,
    )


@dataclass(frozen=True)
class CategoryTrend:
    category: int
    p_unchanged: float
    p_over_100: float
    mean_rel_bias: float


@dataclass(frozen=True)
class TrendSummary:
    """Condensed per-category robustness numbers and their pairwise gaps."""

    rows: tuple[CategoryTrend, ...]
    unchanged_deltas: Mapping[tuple[int, int], float]
    over_100_deltas: Mapping[tuple[int, int], float]

    def format(self) -> str:
        lines = ["category  p_unchanged  p_over_100  mean_rel_bias"]
        for row in self.rows:
            lines.append(
                f"{row.category:>8}  {row.p_unchanged:>11.6f}  "
                f"{row.p_over_100:>10.6f}  {row.mean_rel_bias:>13.6f}"
            )
        lines.append("")
        lines.append("pair  d_p_unchanged  d_p_over_100")
        for (a, b), d in self.unchanged_deltas.items():
            lines.append(
                f"{a}-{b}   {d:>13.6f}  {self.over_100_deltas[(a, b)]:>12.6f}"
            )
        return "\n".join(lines) + "\n"


def trend_report(table: CategoryTable) -> TrendSummary:
    rows = tuple(
        CategoryTrend(
            category=cat,
            p_unchanged=table.probability(cat, ZERO_BUCKET),
            p_over_100=table.probability(cat, OVER_100_BUCKET),
            mean_rel_bias=table.mean_rel_bias[cat - 1],
        )
        for cat in CATEGORIES
    )
    unchanged = {}
    over = {}
    for a in CATEGORIES:
        for b in CATEGORIES:
            if a < b:
                unchanged[(a, b)] = rows[a - 1].p_unchanged - rows[b - 1].p_unchanged
                over[(a, b)] = rows[a - 1].p_over_100 - rows[b - 1].p_over_100
    return TrendSummary(rows=rows, unchanged_deltas=unchanged, over_100_deltas=over)
