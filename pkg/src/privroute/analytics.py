"""Closed-form and semi-analytical bias quantities.

Everything here works on the additive-Gaussian comparison model: the noisy
weight of a path exceeds its true weight by a centered normal whose variance
scales with the number of edges, and two paths are compared through the
noise on the edges they do not share. The main quantities:

* ``path_deviation_prob`` -- probability a strictly worse path is perceived
  shorter than the optimum, ``Phi_c(alpha / (sigma * sqrt(s)))``.
* ``q_beta_upper`` -- union-style upper bounds on the probability of ending
  up on a path at least ``beta`` worse than the optimum.
* ``q_beta_exact_nonoverlap`` -- exact value of that probability when the
  ensemble's paths are pairwise edge-disjoint, via numerical quadrature.
* ``corollary_bias_bound`` -- high-probability bound on realized bias,
  ``sqrt(2) * sigma * z * sqrt(S)`` with ``z`` an inverse-normal quantile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .graph import Path, PathEnsemble, WeightedGraph, path_weight, sym_diff_size
from .seeds import Seed, generator

SQRT2 = math.sqrt(2.0)


class TruncatedEnsembleError(ValueError):
    """The operation needs a complete path ensemble but got a truncated one."""


class OverlappingPathsError(ValueError):
    """Exact computation requires pairwise edge-disjoint paths."""


def phi(x: float) -> float:
    """Standard normal CDF."""
    return 0.5 * math.erfc(-x / SQRT2)


def phi_c(x: float) -> float:
    """Standard normal complementary CDF, via erfc for accuracy in the tail."""
    return 0.5 * math.erfc(x / SQRT2)


def phi_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def phi_inv(eta: float, tol: float = 1e-12) -> float:
    """Inverse standard normal CDF by bisection.

    Slower than a rational approximation but certifiably within ``tol`` of
    the double-precision crossing point, and never on a hot path.
    """
    if not 0.0 < eta < 1.0:
        raise ValueError(f"quantile level must be in (0,1), got {eta}")
    lo, hi = -40.0, 40.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if phi(mid) < eta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def path_deviation_prob(alpha: float, s: int, sigma: float) -> float:
    """Probability that a path worse by ``alpha`` looks shorter after noise.

    ``s`` counts the edges in exactly one of the two paths; noise on shared
    edges cancels, so the comparison sees a centered normal with standard
    deviation ``sigma * sqrt(s)``.
    """
    if s == 0:
        raise ValueError("degenerate ensemble: paths are identical as edge sets")
    if s < 0:
        raise ValueError(f"s must be >= 1, got {s}")
    if alpha <= 0:
        raise ValueError(f"gap alpha must be > 0, got {alpha}")
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    return phi_c(alpha / (sigma * math.sqrt(s)))


@dataclass(frozen=True)
class PathGap:
    """One ensemble path scored against the optimum."""

    path: Path
    alpha: float
    sym_diff: int


@dataclass(frozen=True)
class BetaPartition:
    """Ensemble split into paths at least ``beta`` worse than the optimum.

    ``worse`` holds the at-least-beta-worse paths; ``better`` the rest,
    including the optimum itself (gap 0).
    """

    beta: float
    p_star: Path
    p_star_weight: float
    worse: tuple[PathGap, ...]
    better: tuple[PathGap, ...]

    @property
    def better_count(self) -> int:
        return len(self.better)

    @property
    def s_max(self) -> int:
        return max((g.sym_diff for g in self.worse), default=0)

    @property
    def all_gaps(self) -> tuple[PathGap, ...]:
        return self.worse + self.better


def partition_by_beta(
    g: WeightedGraph, ensemble: PathEnsemble, beta: float
) -> BetaPartition:
    """Split a complete ensemble at gap ``beta`` from its best path."""
    if beta <= 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    if ensemble.truncated:
        raise TruncatedEnsembleError(
            "partitioning needs the complete path set; enumeration was truncated"
        )
    if not ensemble.paths:
        raise ValueError("empty ensemble")
    weighted = [(path_weight(g, p), p) for p in ensemble.paths]
    w_star, p_star = min(weighted, key=lambda t: (t[0], t[1].nodes))
    worse: list[PathGap] = []
    better: list[PathGap] = []
    for w, p in weighted:
        entry = PathGap(path=p, alpha=w - w_star, sym_diff=sym_diff_size(p, p_star))
        if w >= w_star + beta:
            worse.append(entry)
        else:
            better.append(entry)
    return BetaPartition(
        beta=beta,
        p_star=p_star,
        p_star_weight=w_star,
        worse=tuple(worse),
        better=tuple(better),
    )


def q_beta_upper(partition: BetaPartition, sigma: float) -> tuple[float, float]:
    """Both upper-bound forms for the at-least-beta-worse probability.

    The first sums each worse path's deviation probability; the second
    coarsens every term to the worst case ``Phi_c(beta/(sigma*sqrt(s_max)))``
    times the count. Either may exceed 1 at small beta (vacuous).
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    if not partition.worse:
        return (0.0, 0.0)
    sum_bound = sum(
        phi_c(entry.alpha / (sigma * math.sqrt(entry.sym_diff)))
        for entry in partition.worse
    )
    coarse = len(partition.worse) * phi_c(
        partition.beta / (sigma * math.sqrt(partition.s_max))
    )
    return (sum_bound, coarse)


def corollary_bias_bound(
    ensemble_size: int, s_cap: int, sigma: float, gamma_confidence: float
) -> float:
    """Bias level exceeded with probability at most ``gamma_confidence``.

    ``s_cap`` is the maximum edge count over the ensemble's paths. The
    bound is ``sqrt(2) * sigma * z * sqrt(s_cap)`` with
    ``z = phi_inv(1 - gamma/ensemble_size)``.
    """
    if ensemble_size < 1:
        raise ValueError(f"ensemble_size must be >= 1, got {ensemble_size}")
    if s_cap < 1:
        raise ValueError(f"s_cap must be >= 1, got {s_cap}")
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    if not 0.0 < gamma_confidence < 1.0:
        raise ValueError(f"gamma must be in (0,1), got {gamma_confidence}")
    if gamma_confidence / ensemble_size >= 1.0:
        raise ValueError("gamma must be smaller than the ensemble size")
    z = phi_inv(1.0 - gamma_confidence / ensemble_size)
    return SQRT2 * sigma * z * math.sqrt(s_cap)


def adaptive_composite_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-8,
    start_intervals: int = 64,
    max_intervals: int = 1 << 20,
) -> float:
    """Composite Simpson with interval doubling until estimates stabilize."""
    if b <= a:
        raise ValueError("need b > a")

    def composite(m: int) -> float:
        h = (b - a) / m
        total = f(a) + f(b)
        for i in range(1, m):
            total += (4.0 if i % 2 else 2.0) * f(a + i * h)
        return total * h / 3.0

    m = start_intervals
    prev = composite(m)
    while m < max_intervals:
        m *= 2
        cur = composite(m)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    raise ArithmeticError(f"quadrature did not converge within {max_intervals} intervals")


def ensemble_is_edge_disjoint(gaps: Sequence[PathGap]) -> bool:
    paths = [g.path for g in gaps]
    for i, a in enumerate(paths):
        for b in paths[i + 1 :]:
            if sym_diff_size(a, b) != a.edge_count + b.edge_count:
                return False
    return True


def q_beta_exact_nonoverlap(
    g: WeightedGraph, partition: BetaPartition, sigma: float
) -> float:
    """Exact at-least-beta-worse probability for edge-disjoint ensembles.

    With no shared edges the noisy path weights are independent normals
    ``N(w_P, n_P * sigma**2)``, so the probability that a given worse path
    beats every other path integrates in one dimension:

        sum over worse P of
            integral  prod_{R != P} Phi_c((t - w_R)/(sigma*sqrt(n_R)))
                      * pdf((t - w_P)/(sigma*sqrt(n_P))) / (sigma*sqrt(n_P)) dt

    Each term integrates over +-10 of its own standard deviation (tail mass
    below 1e-23) and the sum is clamped to [0,1] to absorb quadrature
    round-off.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    gaps = partition.all_gaps
    if not ensemble_is_edge_disjoint(gaps):
        raise OverlappingPathsError(
            "paths share edges; use q_beta_upper for overlapping ensembles"
        )
    stats = [
        (partition.p_star_weight + entry.alpha, sigma * math.sqrt(entry.path.edge_count))
        for entry in gaps
    ]
    total = 0.0
    for idx in range(len(partition.worse)):
        mean_p, sd_p = stats[idx]
        others = [stats[j] for j in range(len(gaps)) if j != idx]

        def integrand(t: float) -> float:
            val = phi_pdf((t - mean_p) / sd_p) / sd_p
            for mean_r, sd_r in others:
                val *= phi_c((t - mean_r) / sd_r)
                if val == 0.0:
                    break
            return val

        total += adaptive_composite_simpson(
            integrand, mean_p - 10.0 * sd_p, mean_p + 10.0 * sd_p
        )
    return min(1.0, max(0.0, total))


@dataclass(frozen=True)
class BoundReport:
    """One beta's worth of bounds, with the parameters that produced them."""

    beta: float
    sum_bound: float
    coarse_bound: float
    exact: float | None
    corollary_bound: float
    sigma: float
    ensemble_size: int
    s_cap: int
    s_max: int
    gamma_confidence: float

    @property
    def vacuous(self) -> bool:
        return self.sum_bound > 1.0


def bound_report(
    g: WeightedGraph,
    ensemble: PathEnsemble,
    beta: float,
    sigma: float,
    gamma_confidence: float = 0.05,
) -> BoundReport:
    """Bounds (and the exact value when paths are disjoint) at one beta."""
    partition = partition_by_beta(g, ensemble, beta)
    sum_bound, coarse_bound = q_beta_upper(partition, sigma)
    exact: float | None = None
    if ensemble_is_edge_disjoint(partition.all_gaps):
        exact = q_beta_exact_nonoverlap(g, partition, sigma)
    s_cap = max(p.edge_count for p in ensemble.paths)
    return BoundReport(
        beta=beta,
        sum_bound=sum_bound,
        coarse_bound=coarse_bound,
        exact=exact,
        corollary_bound=corollary_bias_bound(
            len(ensemble.paths), s_cap, sigma, gamma_confidence
        ),
        sigma=sigma,
        ensemble_size=len(ensemble.paths),
        s_cap=s_cap,
        s_max=partition.s_max,
        gamma_confidence=gamma_confidence,
    )


def simulate_ensemble_bias(
    g: WeightedGraph,
    ensemble: PathEnsemble,
    sigma: float,
    trials: int,
    seed: Seed,
    clamp: bool = False,
) -> np.ndarray:
    """Monte-Carlo realized bias when routing is restricted to the ensemble.

    Draws per-edge noise over the union of ensemble edges, picks the path
    with the smallest noisy weight each trial (ties to the first path in
    lexicographic order, matching the shortest-path tie-break), and returns
    the true-weight excess over the optimum. ``clamp=False`` simulates the
    plain additive-noise comparison model; ``clamp=True`` applies the
    release mechanism's ``max(0, w + Z)`` first.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    union_edges = sorted({e for p in ensemble.paths for e in p.edges})
    col = {e: i for i, e in enumerate(union_edges)}
    incidence = np.zeros((len(ensemble.paths), len(union_edges)))
    for i, p in enumerate(ensemble.paths):
        for e in p.edges:
            incidence[i, col[e]] = 1.0
    base = np.array([g.weight(u, v) for u, v in union_edges])
    true_weights = np.array([path_weight(g, p) for p in ensemble.paths])
    star = int(np.argmin(true_weights))
    rng = generator(seed)
    bias = np.empty(trials)
    done = 0
    while done < trials:
        chunk = min(trials - done, 1 << 16)
        noise = rng.normal(0.0, sigma, size=(chunk, len(union_edges)))
        noisy_edges = base + noise
        if clamp:
            np.maximum(noisy_edges, 0.0, out=noisy_edges)
        noisy_path_w = noisy_edges @ incidence.T
        chosen = np.argmin(noisy_path_w, axis=1)
        bias[done : done + chunk] = true_weights[chosen] - true_weights[star]
        done += chunk
    return bias


def empirical_q_beta(bias: np.ndarray, betas: Sequence[float]) -> np.ndarray:
    """Fraction of trials with bias at least beta, per beta."""
    return np.array([float(np.mean(bias >= b)) for b in betas])
