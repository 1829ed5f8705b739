"""Synthetic graph families: square grids, weighted wheels, power-law graphs.

All generators are pure functions of their parameters and seeds, always
return connected graphs, and draw edge weights in canonical edge order so a
fixed seed gives a bit-identical graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import WeightedGraph, edge_key
from .seeds import SPARSITY_STREAM, Seed, generator, substream

GRAPH_FAMILIES = ("grid", "wheel", "scale_free")


@dataclass(frozen=True)
class GraphSpec:
    """Recipe for one ground-truth graph.

    ``family`` selects the generator ("grid", "wheel", "scale_free"); ``n``
    is its size parameter. ``r`` (wheel) and ``gamma`` (scale_free) must be
    present exactly when applicable. ``sparsity`` is the fraction of edges
    forced to weight zero after generation.
    """

    family: str
    n: int
    weight_seed: int
    topology_seed: int | None = None
    r: float | None = None
    gamma: float | None = None
    sparsity: float = 0.0

    def __post_init__(self) -> None:
        if self.family not in GRAPH_FAMILIES:
            raise ValueError(f"unknown graph family {self.family!r}")
        if not 0.0 <= self.sparsity <= 1.0:
            raise ValueError(f"sparsity must be in [0,1], got {self.sparsity}")
        if self.family == "wheel":
            if self.r is None:
                raise ValueError("wheel graphs require r")
        elif self.r is not None:
            raise ValueError(f"r is only valid for wheel graphs, not {self.family}")
        if self.family == "scale_free":
            if self.gamma is None:
                raise ValueError("scale_free graphs require gamma")
            if self.topology_seed is None:
                raise ValueError("scale_free graphs require topology_seed")
        elif self.gamma is not None:
            raise ValueError("gamma is only valid for scale_free graphs")


def generate_grid(n: int, weight_seed: Seed) -> WeightedGraph:
    """n-by-n 4-neighbor lattice, weights i.i.d. Uniform[0,1].

    Nodes are row-major: node (i,j) has id ``i*n + j``. There are ``n**2``
    nodes and ``2*n*(n-1)`` edges.
    """
    if n < 2:
        raise ValueError(f"grid size must be >= 2, got {n}")
    edges: list[tuple[int, int]] = []
    for i in range(n):
        for j in range(n):
            u = i * n + j
            if j + 1 < n:
                edges.append((u, u + 1))
            if i + 1 < n:
                edges.append((u, u + n))
    edges.sort()
    weights = generator(weight_seed).random(len(edges))
    return WeightedGraph(
        n * n, tuple((u, v, float(w)) for (u, v), w in zip(edges, weights))
    )


def generate_wheel(n: int, r: float, weight_seed: Seed) -> WeightedGraph:
    """Hub-and-rim wheel on ``n`` nodes; node 0 is the hub.

    Nodes 1..n-1 form a cycle. Circumference weights are Uniform[0,1];
    spoke weights Uniform[0,r], realized as r times a Uniform[0,1] draw so
    the stream layout is one draw per edge in canonical order.
    """
    if n < 4:
        raise ValueError(f"wheel needs >= 4 nodes, got {n}")
    if r < 1.0:
        raise ValueError(f"spoke ratio r must be >= 1, got {r}")
    edges = [(0, k) for k in range(1, n)]
    edges += [(k, k + 1) for k in range(1, n - 1)]
    edges.append((1, n - 1))
    edges.sort()
    base = generator(weight_seed).random(len(edges))
    weighted = []
    for (u, v), x in zip(edges, base):
        scale = r if u == 0 else 1.0
        weighted.append((u, v, float(scale * x)))
    return WeightedGraph(n, tuple(weighted))


def _power_law_degrees(n: int, gamma: float, rng: np.random.Generator) -> np.ndarray:
    support = np.arange(1, n, dtype=np.int64)
    probs = support.astype(np.float64) ** (-gamma)
    probs /= probs.sum()
    degrees = rng.choice(support, size=n, p=probs)
    if degrees.sum() % 2 == 1:
        # force an even stub count: bump the lowest-index node with headroom
        for i in range(n):
            if degrees[i] < n - 1:
                degrees[i] += 1
                break
    return degrees


def generate_scale_free(
    n: int, gamma: float, topology_seed: Seed, weight_seed: Seed
) -> WeightedGraph:
    """Configuration-model graph over a power-law degree sequence.

    Degrees are drawn with P(d) proportional to d^-gamma on 1..n-1, stubs
    are paired uniformly, self-loops and parallel edges dropped, and the
    largest connected component kept with nodes relabeled 0..m-1 (m <= n).
    Weights are i.i.d. Uniform[0,1]. Degenerate draws (no usable edges)
    retry with a derived topology stream, up to 100 attempts.
    """
    if n < 3:
        raise ValueError(f"scale_free needs n >= 3, got {n}")
    if gamma <= 1.0:
        raise ValueError(f"power-law exponent must be > 1, got {gamma}")
    for attempt in range(100):
        rng = generator(substream(topology_seed, attempt))
        degrees = _power_law_degrees(n, gamma, rng)
        stubs = np.repeat(np.arange(n), degrees)
        rng.shuffle(stubs)
        pair_edges = {
            edge_key(int(a), int(b))
            for a, b in zip(stubs[0::2], stubs[1::2])
            if a != b
        }
        if not pair_edges:
            continue
        component = _largest_component(n, pair_edges)
        if len(component) < 2:
            continue
        relabel = {old: new for new, old in enumerate(sorted(component))}
        final_edges = sorted(
            edge_key(relabel[u], relabel[v])
            for u, v in pair_edges
            if u in relabel and v in relabel
        )
        weights = generator(weight_seed).random(len(final_edges))
        return WeightedGraph(
            len(component),
            tuple((u, v, float(w)) for (u, v), w in zip(final_edges, weights)),
        )
    raise ValueError(
        f"no usable scale-free graph after 100 attempts (n={n}, gamma={gamma})"
    )


def _largest_component(n: int, edges: set[tuple[int, int]]) -> set[int]:
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen: set[int] = set()
    best: set[int] = set()
    for start in sorted(adj):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in comp:
                    comp.add(v)
                    stack.append(v)
        seen |= comp
        # ties go to the component holding the smallest node id, which is
        # the one found first in the sorted start order
        if len(comp) > len(best):
            best = comp
    return best


def apply_sparsity(g: WeightedGraph, sparsity: float, seed: Seed) -> WeightedGraph:
    """Zero out exactly ``round(sparsity * |E|)`` uniformly chosen weights.

    Edges are zeroed, not removed, so connectivity is untouched.
    """
    if not 0.0 <= sparsity <= 1.0:
        raise ValueError(f"sparsity must be in [0,1], got {sparsity}")
    k = round(sparsity * g.edge_count)
    if k == 0:
        return g
    chosen = generator(seed).choice(g.edge_count, size=k, replace=False)
    zero = set(int(i) for i in chosen)
    weights = [0.0 if i in zero else w for i, (_, _, w) in enumerate(g.edges)]
    return g.with_weights(weights)


def build_graph(spec: GraphSpec) -> WeightedGraph:
    """Materialize a GraphSpec, including its sparsity post-pass."""
    if spec.family == "grid":
        g = generate_grid(spec.n, spec.weight_seed)
    elif spec.family == "wheel":
        g = generate_wheel(spec.n, spec.r, spec.weight_seed)
    else:
        g = generate_scale_free(
            spec.n, spec.gamma, spec.topology_seed, spec.weight_seed
        )
    if spec.sparsity > 0.0:
        g = apply_sparsity(g, spec.sparsity, substream(spec.weight_seed, SPARSITY_STREAM))
    return g
