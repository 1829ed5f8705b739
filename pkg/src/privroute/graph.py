"""Weighted undirected graphs, shortest paths, and simple-path enumeration.

Graphs are immutable: node ids are ``0..node_count-1``, edges are unordered
pairs with non-negative float weights, no self-loops, no parallel edges.
All operations here are pure functions and safe to call concurrently.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterable, Iterator, Sequence


class TopologyMismatchError(ValueError):
    """A path references an edge the graph does not contain."""


class DisconnectedPairError(ValueError):
    """No path exists between the requested nodes."""


def edge_key(u: int, v: int) -> tuple[int, int]:
    """Canonical unordered form of an edge: smaller node id first."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with non-negative edge weights.

    ``edges`` is stored canonically: each edge as ``(u, v, w)`` with
    ``u < v``, sorted by ``(u, v)``. Any iterable of edges may be passed to
    the constructor; it is normalized and validated.
    """

    node_count: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise ValueError(f"node_count must be >= 1, got {self.node_count}")
        canonical = []
        for u, v, w in self.edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"edge ({u},{v}) outside 0..{self.node_count - 1}")
            w = float(w)
            if not w >= 0.0:
                raise ValueError(f"edge ({u},{v}) has negative or NaN weight {w}")
            a, b = edge_key(u, v)
            canonical.append((a, b, w))
        canonical.sort()
        for (a1, b1, _), (a2, b2, _) in zip(canonical, canonical[1:]):
            if (a1, b1) == (a2, b2):
                raise ValueError(f"parallel edge ({a1},{b1})")
        object.__setattr__(self, "edges", tuple(canonical))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, float], ...], ...]:
        """Per-node ``(neighbor, weight)`` lists, neighbors ascending."""
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.node_count)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        for nbrs in adj:
            nbrs.sort()
        return tuple(tuple(nbrs) for nbrs in adj)

    @cached_property
    def weight_by_edge(self) -> dict[tuple[int, int], float]:
        return {(u, v): w for u, v, w in self.edges}

    def weight(self, u: int, v: int) -> float:
        try:
            return self.weight_by_edge[edge_key(u, v)]
        except KeyError:
            raise TopologyMismatchError(f"no edge ({u},{v}) in graph") from None

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.weight_by_edge

    @property
    def mean_weight(self) -> float:
        if not self.edges:
            raise ValueError("graph has no edges")
        return sum(w for _, _, w in self.edges) / len(self.edges)

    def is_connected(self) -> bool:
        if self.node_count == 1:
            return True
        seen = {0}
        stack = [0]
        adj = self.adjacency
        while stack:
            u = stack.pop()
            for v, _ in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.node_count

    def with_weights(self, weights: Sequence[float]) -> "WeightedGraph":
        """Same topology with replaced weights, in canonical edge order."""
        if len(weights) != len(self.edges):
            raise ValueError("weight vector length does not match edge count")
        return WeightedGraph(
            self.node_count,
            tuple((u, v, float(w)) for (u, v, _), w in zip(self.edges, weights)),
        )

    def _validate_node(self, node: int, name: str) -> None:
        if not (isinstance(node, int) and 0 <= node < self.node_count):
            raise ValueError(f"{name}={node!r} is not a valid node id")


@dataclass(frozen=True)
class Path:
    """Simple path given by its node sequence (>= 2 distinct nodes)."""

    nodes: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.nodes) < 2:
            raise ValueError("a path needs at least two nodes")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError(f"repeated node in path {self.nodes}")

    @property
    def source(self) -> int:
        return self.nodes[0]

    @property
    def target(self) -> int:
        return self.nodes[-1]

    @property
    def edge_count(self) -> int:
        return len(self.nodes) - 1

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(edge_key(a, b) for a, b in zip(self.nodes, self.nodes[1:]))

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def reversed(self) -> "Path":
        return Path(tuple(reversed(self.nodes)))


@dataclass(frozen=True)
class PathEnsemble:
    """Collection of simple paths between one node pair.

    ``truncated=False`` asserts the collection is *all* simple paths from
    source to target; analytics that need the complete set must check it.
    """

    source: int
    target: int
    paths: tuple[Path, ...]
    truncated: bool

    def __post_init__(self) -> None:
        seen = set()
        for p in self.paths:
            if p.source != self.source or p.target != self.target:
                raise ValueError("ensemble path endpoints do not match")
            if p.nodes in seen:
                raise ValueError("duplicate path in ensemble")
            seen.add(p.nodes)

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self) -> Iterator[Path]:
        return iter(self.paths)


@dataclass(frozen=True)
class EnumerationLimits:
    """Caps for simple-path enumeration. ``max_hops=None`` means no hop cap."""

    max_paths: int = 10_000
    max_hops: int | None = None


def path_weight(g: WeightedGraph, p: Path) -> float:
    """Total weight of ``p`` under ``g``'s weights.

    ``p`` may come from another graph with the same topology; this is how a
    route chosen on a privatized graph gets costed on the true one.
    Summation is sequential along the path so the result is bit-identical
    to the Dijkstra accumulation for the same node sequence.
    """
    wbe = g.weight_by_edge
    total = 0.0
    try:
        for e in p.edges:
            total += wbe[e]
    except KeyError:
        raise TopologyMismatchError(f"path edge {e} missing from graph") from None
    return total


def gap(g: WeightedGraph, p: Path, p_star: Path) -> float:
    """Weight difference ``w(p) - w(p_star)``; >= 0 when p_star is optimal."""
    return path_weight(g, p) - path_weight(g, p_star)


def sym_diff_size(p1: Path, p2: Path) -> int:
    """Number of edges in exactly one of the two paths."""
    return len(p1.edge_set ^ p2.edge_set)


class ShortestPathTree:
    """Single-source shortest paths with deterministic tie-breaking.

    Among equal-weight shortest paths the lexicographically smallest node
    sequence wins. This matters once zero-weight edges exist (sparsity,
    clamped noise), where ties occur with positive probability.
    """

    __slots__ = ("source", "_settled")

    def __init__(self, source: int, settled: dict[int, tuple[float, tuple[int, ...]]]):
        self.source = source
        self._settled = settled

    def reaches(self, target: int) -> bool:
        return target in self._settled

    def distance(self, target: int) -> float:
        try:
            return self._settled[target][0]
        except KeyError:
            raise DisconnectedPairError(
                f"node {target} unreachable from {self.source}"
            ) from None

    def path(self, target: int) -> Path:
        try:
            return Path(self._settled[target][1])
        except KeyError:
            raise DisconnectedPairError(
                f"node {target} unreachable from {self.source}"
            ) from None


def shortest_path_tree(
    g: WeightedGraph, source: int, stop_at: int | None = None
) -> ShortestPathTree:
    """Dijkstra over priorities ``(distance, node sequence)``.

    Extending a path never lowers its priority (weights are non-negative and
    appending to a sequence is lexicographically increasing), so the usual
    settling argument applies to the combined order and each settled node
    carries the lexicographically smallest minimum-weight path.
    """
    g._validate_node(source, "source")
    adj = g.adjacency
    n = g.node_count
    settled: dict[int, tuple[float, tuple[int, ...]]] = {}
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, (source,))]
    push, pop = heapq.heappush, heapq.heappop
    while heap:
        dist, seq = pop(heap)
        u = seq[-1]
        if u in settled:
            continue
        settled[u] = (dist, seq)
        if u == stop_at or len(settled) == n:
            break
        for v, w in adj[u]:
            if v not in settled:
                push(heap, (dist + w, seq + (v,)))
    return ShortestPathTree(source, settled)


def shortest_path(g: WeightedGraph, source: int, target: int) -> Path:
    """Minimum-weight path, ties broken by smallest node sequence."""
    g._validate_node(source, "source")
    g._validate_node(target, "target")
    if source == target:
        raise ValueError("source and target must differ")
    tree = shortest_path_tree(g, source, stop_at=target)
    return tree.path(target)


def distances_from(g: WeightedGraph, source: int) -> list[float]:
    """Distance-only Dijkstra; ``inf`` marks unreachable nodes.

    Settled distances are independent of tie-breaking, so this matches
    :func:`shortest_path_tree` float-for-float while skipping the sequence
    bookkeeping.
    """
    g._validate_node(source, "source")
    adj = g.adjacency
    dist = [float("inf")] * g.node_count
    done = [False] * g.node_count
    heap: list[tuple[float, int]] = [(0.0, source)]
    push, pop = heapq.heappush, heapq.heappop
    remaining = g.node_count
    while heap and remaining:
        d, u = pop(heap)
        if done[u]:
            continue
        done[u] = True
        dist[u] = d
        remaining -= 1
        for v, w in adj[u]:
            if not done[v]:
                push(heap, (d + w, v))
    return dist


def _simple_path_seqs(
    g: WeightedGraph, source: int, target: int, max_hops: int, pruned: list[bool]
) -> Iterator[tuple[int, ...]]:
    """Yield simple source->target node sequences in lexicographic order.

    Sets ``pruned[0]`` if the hop cap cut off any branch that might still
    have reached the target.
    """
    adj = g.adjacency
    path = [source]
    on_path = {source}
    iters = [iter(adj[source])]
    while iters:
        edges_used = len(path) - 1
        stepped = False
        for v, _w in iters[-1]:
            if v in on_path:
                continue
            if v == target:
                if edges_used + 1 > max_hops:
                    pruned[0] = True
                else:
                    yield tuple(path) + (v,)
                continue
            if edges_used + 2 > max_hops:
                # completing via v takes at least two more edges
                pruned[0] = True
                continue
            path.append(v)
            on_path.add(v)
            iters.append(iter(adj[v]))
            stepped = True
            break
        if not stepped:
            iters.pop()
            on_path.discard(path.pop())


def enumerate_paths(
    g: WeightedGraph,
    source: int,
    target: int,
    limits: EnumerationLimits = EnumerationLimits(),
) -> PathEnsemble:
    """Depth-first enumeration of all simple source->target paths.

    Emission order is lexicographic in the node sequence. Enumeration stops
    once ``max_paths`` paths are collected or the hop cap prunes a branch;
    either sets ``truncated=True``. A ``truncated=False`` result is the
    complete path set.
    """
    g._validate_node(source, "source")
    g._validate_node(target, "target")
    if source == target:
        raise ValueError("source and target must differ")
    max_hops = limits.max_hops if limits.max_hops is not None else g.node_count - 1
    pruned = [False]
    seqs: list[tuple[int, ...]] = []
    truncated = False
    for seq in _simple_path_seqs(g, source, target, max_hops, pruned):
        if len(seqs) == limits.max_paths:
            truncated = True
            break
        seqs.append(seq)
    else:
        truncated = pruned[0]
    return PathEnsemble(
        source=source,
        target=target,
        paths=tuple(Path(s) for s in seqs),
        truncated=truncated,
    )


# ----------------------------------------------------------------------------
# Text serialization: "n <count>" header then "e <u> <v> <weight>" lines,
# weights at 17 significant digits (float round-trip). '#' lines are comments.
# ----------------------------------------------------------------------------


def format_float(x: float) -> str:
    return f"{x:.17g}"


def write_graph(g: WeightedGraph, fh: IO[str], comments: Iterable[str] = ()) -> None:
    for line in comments:
        fh.write(f"# {line}\n")
    fh.write(f"n {g.node_count}\n")
    for u, v, w in g.edges:
        fh.write(f"e {u} {v} {format_float(w)}\n")


def read_graph(fh: IO[str]) -> WeightedGraph:
    node_count: int | None = None
    edges: list[tuple[int, int, float]] = []
    for lineno, raw in enumerate(fh, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "n" and len(parts) == 2:
            if node_count is not None:
                raise ValueError(f"line {lineno}: duplicate header")
            node_count = int(parts[1])
        elif parts[0] == "e" and len(parts) == 4:
            if node_count is None:
                raise ValueError(f"line {lineno}: edge before header")
            edges.append((int(parts[1]), int(parts[2]), float(parts[3])))
        else:
            raise ValueError(f"line {lineno}: unrecognized line {line!r}")
    if node_count is None:
        raise ValueError("missing 'n <node_count>' header")
    return WeightedGraph(node_count, tuple(edges))
