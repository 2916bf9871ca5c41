"""Small-world metrics: clustering coefficient, characteristic path length,
random-graph baselines and the small-world verdict.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .graph_core import EdgeKind, GraphError, SpatialGraph

LMode = Literal["node-mean", "pairwise-median"]
L_MODES: tuple[str, ...] = ("node-mean", "pairwise-median")

# Hop count standing in for "unreachable" inside distance matrices. Large
# enough to never be a real hop count, small enough that UNREACHABLE * 2 + 1
# stays far inside int64.
UNREACHABLE = 1 << 40


class DisconnectedGraphError(GraphError):
    """Path length is only defined for connected graphs."""


@dataclass(frozen=True)
class MetricsRecord:
    n: int
    k: float
    gamma: float
    L: float
    L_norm: float | None = None

    def normalized(self, reference: float) -> MetricsRecord:
        if not reference > 0:
            raise ValueError(f"normalization reference must be positive, got {reference!r}")
        return replace(self, L_norm=self.L / reference)


# -- clustering ------------------------------------------------------------


def local_clustering(g: SpatialGraph, v: int) -> float:
    """Fraction of possible links among the neighbors of ``v`` that exist.

    Nodes with fewer than two neighbors get 0.
    """
    nbrs = sorted(g.neighbors(v))
    kv = len(nbrs)
    if kv <= 1:
        return 0.0
    links = 0
    for i, a in enumerate(nbrs):
        adj_a = g.neighbors(a)
        for b in nbrs[i + 1 :]:
            if b in adj_a:
                links += 1
    return links / (kv * (kv - 1) / 2)


def clustering_coefficient(g: SpatialGraph, include_low_degree: bool = True) -> float:
    """Mean local clustering over all nodes.

    With ``include_low_degree=False`` nodes of degree 0 or 1 are left out of
    the average instead of contributing 0.
    """
    if g.n == 0:
        raise GraphError("clustering coefficient is undefined for an empty graph")
    return _mean_local(
        [local_clustering(g, v) for v in g.nodes()],
        [g.degree(v) for v in g.nodes()],
        include_low_degree,
    )


def _mean_local(values: list[float], degrees: list[int], include_low_degree: bool) -> float:
    if not include_low_degree:
        values = [c for c, d in zip(values, degrees) if d >= 2]
        if not values:
            return 0.0
    return math.fsum(values) / len(values)


# -- path length -----------------------------------------------------------


def hop_matrix(g: SpatialGraph) -> np.ndarray:
    """All-pairs hop counts as an ``(n, n)`` int64 array.

    Unreachable pairs hold :data:`UNREACHABLE`.
    """
    n = g.n
    hops = np.full((n, n), UNREACHABLE, dtype=np.int64)
    for s in g.nodes():
        row = g.bfs_distances(s)
        hops[s] = [UNREACHABLE if d is None else d for d in row]
    return hops


def hops_with_edge(hops: np.ndarray, u: int, v: int) -> np.ndarray:
    """Hop matrix after inserting the unit edge ``(u, v)``.

    Any new shortest path uses the edge at most once, so one relaxation
    through it in each direction is exact.
    """
    via_uv = hops[:, u, None] + 1 + hops[None, v, :]
    via_vu = hops[:, v, None] + 1 + hops[None, u, :]
    out = np.minimum(hops, np.minimum(via_uv, via_vu))
    np.minimum(out, UNREACHABLE, out=out)
    return out


def path_length_from_hops(hops: np.ndarray, mode: LMode = "node-mean") -> float:
    """Characteristic path length of a precomputed hop matrix.

    ``node-mean``: median over nodes of each node's mean hop distance to all
    other nodes. ``pairwise-median``: median of all ``n(n-1)/2`` pairwise
    hop distances.
    """
    n = hops.shape[0]
    if n < 2:
        raise GraphError("path length needs at least two nodes")
    if (hops >= UNREACHABLE).any():
        raise DisconnectedGraphError("L is only defined for fully connected graphs")
    if mode == "node-mean":
        sums = hops.sum(axis=1).tolist()
        return statistics.median(s / (n - 1) for s in sums)
    if mode == "pairwise-median":
        iu = np.triu_indices(n, k=1)
        return float(statistics.median(hops[iu].tolist()))
    raise ValueError(f"unknown L mode {mode!r}; expected one of {L_MODES}")


def characteristic_path_length(g: SpatialGraph, mode: LMode = "node-mean") -> float:
    if g.n < 2:
        raise GraphError("path length needs at least two nodes")
    return path_length_from_hops(hop_matrix(g), mode)


# -- baselines & verdict ---------------------------------------------------


def gamma_random(n: int, k: float) -> float:
    """Expected clustering of a random graph with ``n`` nodes and mean degree ``k``."""
    if n <= 0:
        raise ValueError(f"node count must be positive, got {n!r}")
    return k / n


def l_random(n: int, k: float) -> float:
    """Random-graph path length approximation ``ln(n) / ln(k)``.

    Only meaningful for ``1 < k << n``.
    """
    if n < 2:
        raise ValueError(f"need at least two nodes, got {n!r}")
    if not k > 1:
        raise ValueError(f"ln(n)/ln(k) is undefined for k <= 1, got k={k!r}")
    return math.log(n) / math.log(k)


def measure(
    g: SpatialGraph, mode: LMode = "node-mean", include_low_degree: bool = True
) -> MetricsRecord:
    return MetricsRecord(
        n=g.n,
        k=g.average_degree(),
        gamma=clustering_coefficient(g, include_low_degree),
        L=characteristic_path_length(g, mode),
    )


def verdict_for(record: MetricsRecord, alpha: float = 5.0, beta: float = 2.0) -> bool:
    if not alpha > 1:
        raise ValueError(f"alpha must exceed 1, got {alpha!r}")
    if not beta >= 1:
        raise ValueError(f"beta must be at least 1, got {beta!r}")
    if record.k <= 1:
        # ln(n)/ln(k) has no value here; such sparse graphs are not small worlds
        return False
    clustered = record.gamma >= alpha * gamma_random(record.n, record.k)
    short = record.L <= beta * l_random(record.n, record.k)
    return clustered and short


def small_world_verdict(
    g: SpatialGraph, alpha: float = 5.0, beta: float = 2.0, mode: LMode = "node-mean"
) -> tuple[bool, MetricsRecord]:
    """Decide whether ``g`` is a small world relative to a random graph.

    True iff ``gamma >= alpha * k/n`` and ``L <= beta * ln(n)/ln(k)``.
    Returns the verdict together with the measurements it was based on.
    """
    record = measure(g, mode)
    return verdict_for(record, alpha, beta), record


# -- incremental tracking --------------------------------------------------


class MetricsTracker:
    """Keeps hop matrix and local clustering in sync with edge insertions.

    Inserting ``(u, v)`` only changes local clustering of ``u``, ``v`` and
    their common neighbors, and the hop matrix is updated by a single
    relaxation, so each insertion costs ``O(n^2)`` instead of a full
    all-pairs BFS.
    """

    def __init__(self, g: SpatialGraph, mode: LMode = "node-mean", include_low_degree: bool = True):
        if mode not in L_MODES:
            raise ValueError(f"unknown L mode {mode!r}; expected one of {L_MODES}")
        self.graph = g
        self.mode = mode
        self.include_low_degree = include_low_degree
        self.hops = hop_matrix(g)
        self.local = [local_clustering(g, v) for v in g.nodes()]

    def _affected(self, u: int, v: int) -> set[int]:
        return {u, v} | (self.graph.neighbors(u) & self.graph.neighbors(v))

    def _record(self, hops: np.ndarray, local: list[float]) -> MetricsRecord:
        g = self.graph
        return MetricsRecord(
            n=g.n,
            k=g.average_degree(),
            gamma=_mean_local(local, [g.degree(w) for w in g.nodes()], self.include_low_degree),
            L=path_length_from_hops(hops, self.mode),
        )

    def add_edge(self, u: int, v: int, kind: EdgeKind = EdgeKind.BYPASS) -> None:
        self.graph.add_edge(u, v, kind)
        self.hops = hops_with_edge(self.hops, u, v)
        for w in self._affected(u, v):
            self.local[w] = local_clustering(self.graph, w)

    def probe_edge(self, u: int, v: int, kind: EdgeKind = EdgeKind.BYPASS) -> MetricsRecord:
        """Metrics of the graph with ``(u, v)`` present; the graph is left unchanged."""
        self.graph.add_edge(u, v, kind)
        try:
            local = list(self.local)
            for w in self._affected(u, v):
                local[w] = local_clustering(self.graph, w)
            return self._record(hops_with_edge(self.hops, u, v), local)
        finally:
            self.graph.remove_edge(u, v)

    def snapshot(self) -> MetricsRecord:
        return self._record(self.hops, self.local)
