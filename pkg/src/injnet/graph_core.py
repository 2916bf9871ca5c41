"""Spatially embedded undirected graph with spatial and bypass edges.

Nodes are dense integer ids starting at 0, each carrying a 2D position.
Edges come in two kinds: ``SPATIAL`` links between nodes within
transmission range of each other, and ``BYPASS`` links between nodes that
are strictly out of range. Both kinds count as one hop.
"""

from __future__ import annotations

import math
from collections import deque
from enum import Enum
from typing import Iterable, Iterator, NamedTuple


class GraphError(ValueError):
    """Raised when an operation would violate a graph invariant."""


class UnknownNodeError(GraphError, KeyError):
    """Raised for node ids that are not part of the graph."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown node"


class EdgeKind(Enum):
    SPATIAL = "spatial"
    BYPASS = "bypass"


class Point2D(NamedTuple):
    x: float
    y: float


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class SpatialGraph:
    """Undirected graph whose nodes live in the plane.

    Args:
        tr: Transmission range. Two nodes at distance ``<= tr`` are in each
            other's spatial neighborhood.
        positions: Optional initial node positions; node ``i`` gets
            ``positions[i]``.
    """

    def __init__(self, tr: float, positions: Iterable[tuple[float, float]] = ()):
        if not (math.isfinite(tr) and tr > 0):
            raise GraphError(f"transmission range must be positive, got {tr!r}")
        self.tr = float(tr)
        self._pos: list[Point2D] = []
        self._adj: list[set[int]] = []
        self._kind: dict[tuple[int, int], EdgeKind] = {}
        for x, y in positions:
            self.add_node(x, y)

    # -- nodes -------------------------------------------------------------

    def add_node(self, x: float, y: float) -> int:
        """Append a node at ``(x, y)`` and return its id."""
        x, y = float(x), float(y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise GraphError(f"node coordinates must be finite, got ({x!r}, {y!r})")
        self._pos.append(Point2D(x, y))
        self._adj.append(set())
        return len(self._pos) - 1

    def __len__(self) -> int:
        return len(self._pos)

    @property
    def n(self) -> int:
        return len(self._pos)

    def nodes(self) -> range:
        return range(len(self._pos))

    def _check(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < len(self._pos)):
            raise UnknownNodeError(f"unknown node id {v!r}")

    def position(self, v: int) -> Point2D:
        self._check(v)
        return self._pos[v]

    @property
    def positions(self) -> list[Point2D]:
        return list(self._pos)

    def move_node(self, v: int, x: float, y: float) -> None:
        """Place ``v`` at a new position. ``v`` must have no incident edges."""
        self._check(v)
        if self._adj[v]:
            raise GraphError(f"node {v} must be detached before moving")
        x, y = float(x), float(y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise GraphError(f"node coordinates must be finite, got ({x!r}, {y!r})")
        self._pos[v] = Point2D(x, y)

    # -- geometry ----------------------------------------------------------

    def euclidean_distance(self, u: int, v: int) -> float:
        self._check(u)
        self._check(v)
        a, b = self._pos[u], self._pos[v]
        return math.hypot(a.x - b.x, a.y - b.y)

    def in_range(self, u: int, v: int) -> bool:
        return self.euclidean_distance(u, v) <= self.tr

    def spatial_neighborhood(self, v: int) -> set[int]:
        """Nodes other than ``v`` within transmission range, edges ignored."""
        self._check(v)
        return {u for u in self.nodes() if u != v and self.in_range(u, v)}

    # -- edges -------------------------------------------------------------

    def add_edge(self, u: int, v: int, kind: EdgeKind = EdgeKind.SPATIAL) -> None:
        self._check(u)
        self._check(v)
        if u == v:
            raise GraphError(f"self-loop on node {u}")
        key = _edge_key(u, v)
        if key in self._kind:
            raise GraphError(f"duplicate edge {key}")
        kind = EdgeKind(kind)
        d = self.euclidean_distance(u, v)
        if kind is EdgeKind.SPATIAL and d > self.tr:
            raise GraphError(
                f"spatial edge {key} spans {d:g} > tr={self.tr:g}: endpoints out of range"
            )
        if kind is EdgeKind.BYPASS and d <= self.tr:
            raise GraphError(
                f"bypass edge {key}: endpoints share a spatial neighborhood "
                f"(distance {d:g} <= tr={self.tr:g})"
            )
        self._kind[key] = kind
        self._adj[u].add(v)
        self._adj[v].add(u)

    def remove_edge(self, u: int, v: int) -> EdgeKind:
        key = _edge_key(u, v)
        try:
            kind = self._kind.pop(key)
        except KeyError:
            raise GraphError(f"no edge {key}") from None
        self._adj[u].discard(v)
        self._adj[v].discard(u)
        return kind

    def detach(self, v: int) -> list[tuple[int, EdgeKind]]:
        """Remove every edge incident to ``v``; return what was removed."""
        self._check(v)
        removed = [(u, self._kind[_edge_key(u, v)]) for u in sorted(self._adj[v])]
        for u, _ in removed:
            self.remove_edge(u, v)
        return removed

    def has_edge(self, u: int, v: int) -> bool:
        return _edge_key(u, v) in self._kind

    def edge_kind(self, u: int, v: int) -> EdgeKind:
        try:
            return self._kind[_edge_key(u, v)]
        except KeyError:
            raise GraphError(f"no edge {_edge_key(u, v)}") from None

    def neighbors(self, v: int) -> set[int]:
        """Adjacent nodes (either edge kind). Returns the live set; do not mutate."""
        self._check(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        self._check(v)
        return len(self._adj[v])

    def edges(self, kind: EdgeKind | None = None) -> list[tuple[int, int, EdgeKind]]:
        """Edges as ``(u, v, kind)`` with ``u < v``, sorted."""
        return sorted(
            (u, v, k) for (u, v), k in self._kind.items() if kind is None or k is kind
        )

    def num_edges(self, kind: EdgeKind | None = None) -> int:
        if kind is None:
            return len(self._kind)
        return sum(1 for k in self._kind.values() if k is kind)

    def connect_in_range(self, v: int) -> int:
        """Add spatial edges from ``v`` to every in-range node lacking one.

        Returns the number of edges added.
        """
        added = 0
        for u in sorted(self.spatial_neighborhood(v)):
            if not self.has_edge(u, v):
                self.add_edge(u, v, EdgeKind.SPATIAL)
                added += 1
        return added

    # -- traversal ---------------------------------------------------------

    def bfs_distances(self, source: int) -> list[int | None]:
        """Hop counts from ``source``; ``None`` marks unreachable nodes.

        Spatial and bypass edges both cost one hop.
        """
        self._check(source)
        dist: list[int | None] = [None] * len(self._pos)
        dist[source] = 0
        queue = deque([source])
        adj = self._adj
        while queue:
            u = queue.popleft()
            du = dist[u] + 1  # type: ignore[operator]
            for w in adj[u]:
                if dist[w] is None:
                    dist[w] = du
                    queue.append(w)
        return dist

    def is_connected(self) -> bool:
        if not self._pos:
            raise GraphError("connectivity is undefined for an empty graph")
        return all(d is not None for d in self.bfs_distances(0))

    def average_degree(self) -> float:
        if not self._pos:
            raise GraphError("average degree is undefined for an empty graph")
        return 2 * len(self._kind) / len(self._pos)

    # -- misc --------------------------------------------------------------

    def copy(self) -> SpatialGraph:
        g = SpatialGraph.__new__(SpatialGraph)
        g.tr = self.tr
        g._pos = list(self._pos)
        g._adj = [set(s) for s in self._adj]
        g._kind = dict(self._kind)
        return g

    def __iter__(self) -> Iterator[int]:
        return iter(self.nodes())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpatialGraph):
            return NotImplemented
        return self.tr == other.tr and self._pos == other._pos and self._kind == other._kind

    def __repr__(self) -> str:
        return (
            f"SpatialGraph(n={self.n}, spatial={self.num_edges(EdgeKind.SPATIAL)}, "
            f"bypass={self.num_edges(EdgeKind.BYPASS)}, tr={self.tr:g})"
        )


def euclidean_distance(g: SpatialGraph, u: int, v: int) -> float:
    return g.euclidean_distance(u, v)


def spatial_neighborhood(g: SpatialGraph, v: int) -> set[int]:
    return g.spatial_neighborhood(v)


def bfs_distances(g: SpatialGraph, source: int) -> list[int | None]:
    return g.bfs_distances(source)


def is_connected(g: SpatialGraph) -> bool:
    return g.is_connected()


def average_degree(g: SpatialGraph) -> float:
    return g.average_degree()
