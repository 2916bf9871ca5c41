"""Lattice-to-random spatial construction and the two-partition scenario.

A square lattice is built first; then each node, in ascending id order, is
relocated with probability ``p`` to a uniform position in the field and
reconnected to every node in range. Relocations that leave the node
isolated are redrawn; relocations that disconnect the graph are undone.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .graph_core import EdgeKind, GraphError, SpatialGraph
from .seeding import make_rng, seed_for

DEFAULT_TR = 50.0
DEFAULT_SPACING = 36.0
DEFAULT_MAX_TRIES = 100
DEFAULT_P_STEPS = 21
DEFAULT_RUNS = 20

# Seed streams for the partition scenario; the p sweep uses its p-index as stream.
STREAM_PARTITION = 10_000


def default_p_values(steps: int = DEFAULT_P_STEPS) -> list[float]:
    if steps < 2:
        raise ValueError("need at least two p steps")
    return [i / (steps - 1) for i in range(steps)]


@dataclass(frozen=True)
class Field:
    """Axis-aligned rectangle that relocated nodes are drawn from."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self) -> None:
        vals = (self.xmin, self.ymin, self.xmax, self.ymax)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"field bounds must be finite: {vals}")
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError(f"field is degenerate: {vals}")

    def sample(self, rng: random.Random) -> tuple[float, float]:
        return rng.uniform(self.xmin, self.xmax), rng.uniform(self.ymin, self.ymax)


@dataclass(frozen=True)
class LatticeSpec:
    rows: int = 10
    cols: int = 10
    spacing: float = DEFAULT_SPACING

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"lattice needs rows, cols >= 1, got {self.rows}x{self.cols}")
        if not (math.isfinite(self.spacing) and self.spacing > 0):
            raise ValueError(f"lattice spacing must be positive, got {self.spacing!r}")

    @property
    def n(self) -> int:
        return self.rows * self.cols

    def default_field(self) -> Field:
        """The lattice bounding box.

        A side of zero length (single row or column) is widened to one
        spacing so the field stays two-dimensional.
        """
        width = (self.cols - 1) * self.spacing
        height = (self.rows - 1) * self.spacing
        x0, x1 = (0.0, width) if width > 0 else (-self.spacing / 2, self.spacing / 2)
        y0, y1 = (0.0, height) if height > 0 else (-self.spacing / 2, self.spacing / 2)
        return Field(x0, y0, x1, y1)


@dataclass(frozen=True)
class ConstructionParams:
    p: float
    tr: float
    field: Field
    max_tries: int = DEFAULT_MAX_TRIES

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p!r}")
        if not (math.isfinite(self.tr) and self.tr > 0):
            raise ValueError(f"tr must be positive, got {self.tr!r}")
        if self.max_tries < 1:
            raise ValueError(f"max_tries must be positive, got {self.max_tries!r}")


def build_lattice(spec: LatticeSpec, tr: float = DEFAULT_TR) -> SpatialGraph:
    """Square lattice with node ``r * cols + c`` at ``(c * spacing, r * spacing)``.

    Every in-range pair is joined, so for ``spacing`` in ``(tr/sqrt(2), tr]``
    this is the 4-neighbor grid.
    """
    g = SpatialGraph(tr)
    for r in range(spec.rows):
        for c in range(spec.cols):
            g.add_node(c * spec.spacing, r * spec.spacing)
    for v in g.nodes():
        for u in range(v + 1, g.n):
            if g.in_range(u, v):
                g.add_edge(v, u, EdgeKind.SPATIAL)
    return g


def _restore(g: SpatialGraph, v: int, pos: tuple[float, float], edges) -> None:
    g.detach(v)
    g.move_node(v, *pos)
    for u, kind in edges:
        g.add_edge(v, u, kind)


def relocate_sweep(g: SpatialGraph, params: ConstructionParams, rng: random.Random) -> SpatialGraph:
    """One randomizing pass over ``g``; returns a new graph, ``g`` is untouched.

    The output is always connected and, unless it is a single node, has no
    isolated nodes.
    """
    if g.n == 0:
        raise GraphError("cannot relocate nodes of an empty graph")
    if not g.is_connected():
        raise GraphError("relocation requires a connected input graph")
    if g.num_edges(EdgeKind.BYPASS):
        raise GraphError("relocation operates on purely spatial graphs")
    if g.tr != params.tr:
        raise ValueError(f"graph tr={g.tr} does not match params tr={params.tr}")

    out = g.copy()
    for v in out.nodes():
        if rng.random() >= params.p:
            continue
        old_pos = out.position(v)
        old_edges = out.detach(v)
        for _ in range(params.max_tries):
            out.move_node(v, *params.field.sample(rng))
            if out.connect_in_range(v):
                break
        else:
            _restore(out, v, old_pos, old_edges)
            continue
        if not out.is_connected():
            _restore(out, v, old_pos, old_edges)
    return out


def construct_family(
    spec: LatticeSpec,
    tr: float,
    p_values: Sequence[float],
    runs: int,
    master_seed: int,
    field: Field | None = None,
    max_tries: int = DEFAULT_MAX_TRIES,
) -> list[tuple[float, int, SpatialGraph]]:
    """Build ``runs`` graphs per ``p``, each from a fresh lattice.

    Trial ``(i, run)`` draws from ``seed_for(master_seed, i, run)`` where
    ``i`` is the index of ``p`` in ``p_values``.
    """
    if runs < 1:
        raise ValueError(f"runs must be positive, got {runs!r}")
    field = field or spec.default_field()
    lattice = build_lattice(spec, tr)
    family = []
    for i, p in enumerate(p_values):
        params = ConstructionParams(p=p, tr=tr, field=field, max_tries=max_tries)
        for run in range(runs):
            rng = make_rng(seed_for(master_seed, i, run))
            family.append((p, run, relocate_sweep(lattice, params, rng)))
    return family


@dataclass
class PartitionScenario:
    """Two disjoint ad hoc partitions, separated by more than ``tr``.

    ``left`` and ``right`` keep their own ids ``0..n-1``; in :meth:`joined`
    the left nodes keep their ids and the right ones are offset by
    ``len(left)``.
    """

    left: SpatialGraph
    right: SpatialGraph
    gap: float
    _joined: SpatialGraph = field(init=False, repr=False)

    def __post_init__(self) -> None:
        tr = self.left.tr
        if self.right.tr != tr:
            raise GraphError("partitions must share one transmission range")
        if not self.gap > tr:
            raise GraphError(f"gap {self.gap} must exceed tr {tr}")
        if not (self.left.is_connected() and self.right.is_connected()):
            raise GraphError("each partition must be connected")
        g = SpatialGraph(tr, self.left.positions + self.right.positions)
        off = self.left.n
        for u, v, kind in self.left.edges():
            g.add_edge(u, v, kind)
        for u, v, kind in self.right.edges():
            g.add_edge(u + off, v + off, kind)
        for u in self.left_ids:
            for v in self.right_ids:
                if g.in_range(u, v):
                    raise GraphError(f"nodes {u} and {v} of different partitions are in range")
        self._joined = g

    @property
    def tr(self) -> float:
        return self.left.tr

    @property
    def left_ids(self) -> range:
        return range(self.left.n)

    @property
    def right_ids(self) -> range:
        return range(self.left.n, self.left.n + self.right.n)

    @property
    def n_cross_pairs(self) -> int:
        return self.left.n * self.right.n

    def joined(self) -> SpatialGraph:
        """Both partitions in one graph, no bypass links. A fresh copy each call."""
        return self._joined.copy()


def _translated(g: SpatialGraph, dx: float) -> SpatialGraph:
    out = SpatialGraph(g.tr, [(p.x + dx, p.y) for p in g.positions])
    for u, v, kind in g.edges():
        out.add_edge(u, v, kind)
    return out


def build_partition_pair(
    spec: LatticeSpec,
    tr: float = DEFAULT_TR,
    gap: float = 3 * DEFAULT_TR,
    master_seed: int = 0,
    field: Field | None = None,
    max_tries: int = DEFAULT_MAX_TRIES,
) -> PartitionScenario:
    """Two independent ``p = 1`` constructions placed side by side.

    The right partition is shifted along x so the bounding boxes of the
    two node sets are exactly ``gap`` apart.
    """
    if not gap > tr:
        raise GraphError(f"gap {gap} must exceed tr {tr}; cross links would not be bypass links")
    params = ConstructionParams(p=1.0, tr=tr, field=field or spec.default_field(), max_tries=max_tries)
    lattice = build_lattice(spec, tr)
    left = relocate_sweep(lattice, params, make_rng(seed_for(master_seed, STREAM_PARTITION, 0)))
    right = relocate_sweep(lattice, params, make_rng(seed_for(master_seed, STREAM_PARTITION, 1)))
    left_xmax = max(p.x for p in left.positions)
    right_xmin = min(p.x for p in right.positions)
    right = _translated(right, left_xmax + gap - right_xmin)
    return PartitionScenario(left, right, gap)
