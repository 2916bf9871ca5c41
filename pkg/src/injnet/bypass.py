"""Bypass links between partitions and the link-placement experiments."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Collection, Iterable

from .construction import PartitionScenario
from .graph_core import EdgeKind, GraphError, SpatialGraph
from .metrics import LMode, MetricsRecord, MetricsTracker
from .seeding import make_rng, seed_for

# Seed stream for injection-point sampling; trial t uses seed_for(master, STREAM_PLACEMENT, t).
STREAM_PLACEMENT = 10_001

Pair = tuple[int, int]
SelectionStrategy = Callable[[PartitionScenario, random.Random, Collection[Pair]], Pair]


class PairSpaceExhausted(GraphError):
    """No cross-partition pair is left to choose from."""


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    u: int
    v: int
    metrics: MetricsRecord


@dataclass(frozen=True)
class GrowthRecord:
    b: int
    u: int
    v: int
    metrics: MetricsRecord


def injection_points(g: SpatialGraph) -> set[int]:
    """Endpoints of all bypass links in ``g``."""
    points: set[int] = set()
    for u, v, _ in g.edges(EdgeKind.BYPASS):
        points.update((u, v))
    return points


def sample_bypass_pair(
    scenario: PartitionScenario, rng: random.Random, exclude: Collection[Pair] = ()
) -> Pair:
    """Uniformly random ``(u, v)`` with ``u`` left, ``v`` right, not in ``exclude``.

    Ids are those of ``scenario.joined()``. Uses rejection sampling while
    most pairs are free and switches to drawing from the explicit list of
    free pairs once ``exclude`` covers half the pair space.
    """
    left, right = scenario.left_ids, scenario.right_ids
    total = len(left) * len(right)
    taken = sum(1 for u, v in exclude if u in left and v in right)
    if taken >= total:
        raise PairSpaceExhausted(f"all {total} cross-partition pairs are excluded")

    def pair_at(i: int) -> Pair:
        return left[i // len(right)], right[i % len(right)]

    if 2 * taken < total:
        while True:
            pair = pair_at(rng.randrange(total))
            if pair not in exclude:
                return pair
    free = [pair_at(i) for i in range(total) if pair_at(i) not in exclude]
    return free[rng.randrange(len(free))]


SELECTION_STRATEGIES: dict[str, SelectionStrategy] = {
    "uniform-random": sample_bypass_pair,
}


def _strategy(name: str) -> SelectionStrategy:
    try:
        return SELECTION_STRATEGIES[name]
    except KeyError:
        raise ValueError(
            f"unknown selection strategy {name!r}; known: {sorted(SELECTION_STRATEGIES)}"
        ) from None


def experiment_single_link(
    scenario: PartitionScenario,
    trials: int,
    master_seed: int,
    strategy: str = "uniform-random",
    mode: LMode = "node-mean",
) -> list[TrialRecord]:
    """Join the partitions with one bypass link per trial and measure.

    Trial ``t`` picks its pair with ``seed_for(master_seed, STREAM_PLACEMENT, t)``;
    the link is removed again before the next trial.
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials!r}")
    select = _strategy(strategy)
    tracker = MetricsTracker(scenario.joined(), mode)
    records = []
    for t in range(trials):
        rng = make_rng(seed_for(master_seed, STREAM_PLACEMENT, t))
        u, v = select(scenario, rng, frozenset())
        records.append(TrialRecord(t, u, v, tracker.probe_edge(u, v, EdgeKind.BYPASS)))
    return records


def replay_single_link_trial(
    scenario: PartitionScenario,
    trial: int,
    master_seed: int,
    strategy: str = "uniform-random",
    mode: LMode = "node-mean",
) -> TrialRecord:
    """Recompute one trial of :func:`experiment_single_link` from scratch."""
    from .metrics import measure

    rng = make_rng(seed_for(master_seed, STREAM_PLACEMENT, trial))
    u, v = _strategy(strategy)(scenario, rng, frozenset())
    g = scenario.joined()
    g.add_edge(u, v, EdgeKind.BYPASS)
    return TrialRecord(trial, u, v, measure(g, mode))


def experiment_multi_link(
    scenario: PartitionScenario,
    b_max: int,
    master_seed: int,
    strategy: str = "uniform-random",
    mode: LMode = "node-mean",
) -> list[GrowthRecord]:
    """Add ``b_max`` distinct bypass links one at a time, measuring after each.

    Pairs are drawn without replacement from one stream seeded with
    ``seed_for(master_seed, STREAM_PLACEMENT, 0)``, so ``b = 1`` uses the
    same pair as trial 0 of :func:`experiment_single_link`.
    """
    if b_max < 1:
        raise ValueError(f"b_max must be positive, got {b_max!r}")
    if b_max > scenario.n_cross_pairs:
        raise PairSpaceExhausted(
            f"b_max={b_max} exceeds the {scenario.n_cross_pairs} available cross-partition pairs"
        )
    select = _strategy(strategy)
    rng = make_rng(seed_for(master_seed, STREAM_PLACEMENT, 0))
    tracker = MetricsTracker(scenario.joined(), mode)
    used: set[Pair] = set()
    records = []
    for b in range(1, b_max + 1):
        u, v = select(scenario, rng, used)
        used.add((u, v))
        tracker.add_edge(u, v, EdgeKind.BYPASS)
        records.append(GrowthRecord(b, u, v, tracker.snapshot()))
    return records


def best_worst_pairs(
    scenario: PartitionScenario,
    sample_size: int | None = None,
    seed: int = 0,
    mode: LMode = "node-mean",
) -> tuple[tuple[Pair, float], tuple[Pair, float]]:
    """Single-link placements with the smallest and the largest L.

    Evaluates every cross pair when ``sample_size`` is None, otherwise that
    many distinct pairs drawn uniformly with ``seed``. Ties go to the
    lexicographically smallest pair.
    """
    if sample_size is None:
        candidates: Iterable[Pair] = (
            (u, v) for u in scenario.left_ids for v in scenario.right_ids
        )
    else:
        if not 1 <= sample_size <= scenario.n_cross_pairs:
            raise ValueError(f"sample_size must lie in [1, {scenario.n_cross_pairs}]")
        rng = make_rng(seed)
        chosen: set[Pair] = set()
        while len(chosen) < sample_size:
            chosen.add(sample_bypass_pair(scenario, rng, chosen))
        candidates = sorted(chosen)
    tracker = MetricsTracker(scenario.joined(), mode)
    best = worst = None
    for pair in sorted(candidates):
        L = tracker.probe_edge(*pair).L
        if best is None or L < best[1]:
            best = (pair, L)
        if worst is None or L > worst[1]:
            worst = (pair, L)
    assert best is not None and worst is not None
    return best, worst
