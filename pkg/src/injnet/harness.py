"""Seeded experiment runs, aggregation, normalization and CSV/SVG output."""

from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Literal, Sequence

from .bypass import (
    experiment_multi_link,
    experiment_single_link,
    replay_single_link_trial,
)
from .construction import (
    DEFAULT_MAX_TRIES,
    ConstructionParams,
    Field,
    LatticeSpec,
    PartitionScenario,
    build_lattice,
    build_partition_pair,
    construct_family,
    relocate_sweep,
)
from .graph_core import EdgeKind
from .metrics import LMode, MetricsRecord, MetricsTracker, measure
from .seeding import RNG_ALGORITHM, make_rng, seed_for

EXP1_RAW_COLUMNS = ("p", "run", "L", "gamma", "k")
EXP1_COLUMNS = ("p", "L_mean", "gamma_mean", "L_norm", "gamma_norm")
EXP2_COLUMNS = ("trial", "u", "v", "L", "L_norm", "gamma", "k")
EXP3_COLUMNS = ("b", "L", "L_norm", "gamma", "k")


@dataclass(frozen=True)
class Aggregate:
    min: float
    max: float
    mean: float
    median: float


def aggregate(values: Iterable[float]) -> Aggregate:
    vals = list(values)
    if not vals:
        raise ValueError("cannot aggregate an empty sequence")
    return Aggregate(min(vals), max(vals), math.fsum(vals) / len(vals), statistics.median(vals))


def aggregate_records(records: Sequence[MetricsRecord]) -> dict[str, Aggregate]:
    """Order statistics of ``L``, ``gamma`` and ``k`` across records."""
    if not records:
        raise ValueError("cannot aggregate an empty record list")
    return {
        "L": aggregate(r.L for r in records),
        "gamma": aggregate(r.gamma for r in records),
        "k": aggregate(r.k for r in records),
    }


def normalize_series(
    values: Sequence[float], reference: float | Literal["max"] = "max"
) -> list[float]:
    """Divide every value by ``reference`` (or by the series maximum)."""
    if any(v < 0 for v in values):
        raise ValueError("normalize_series expects non-negative values")
    ref = max(values) if reference == "max" else reference
    if not ref > 0:
        raise ValueError(f"normalization reference must be positive, got {ref!r}")
    return [v / ref for v in values]


@dataclass
class ExperimentSeries:
    """Rows of one experiment, ordered by ``sweep_key``.

    ``raw_rows`` holds per-run rows when the rows themselves are
    aggregates (experiment 1).
    """

    sweep_key: str
    columns: tuple[str, ...]
    rows: list[tuple]
    master_seed: int
    config: dict[str, Any]
    raw_columns: tuple[str, ...] = ()
    raw_rows: list[tuple] = field(default_factory=list)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def to_csv(self) -> str:
        return format_csv(self.columns, self.rows)

    def raw_csv(self) -> str:
        return format_csv(self.raw_columns, self.raw_rows)


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_csv(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _base_config(**kwargs: Any) -> dict[str, Any]:
    return {
        "rng_algorithm": RNG_ALGORITHM,
        "seed_derivation": "blake2b-64(master:stream:trial)",
        **kwargs,
    }


def _spec_config(spec: LatticeSpec, tr: float, field_: Field | None, max_tries: int) -> dict:
    f = field_ or spec.default_field()
    return {
        "rows": spec.rows,
        "cols": spec.cols,
        "spacing": spec.spacing,
        "tr": tr,
        "field": [f.xmin, f.ymin, f.xmax, f.ymax],
        "max_tries": max_tries,
    }


# -- experiment 1: lattice to random sweep ---------------------------------


def run_experiment1(
    spec: LatticeSpec,
    tr: float,
    p_values: Sequence[float],
    runs: int,
    master_seed: int,
    field_: Field | None = None,
    max_tries: int = DEFAULT_MAX_TRIES,
    mode: LMode = "node-mean",
) -> ExperimentSeries:
    """Mean L and gamma per p, each normalized by its maximum over the sweep."""
    family = construct_family(spec, tr, p_values, runs, master_seed, field_, max_tries)
    raw_rows = []
    by_p: dict[int, list[MetricsRecord]] = {}
    for idx, (p, run, g) in enumerate(family):
        rec = measure(g, mode)
        raw_rows.append((p, run, rec.L, rec.gamma, rec.k))
        by_p.setdefault(idx // runs, []).append(rec)

    L_mean = [aggregate_records(by_p[i])["L"].mean for i in range(len(p_values))]
    g_mean = [aggregate_records(by_p[i])["gamma"].mean for i in range(len(p_values))]
    L_norm = normalize_series(L_mean)
    # an all-lattice sweep has gamma == 0 everywhere; nothing to scale by
    g_norm = normalize_series(g_mean) if max(g_mean) > 0 else list(g_mean)
    rows = [
        (p, L_mean[i], g_mean[i], L_norm[i], g_norm[i]) for i, p in enumerate(p_values)
    ]
    config = _base_config(
        experiment="exp1",
        master_seed=master_seed,
        p_values=list(p_values),
        runs=runs,
        l_mode=mode,
        **_spec_config(spec, tr, field_, max_tries),
    )
    return ExperimentSeries(
        "p", EXP1_COLUMNS, rows, master_seed, config, EXP1_RAW_COLUMNS, raw_rows
    )


def replay_experiment1_row(
    spec: LatticeSpec,
    tr: float,
    p_values: Sequence[float],
    p_index: int,
    run: int,
    master_seed: int,
    field_: Field | None = None,
    max_tries: int = DEFAULT_MAX_TRIES,
    mode: LMode = "node-mean",
) -> tuple:
    """Rebuild one raw row of :func:`run_experiment1` in isolation."""
    p = p_values[p_index]
    params = ConstructionParams(p, tr, field_ or spec.default_field(), max_tries)
    g = relocate_sweep(build_lattice(spec, tr), params, make_rng(seed_for(master_seed, p_index, run)))
    rec = measure(g, mode)
    return (p, run, rec.L, rec.gamma, rec.k)


# -- experiments 2 and 3: bypass links between partitions --------------------


def _scenario_config(spec, tr, gap, field_, max_tries) -> dict:
    return {**_spec_config(spec, tr, field_, max_tries), "gap": gap}


def _l_reference(Ls: Sequence[float], l_ref: float | None) -> float:
    return max(Ls) if l_ref is None else l_ref


def run_experiment2(
    scenario: PartitionScenario,
    trials: int,
    master_seed: int,
    l_ref: float | None = None,
    exhaustive: bool = False,
    mode: LMode = "node-mean",
    config: dict[str, Any] | None = None,
) -> ExperimentSeries:
    """One bypass link per trial; ``exhaustive`` evaluates every cross pair instead.

    ``L_norm`` divides by ``l_ref``, defaulting to the largest L observed.
    """
    if exhaustive:
        tracker = MetricsTracker(scenario.joined(), mode)
        pairs = [(u, v) for u in scenario.left_ids for v in scenario.right_ids]
        recs = [(t, u, v, tracker.probe_edge(u, v, EdgeKind.BYPASS)) for t, (u, v) in enumerate(pairs)]
    else:
        recs = [
            (r.trial, r.u, r.v, r.metrics)
            for r in experiment_single_link(scenario, trials, master_seed, mode=mode)
        ]
    ref = _l_reference([m.L for *_, m in recs], l_ref)
    rows = [(t, u, v, m.L, m.L / ref, m.gamma, m.k) for t, u, v, m in recs]
    cfg = _base_config(
        experiment="exp2",
        master_seed=master_seed,
        trials=len(rows),
        exhaustive=exhaustive,
        l_ref=l_ref,
        l_ref_effective=ref,
        l_mode=mode,
        **(config or {}),
    )
    return ExperimentSeries("trial", EXP2_COLUMNS, rows, master_seed, cfg)


def replay_experiment2_row(
    scenario: PartitionScenario, trial: int, master_seed: int, mode: LMode = "node-mean"
) -> tuple:
    """Raw part ``(trial, u, v, L, gamma, k)`` of one sampled trial."""
    r = replay_single_link_trial(scenario, trial, master_seed, mode=mode)
    return (r.trial, r.u, r.v, r.metrics.L, r.metrics.gamma, r.metrics.k)


def run_experiment3(
    scenario: PartitionScenario,
    b_max: int,
    master_seed: int,
    l_ref: float | None = None,
    mode: LMode = "node-mean",
    config: dict[str, Any] | None = None,
) -> ExperimentSeries:
    recs = experiment_multi_link(scenario, b_max, master_seed, mode=mode)
    ref = _l_reference([r.metrics.L for r in recs], l_ref)
    rows = [(r.b, r.metrics.L, r.metrics.L / ref, r.metrics.gamma, r.metrics.k) for r in recs]
    cfg = _base_config(
        experiment="exp3",
        master_seed=master_seed,
        b_max=b_max,
        l_ref=l_ref,
        l_ref_effective=ref,
        l_mode=mode,
        **(config or {}),
    )
    return ExperimentSeries("b", EXP3_COLUMNS, rows, master_seed, cfg)


def default_scenario(
    spec: LatticeSpec,
    tr: float,
    gap: float,
    master_seed: int,
    field_: Field | None = None,
    max_tries: int = DEFAULT_MAX_TRIES,
) -> tuple[PartitionScenario, dict[str, Any]]:
    scenario = build_partition_pair(spec, tr, gap, master_seed, field_, max_tries)
    return scenario, _scenario_config(spec, tr, gap, field_, max_tries)


# -- svg -------------------------------------------------------------------

_SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def render_svg(
    xs: Sequence[float],
    series: dict[str, Sequence[float]],
    x_label: str = "",
    width: int = 640,
    height: int = 400,
) -> str:
    """Minimal standalone line chart: two axes and one polyline per series."""
    if not xs or not series:
        raise ValueError("nothing to plot")
    margin = 50
    x0, x1 = min(xs), max(xs)
    ys = [y for vals in series.values() for y in vals]
    y0, y1 = min(0.0, min(ys)), max(ys)
    x_span = (x1 - x0) or 1.0
    y_span = (y1 - y0) or 1.0

    def sx(x: float) -> float:
        return margin + (x - x0) / x_span * (width - 2 * margin)

    def sy(y: float) -> float:
        return height - margin - (y - y0) / y_span * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle" '
        f'font-size="12">{x_label}</text>',
        f'<text x="{margin - 6}" y="{height - margin:.1f}" text-anchor="end" font-size="10">{y0:g}</text>',
        f'<text x="{margin - 6}" y="{margin:.1f}" text-anchor="end" font-size="10">{y1:.3g}</text>',
        f'<text x="{margin}" y="{height - margin + 14}" text-anchor="middle" font-size="10">{x0:g}</text>',
        f'<text x="{width - margin}" y="{height - margin + 14}" text-anchor="middle" '
        f'font-size="10">{x1:g}</text>',
    ]
    for i, (name, vals) in enumerate(series.items()):
        color = _SVG_COLORS[i % len(_SVG_COLORS)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, vals))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        parts.append(
            f'<text x="{width - margin + 4}" y="{margin + 14 * i}" font-size="11" '
            f'fill="{color}">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def series_svg(series: ExperimentSeries) -> str:
    xs = [float(x) for x in series.column(series.sweep_key)]
    if series.sweep_key == "p":
        curves = {"L": series.column("L_norm"), "gamma": series.column("gamma_norm")}
    else:
        curves = {"L": series.column("L_norm"), "gamma": series.column("gamma")}
    return render_svg(xs, curves, x_label=series.sweep_key)


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")
