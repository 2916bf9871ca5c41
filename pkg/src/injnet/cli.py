"""Command-line entry point.

Exit codes: 0 success, 1 runtime or validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .construction import (
    DEFAULT_MAX_TRIES,
    DEFAULT_P_STEPS,
    DEFAULT_RUNS,
    DEFAULT_SPACING,
    DEFAULT_TR,
    ConstructionParams,
    LatticeSpec,
    build_lattice,
    default_p_values,
    relocate_sweep,
)
from .graph_core import GraphError
from .graphio import dumps, read_graph
from .harness import (
    ExperimentSeries,
    default_scenario,
    run_experiment1,
    run_experiment2,
    run_experiment3,
    series_svg,
    write_text,
)
from .metrics import L_MODES, gamma_random, l_random, measure, verdict_for
from .seeding import DEFAULT_SEED, RNG_ALGORITHM, make_rng

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2

DEFAULT_TRIALS = 500
DEFAULT_B_MAX = 500
DEFAULT_ALPHA = 5.0
DEFAULT_BETA = 2.0


@dataclass
class RunConfig:
    subcommand: str
    options: dict[str, Any]
    master_seed: int | None
    rng_algorithm: str = RNG_ALGORITHM
    version: str = __version__
    outputs: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


# -- argument types ----------------------------------------------------------


def _probability(text: str) -> float:
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError(f"p must lie in [0, 1], got {text}")
    return p


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return n


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(x) and x > 0):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text}")
    return x


def _p_steps(text: str) -> int:
    n = _positive_int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("need at least 2 p steps")
    return n


def _alpha(text: str) -> float:
    x = _positive_float(text)
    if not x > 1:
        raise argparse.ArgumentTypeError(f"alpha must exceed 1, got {text}")
    return x


def _beta(text: str) -> float:
    x = _positive_float(text)
    if not x >= 1:
        raise argparse.ArgumentTypeError(f"beta must be at least 1, got {text}")
    return x


# -- parser ------------------------------------------------------------------


def _add_lattice(p: argparse.ArgumentParser, rows: int, cols: int) -> None:
    p.add_argument("--rows", type=_positive_int, default=rows, help="lattice rows (default %(default)s)")
    p.add_argument("--cols", type=_positive_int, default=cols, help="lattice columns (default %(default)s)")
    p.add_argument("--spacing", type=_positive_float, default=DEFAULT_SPACING,
                   help="lattice spacing (default %(default)s)")
    p.add_argument("--tr", type=_positive_float, default=DEFAULT_TR,
                   help="transmission range (default %(default)s)")


def _add_seed(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed (default %(default)s)")


def _add_relocation(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-tries", type=_positive_int, default=DEFAULT_MAX_TRIES,
                   help="relocation retries before a node is left in place (default %(default)s)")


def _add_l_mode(p: argparse.ArgumentParser) -> None:
    p.add_argument("--l-mode", choices=L_MODES, default="node-mean",
                   help="path length: median of per-node means, or median of all pairs (default %(default)s)")


def _add_verdict(p: argparse.ArgumentParser) -> None:
    p.add_argument("graph", help="graph file")
    p.add_argument("--alpha", type=_alpha, default=DEFAULT_ALPHA,
                   help="required factor of gamma over k/n (default %(default)s)")
    p.add_argument("--beta", type=_beta, default=DEFAULT_BETA,
                   help="allowed factor of L over ln(n)/ln(k) (default %(default)s)")
    _add_l_mode(p)


def _add_experiment_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output directory for CSVs and config.json (default: CSV to stdout)")
    p.add_argument("--svg", help="also write a line chart of the series to this path")


def _add_scenario(p: argparse.ArgumentParser) -> None:
    _add_lattice(p, rows=5, cols=10)
    p.add_argument("--gap", type=_positive_float, default=3 * DEFAULT_TR,
                   help="distance between the two partitions (default %(default)s)")
    _add_seed(p)
    _add_relocation(p)
    _add_l_mode(p)
    p.add_argument("--l-ref", type=_positive_float, default=None,
                   help="explicit L normalization constant (default: largest L observed)")
    _add_experiment_out(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="injnet",
        description="Small-world measurements on ad hoc networks joined by bypass links.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="COMMAND")

    p = sub.add_parser("gen-lattice", help="write a square lattice graph")
    _add_lattice(p, rows=10, cols=10)
    p.add_argument("--out", help="graph file (default stdout)")

    p = sub.add_parser("construct", help="write one lattice-to-random construction")
    _add_lattice(p, rows=10, cols=10)
    p.add_argument("--p", type=_probability, default=1.0, help="relocation probability (default %(default)s)")
    _add_seed(p)
    _add_relocation(p)
    p.add_argument("--out", help="graph file (default stdout)")

    p = sub.add_parser("measure", help="print n,k,gamma,L,gamma_random,l_random,verdict as CSV")
    _add_verdict(p)

    p = sub.add_parser("smallworld", help="explain the small-world verdict for a graph")
    _add_verdict(p)

    p = sub.add_parser("exp1", help="lattice-to-random sweep over p")
    _add_lattice(p, rows=10, cols=10)
    p.add_argument("--p-steps", type=_p_steps, default=DEFAULT_P_STEPS,
                   help="evenly spaced p values in [0, 1] (default %(default)s)")
    p.add_argument("--runs", type=_positive_int, default=DEFAULT_RUNS, help="runs per p (default %(default)s)")
    _add_seed(p)
    _add_relocation(p)
    _add_l_mode(p)
    _add_experiment_out(p)

    p = sub.add_parser("exp2", help="one bypass link, reassigned per trial")
    p.add_argument("--trials", type=_positive_int, default=DEFAULT_TRIALS,
                   help="sampled placements (default %(default)s)")
    p.add_argument("--exhaustive", action="store_true", help="evaluate every cross-partition pair")
    _add_scenario(p)

    p = sub.add_parser("exp3", help="growing number of bypass links")
    p.add_argument("--b-max", type=_positive_int, default=DEFAULT_B_MAX,
                   help="number of links to add (default %(default)s)")
    _add_scenario(p)
    return parser


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    """Parse ``argv``; usage errors exit with status 2."""
    ns = build_parser().parse_args(argv)
    options = {k: v for k, v in vars(ns).items() if k != "subcommand"}
    return RunConfig(ns.subcommand, options, options.get("seed"))


# -- commands ----------------------------------------------------------------


def _emit_graph(text: str, out: str | None) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _spec(o: dict) -> LatticeSpec:
    return LatticeSpec(o["rows"], o["cols"], o["spacing"])


def _cmd_gen_lattice(cfg: RunConfig) -> None:
    o = cfg.options
    _emit_graph(dumps(build_lattice(_spec(o), o["tr"])), o["out"])


def _cmd_construct(cfg: RunConfig) -> None:
    o = cfg.options
    spec = _spec(o)
    params = ConstructionParams(o["p"], o["tr"], spec.default_field(), o["max_tries"])
    g = relocate_sweep(build_lattice(spec, o["tr"]), params, make_rng(o["seed"]))
    _emit_graph(dumps(g), o["out"])


def _measure_row(cfg: RunConfig):
    o = cfg.options
    g = read_graph(o["graph"])
    rec = measure(g, o["l_mode"])
    lr = l_random(rec.n, rec.k) if rec.k > 1 and rec.n >= 2 else float("nan")
    return rec, gamma_random(rec.n, rec.k), lr, verdict_for(rec, o["alpha"], o["beta"])


def _cmd_measure(cfg: RunConfig) -> None:
    rec, gr, lr, ok = _measure_row(cfg)
    sys.stdout.write("n,k,gamma,L,gamma_random,l_random,verdict\n")
    sys.stdout.write(f"{rec.n},{rec.k!r},{rec.gamma!r},{rec.L!r},{gr!r},{lr!r},{str(ok).lower()}\n")


def _cmd_smallworld(cfg: RunConfig) -> None:
    o = cfg.options
    rec, gr, lr, ok = _measure_row(cfg)
    print(f"n = {rec.n}, k = {rec.k:.4f}")
    print(f"gamma = {rec.gamma:.4f} vs alpha * k/n = {o['alpha'] * gr:.4f}")
    print(f"L = {rec.L:.4f} vs beta * ln(n)/ln(k) = {o['beta'] * lr:.4f}")
    print(f"small-world: {'yes' if ok else 'no'}")


def _write_series(cfg: RunConfig, series: ExperimentSeries, name: str) -> None:
    o = cfg.options
    if o["out"]:
        out = Path(o["out"])
        out.mkdir(parents=True, exist_ok=True)
        if series.raw_rows:
            write_text(out / f"{name}_raw.csv", series.raw_csv())
            cfg.outputs.append(f"{name}_raw.csv")
        write_text(out / f"{name}.csv", series.to_csv())
        cfg.outputs.append(f"{name}.csv")
    else:
        sys.stdout.write(series.to_csv())
    if o["svg"]:
        write_text(o["svg"], series_svg(series))
        cfg.outputs.append(str(o["svg"]))
    if o["out"]:
        sidecar = {"run": json.loads(cfg.to_json()), "experiment": series.config}
        write_text(Path(o["out"]) / "config.json", json.dumps(sidecar, indent=2, sort_keys=True) + "\n")


def _cmd_exp1(cfg: RunConfig) -> None:
    o = cfg.options
    series = run_experiment1(
        _spec(o), o["tr"], default_p_values(o["p_steps"]), o["runs"], o["seed"],
        max_tries=o["max_tries"], mode=o["l_mode"],
    )
    _write_series(cfg, series, "exp1")


def _scenario(o: dict):
    return default_scenario(_spec(o), o["tr"], o["gap"], o["seed"], max_tries=o["max_tries"])


def _cmd_exp2(cfg: RunConfig) -> None:
    o = cfg.options
    scenario, scfg = _scenario(o)
    series = run_experiment2(
        scenario, o["trials"], o["seed"], l_ref=o["l_ref"], exhaustive=o["exhaustive"],
        mode=o["l_mode"], config=scfg,
    )
    _write_series(cfg, series, "exp2")


def _cmd_exp3(cfg: RunConfig) -> None:
    o = cfg.options
    scenario, scfg = _scenario(o)
    if o["b_max"] > scenario.n_cross_pairs:
        raise ValueError(f"--b-max {o['b_max']} exceeds the {scenario.n_cross_pairs} cross-partition pairs")
    series = run_experiment3(scenario, o["b_max"], o["seed"], l_ref=o["l_ref"], mode=o["l_mode"], config=scfg)
    _write_series(cfg, series, "exp3")


COMMANDS = {
    "gen-lattice": _cmd_gen_lattice,
    "construct": _cmd_construct,
    "measure": _cmd_measure,
    "smallworld": _cmd_smallworld,
    "exp1": _cmd_exp1,
    "exp2": _cmd_exp2,
    "exp3": _cmd_exp3,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        COMMANDS[cfg.subcommand](cfg)
    except (GraphError, ValueError, OSError) as exc:
        print(f"injnet {cfg.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
