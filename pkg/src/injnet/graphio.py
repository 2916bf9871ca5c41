"""Plain-text graph format.

::

    spatialgraph v1
    tr 50.0
    node 0 0.0 0.0
    node 1 36.0 0.0
    edge 0 1 spatial

Nodes come in ascending id order, edges as ``u < v`` sorted
lexicographically, so equal graphs serialize to identical bytes. ``#``
starts a comment.
"""

from __future__ import annotations

from pathlib import Path

from .graph_core import EdgeKind, GraphError, SpatialGraph

HEADER = "spatialgraph v1"


class GraphFormatError(GraphError):
    """Malformed graph file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class GraphValidationError(GraphFormatError):
    """Well-formed file describing an invalid graph."""


def dumps(g: SpatialGraph) -> str:
    lines = [HEADER, f"tr {g.tr!r}"]
    lines += [f"node {v} {p.x!r} {p.y!r}" for v, p in enumerate(g.positions)]
    lines += [f"edge {u} {v} {kind.value}" for u, v, kind in g.edges()]
    return "\n".join(lines) + "\n"


def _float(tok: str, lineno: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise GraphFormatError(f"not a number: {tok!r}", lineno) from None


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"not an integer: {tok!r}", lineno) from None


def loads(text: str) -> SpatialGraph:
    items = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            items.append((lineno, line.split()))
    if not items or " ".join(items[0][1]) != HEADER:
        raise GraphFormatError(f"expected header {HEADER!r}", items[0][0] if items else 1)
    if len(items) < 2 or items[1][1][0] != "tr" or len(items[1][1]) != 2:
        raise GraphFormatError("expected 'tr <real>'", items[1][0] if len(items) > 1 else None)
    lineno, toks = items[1]
    try:
        g = SpatialGraph(_float(toks[1], lineno))
    except GraphError as exc:
        raise GraphValidationError(str(exc), lineno) from None

    seen_edge = False
    for lineno, toks in items[2:]:
        tag = toks[0]
        if tag == "node":
            if seen_edge:
                raise GraphFormatError("node lines must precede edge lines", lineno)
            if len(toks) != 4:
                raise GraphFormatError("expected 'node <id> <x> <y>'", lineno)
            vid = _int(toks[1], lineno)
            if vid != g.n:
                raise GraphFormatError(f"expected node id {g.n}, got {vid}", lineno)
            try:
                g.add_node(_float(toks[2], lineno), _float(toks[3], lineno))
            except GraphError as exc:
                raise GraphValidationError(str(exc), lineno) from None
        elif tag == "edge":
            seen_edge = True
            if len(toks) != 4:
                raise GraphFormatError("expected 'edge <u> <v> spatial|bypass'", lineno)
            u, v = _int(toks[1], lineno), _int(toks[2], lineno)
            try:
                kind = EdgeKind(toks[3])
            except ValueError:
                raise GraphFormatError(f"unknown edge kind {toks[3]!r}", lineno) from None
            if g.n == 0:
                raise GraphFormatError("edge before any node", lineno)
            try:
                g.add_edge(u, v, kind)
            except GraphError as exc:
                raise GraphValidationError(str(exc), lineno) from None
        else:
            raise GraphFormatError(f"unknown record {tag!r}", lineno)
    if g.n == 0:
        raise GraphFormatError("graph has no nodes")
    return g


def read_graph(path: str | Path) -> SpatialGraph:
    return loads(Path(path).read_text(encoding="utf-8"))


def write_graph(g: SpatialGraph, path: str | Path) -> None:
    Path(path).write_text(dumps(g), encoding="utf-8", newline="\n")
