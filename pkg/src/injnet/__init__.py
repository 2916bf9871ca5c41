"""Small-world properties of ad hoc networks joined by bypass links."""

__version__ = "0.1.0"

from .graph_core import EdgeKind, GraphError, Point2D, SpatialGraph  # noqa: E402
from .metrics import MetricsRecord  # noqa: E402

__all__ = ["EdgeKind", "GraphError", "MetricsRecord", "Point2D", "SpatialGraph", "__version__"]
