"""Host graphs and staged searches for monochromatic (induced) cycles of prescribed length."""

from .errors import RamseyCyclesError
from .graphcore import EdgeColoring, Graph, Hypergraph, IntersectionGraph
from .pipeline import RunProfile, run_pipeline

__all__ = ["EdgeColoring", "Graph", "Hypergraph", "IntersectionGraph", "RamseyCyclesError",
           "RunProfile", "run_pipeline"]
__version__ = "0.1.0"
