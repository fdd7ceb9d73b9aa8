"""faultpath: exact replacement paths under up to three edge failures."""

from .weights import CompositeWeight
from .graph import Graph, Edge, perturb_and_verify, load_graph

__all__ = ["CompositeWeight", "Graph", "Edge", "perturb_and_verify", "load_graph"]

__version__ = "0.1.0"
