"""Clustering attachment random graphs and their triangle counts."""

from .engine import LIMIT, AttachmentFunction, CAParams, ModelError
from .graph import Graph, GraphError
from .trajectory import Trajectory
from .urn import CounterState

__all__ = [
    "LIMIT",
    "AttachmentFunction",
    "CAParams",
    "CounterState",
    "Graph",
    "GraphError",
    "ModelError",
    "Trajectory",
]
