"""Постобработка: порог, удаление циклов, усреднение прогонов."""

from .cycles import find_cycle, is_acyclic, topological_order
from .export import write_edge_list, write_extraction
from .extract import (
    ExtractedDag,
    RemovalReason,
    RemovedEdge,
    average_runs,
    extract_dag,
    threshold_graph,
)

__all__ = [
    "ExtractedDag",
    "RemovalReason",
    "RemovedEdge",
    "average_runs",
    "extract_dag",
    "find_cycle",
    "is_acyclic",
    "threshold_graph",
    "topological_order",
    "write_edge_list",
    "write_extraction",
]
