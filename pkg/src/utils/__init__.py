"""Утилиты: ошибки, зерна, табличный ввод-вывод."""

from .errors import (
    ConfigError,
    ContractError,
    DataError,
    OptimizationDiverged,
    ParseError,
    ShapeError,
    StDagcnError,
    UsageError,
)
from .seeding import derive_rng
from .tables import read_labeled_matrix, write_labeled_matrix

__all__ = [
    "ConfigError",
    "ContractError",
    "DataError",
    "OptimizationDiverged",
    "ParseError",
    "ShapeError",
    "StDagcnError",
    "UsageError",
    "derive_rng",
    "read_labeled_matrix",
    "write_labeled_matrix",
]
