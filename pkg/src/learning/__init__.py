"""Обучение структуры: ограничение ацикличности, функция оценки, расширенный лагранжиан."""

from .acyclicity import acyclicity, acyclicity_grad
from .auglag import AugLagState, outer_step
from .score import ScoreConfig, score, score_terms
from .solver import (
    TRAJECTORY_COLUMNS,
    FitResult,
    TerminationReason,
    TrajectoryRow,
    fit,
    fit_fixed_graph,
    inner_solve,
)

__all__ = [
    "TRAJECTORY_COLUMNS",
    "AugLagState",
    "FitResult",
    "ScoreConfig",
    "TerminationReason",
    "TrajectoryRow",
    "acyclicity",
    "acyclicity_grad",
    "fit",
    "fit_fixed_graph",
    "inner_solve",
    "outer_step",
    "score",
    "score_terms",
]
