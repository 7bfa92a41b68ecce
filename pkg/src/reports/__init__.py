"""Оценка: метрики, голосование, перекрестная проверка, различия групп, сравнение структур."""

from .crossval import (
    METRIC_NAMES,
    FoldAssignment,
    FoldResult,
    MetricsReport,
    cross_validate,
    evaluate_fold,
    evaluate_holdout,
    evaluate_model,
    repeated_stratified_kfold,
    score_predictions,
)
from .groups import GroupDifference, group_difference, write_group_difference
from .metrics import ConfusionMetrics, confusion_metrics, roc_auc
from .oracle import OracleResult, correlation_features, correlation_oracle
from .structure import StructureMetrics, structure_metrics
from .voting import DECISION_THRESHOLD, vote_dataset, vote_predict

__all__ = [
    "DECISION_THRESHOLD",
    "METRIC_NAMES",
    "ConfusionMetrics",
    "FoldAssignment",
    "FoldResult",
    "GroupDifference",
    "MetricsReport",
    "OracleResult",
    "StructureMetrics",
    "confusion_metrics",
    "correlation_features",
    "correlation_oracle",
    "cross_validate",
    "evaluate_fold",
    "evaluate_holdout",
    "evaluate_model",
    "group_difference",
    "repeated_stratified_kfold",
    "roc_auc",
    "score_predictions",
    "structure_metrics",
    "vote_dataset",
    "vote_predict",
    "write_group_difference",
]
