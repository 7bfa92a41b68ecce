"""Сравнение восстановленного DAG с истинным (для синтетических данных)."""

from dataclasses import asdict, dataclass

import numpy as np

from ..utils.errors import ShapeError


@dataclass(frozen=True)
class StructureMetrics:
    """
    Attributes:
        precision, recall, f1: Метрики по ребрам; None при пустом знаменателе
        shd: Структурное расстояние Хэмминга (обращенное ребро считается один раз)
        missing, extra, reversed: Слагаемые SHD
    """

    precision: float | None
    recall: float | None
    f1: float | None
    shd: int
    missing: int
    extra: int
    reversed: int

    def to_dict(self) -> dict:
        return asdict(self)


def structure_metrics(learned: np.ndarray, truth: np.ndarray, epsilon: float = 0.0) -> StructureMetrics:
    """
    Сравнить носители графов после порога |learned| > ε.

    Обращенное ребро (есть j→i вместо i→j) не засчитывается как верное,
    в SHD дает +1, а не +2.
    """
    est = np.abs(np.asarray(learned, dtype=np.float64)) > epsilon
    true = np.asarray(truth, dtype=np.float64) != 0.0
    if est.shape != true.shape:
        raise ShapeError(f"structure_metrics: формы {est.shape} и {true.shape} не совпадают")
    np.fill_diagonal(est, False)
    np.fill_diagonal(true, False)

    correct = int(np.sum(est & true))
    reversed_mask = est & ~true & true.T
    reversed_count = int(np.sum(reversed_mask))
    extra = int(np.sum(est & ~true)) - reversed_count
    # истинные ребра, не найденные ни в каком направлении
    missing = int(np.sum(true & ~est & ~est.T))

    n_est, n_true = int(est.sum()), int(true.sum())
    precision = correct / n_est if n_est else None
    recall = correct / n_true if n_true else None
    f1 = None
    if precision is not None and recall is not None and precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    elif precision is not None and recall is not None:
        f1 = 0.0
    return StructureMetrics(
        precision=precision,
        recall=recall,
        f1=f1,
        shd=missing + extra + reversed_count,
        missing=missing,
        extra=extra,
        reversed=reversed_count,
    )
