"""
Метрики бинарной классификации. Положительный класс: метка 1.

Неопределенная метрика (пустой знаменатель, один класс) возвращается как None.
"""

import logging
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import rankdata

from ..utils.errors import UsageError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConfusionMetrics:
    """
    Матрица ошибок и производные метрики.

    Attributes:
        tp, fn, tn, fp: Счетчики матрицы ошибок
    """

    tp: int
    fn: int
    tn: int
    fp: int

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.tn + self.fp

    @property
    def acc(self) -> float | None:
        return (self.tp + self.tn) / self.total if self.total else None

    @property
    def sen(self) -> float | None:
        positives = self.tp + self.fn
        return self.tp / positives if positives else None

    @property
    def spe(self) -> float | None:
        negatives = self.tn + self.fp
        return self.tn / negatives if negatives else None

    def as_tuple(self) -> tuple[float | None, float | None, float | None]:
        return self.acc, self.sen, self.spe

    def to_dict(self) -> dict:
        return {**asdict(self), "ACC": self.acc, "SEN": self.sen, "SPE": self.spe}


def _binary(values, name: str) -> np.ndarray:
    array = np.asarray(values).ravel()
    if array.size and not np.isin(array, (0, 1)).all():
        raise UsageError(f"{name}: допустимы только значения 0 и 1")
    return array.astype(np.int64)


def confusion_metrics(predictions, labels) -> ConfusionMetrics:
    """
    ACC, SEN, SPE по жестким предсказаниям.

    Args:
        predictions: Предсказания {0, 1}^M
        labels: Истинные метки {0, 1}^M

    Returns:
        ConfusionMetrics: Счетчики и метрики (None при пустом знаменателе)

    Raises:
        UsageError: Разная длина или значения вне {0, 1}
    """
    pred = _binary(predictions, "predictions")
    true = _binary(labels, "labels")
    if pred.shape != true.shape:
        raise UsageError(f"confusion_metrics: длины {pred.size} и {true.size} не совпадают")
    result = ConfusionMetrics(
        tp=int(np.sum((pred == 1) & (true == 1))),
        fn=int(np.sum((pred == 0) & (true == 1))),
        tn=int(np.sum((pred == 0) & (true == 0))),
        fp=int(np.sum((pred == 1) & (true == 0))),
    )
    if result.sen is None or result.spe is None:
        logger.warning(f"В выборке один класс, часть метрик не определена: {result}")
    return result


def roc_auc(scores, labels) -> float | None:
    """
    AUC через статистику Манна-Уитни; совпадения дают 1/2.

    Returns:
        float | None: AUC или None, если в labels один класс
    """
    s = np.asarray(scores, dtype=np.float64).ravel()
    y = _binary(labels, "labels")
    if s.shape != y.shape:
        raise UsageError(f"roc_auc: длины {s.size} и {y.size} не совпадают")
    n_pos = int(y.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        logger.warning("roc_auc: в метках один класс, AUC не определен")
        return None
    ranks = rankdata(s, method="average")
    u = ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))
