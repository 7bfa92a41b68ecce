"""
Независимый эталонный классификатор: ближайший центроид по корреляциям Пирсона.

Используется для калибровки синтетических данных: если эталон не отличает
классы, никакая модель на этих данных не обязана их отличать.
"""

import logging
from dataclasses import dataclass

import numpy as np
from sklearn.model_selection import train_test_split
from sklearn.neighbors import NearestCentroid

from ..data import TimeSeriesDataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleResult:
    accuracy: float
    n_train: int
    n_test: int


def correlation_features(dataset: TimeSeriesDataset) -> np.ndarray:
    """Верхний треугольник (без диагонали) матрицы корреляций каждого субъекта: [M, N(N-1)/2]."""
    rows, cols = np.triu_indices(dataset.n_nodes, k=1)
    return np.stack([np.nan_to_num(np.corrcoef(r.series), nan=0.0)[rows, cols] for r in dataset.records])


def correlation_oracle(dataset: TimeSeriesDataset, test_size: float = 0.3, seed: int = 0) -> OracleResult:
    """
    Точность ближайшего центроида на стратифицированной отложенной выборке.

    Args:
        dataset: Когорта с обоими классами
        test_size: Доля отложенной выборки
        seed: Зерно разбиения
    """
    features = correlation_features(dataset)
    labels = dataset.labels
    x_train, x_test, y_train, y_test = train_test_split(
        features, labels, test_size=test_size, stratify=labels, random_state=seed
    )
    model = NearestCentroid().fit(x_train, y_train)
    accuracy = float(np.mean(model.predict(x_test) == y_test))
    logger.info(f"Эталон (ближайший центроид): точность {accuracy:.3f} на {len(y_test)} субъектах")
    return OracleResult(accuracy=accuracy, n_train=len(y_train), n_test=len(y_test))
