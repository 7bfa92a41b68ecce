"""
Постобработка обученной матрицы A в точный DAG.

Порог A ∘ 1[|A| > ε], затем, пока есть цикл, удаление ребра цикла
с наименьшим |весом|. Остаток A - A_DAG трактуется как шумовая часть SEM.
"""

import logging
from dataclasses import dataclass
from .._compat import StrEnum
from typing import Sequence

import numpy as np

from ..utils.errors import ConfigError, ShapeError, UsageError
from .cycles import find_cycle

logger = logging.getLogger(__name__)


class RemovalReason(StrEnum):
    THRESHOLD = "threshold"
    CYCLE = "cycle"


@dataclass(frozen=True)
class RemovedEdge:
    """Удаленное ребро source → target."""

    source: int
    target: int
    weight: float
    reason: RemovalReason


@dataclass
class ExtractedDag:
    """
    Результат постобработки.

    Attributes:
        adjacency: точный DAG A_DAG, элементы взяты из A без изменений
        removed_edges: Удаленные ребра в порядке удаления
        residual: A - A_DAG
        epsilon: Использованный порог
    """

    adjacency: np.ndarray
    removed_edges: list[RemovedEdge]
    residual: np.ndarray
    epsilon: float

    @property
    def kept_count(self) -> int:
        return int(np.count_nonzero(self.adjacency))

    def removed_count(self, reason: RemovalReason) -> int:
        return sum(1 for e in self.removed_edges if e.reason == reason)

    def summary(self) -> dict[str, int | float]:
        return {
            "epsilon": self.epsilon,
            "kept": self.kept_count,
            "threshold_removed": self.removed_count(RemovalReason.THRESHOLD),
            "cycle_removed": self.removed_count(RemovalReason.CYCLE),
        }


def average_runs(matrices: Sequence[np.ndarray]) -> np.ndarray:
    """
    Поэлементное среднее матриц нескольких испытаний.

    Raises:
        UsageError: Пустой список
        ShapeError: Разные формы
    """
    if len(matrices) == 0:
        raise UsageError("average_runs: нужен хотя бы один прогон")
    shapes = {np.shape(m) for m in matrices}
    if len(shapes) != 1:
        raise ShapeError(f"average_runs: разные формы матриц {sorted(shapes)}")
    return np.mean(np.stack([np.asarray(m, dtype=np.float64) for m in matrices]), axis=0)


def threshold_graph(adjacency: np.ndarray, epsilon: float) -> np.ndarray:
    """
    Обнулить элементы с |A[i, j]| ≤ ε; остальные сохраняются точно.

    Raises:
        ConfigError: ε ≤ 0
    """
    if not epsilon > 0.0:
        raise ConfigError(f"Порог должен быть положительным, получено {epsilon}")
    a = np.asarray(adjacency, dtype=np.float64)
    return np.where(np.abs(a) > epsilon, a, 0.0)


def extract_dag(adjacency: np.ndarray, epsilon: float) -> ExtractedDag:
    """
    Порог и жадное удаление циклов.

    В каждом найденном цикле удаляется ребро с наименьшим |весом|;
    при равенстве удаляется ребро с наименьшей парой (source, target).

    Args:
        adjacency: Обученная матрица A
        epsilon: Порог ε > 0

    Returns:
        ExtractedDag: Ацикличная матрица, журнал удалений и остаток
    """
    a = np.asarray(adjacency, dtype=np.float64)
    dag = threshold_graph(a, epsilon)

    removed = [
        RemovedEdge(int(s), int(t), float(a[s, t]), RemovalReason.THRESHOLD)
        for s, t in np.argwhere((a != 0.0) & (dag == 0.0))
    ]

    while (cycle := find_cycle(dag)) is not None:
        source, target = min(cycle, key=lambda e: (abs(dag[e]), e))
        removed.append(RemovedEdge(source, target, float(dag[source, target]), RemovalReason.CYCLE))
        logger.debug(f"Цикл длины {len(cycle)}: удалено ребро {source}->{target} ({dag[source, target]:.4g})")
        dag[source, target] = 0.0

    result = ExtractedDag(adjacency=dag, removed_edges=removed, residual=a - dag, epsilon=float(epsilon))
    logger.info(f"Извлечение DAG: {result.summary()}")
    return result
