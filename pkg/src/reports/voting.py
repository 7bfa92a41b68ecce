"""Голосование по S случайным окнам: среднее сигмоид, порог 0.5."""

import numpy as np

from ..data import SubjectRecord, TimeSeriesDataset
from ..data.sampling import draw_start
from ..engine import Mode
from ..models import BrainGraph, ModelParams, forward, predict_proba
from ..utils.errors import ConfigError

DECISION_THRESHOLD = 0.5


def vote_predict(
    params: ModelParams,
    graph: BrainGraph,
    record: SubjectRecord,
    voters: int,
    subsequence_length: int,
    rng: np.random.Generator,
) -> float:
    """
    Вероятность класса 1 для субъекта: среднее predict_proba по S окнам (eval-режим).

    Args:
        params: Обученные параметры
        graph: Граф A
        record: Стандартизованный субъект
        voters: S ≥ 1
        subsequence_length: T'
        rng: Генератор начал окон

    Raises:
        ConfigError: S < 1
    """
    if voters < 1:
        raise ConfigError(f"Число голосующих окон должно быть ≥ 1, получено {voters}")
    starts = [draw_start(record.n_timepoints, subsequence_length, rng) for _ in range(voters)]
    windows = np.stack([record.series[:, s : s + subsequence_length] for s in starts])[..., None]
    probabilities = predict_proba(forward(windows, graph, params, mode=Mode.EVAL))
    return float(np.mean(probabilities))


def vote_dataset(
    params: ModelParams,
    graph: BrainGraph,
    dataset: TimeSeriesDataset,
    voters: int,
    subsequence_length: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Вероятности и жесткие предсказания для всех субъектов."""
    scores = np.array(
        [vote_predict(params, graph, r, voters, subsequence_length, rng) for r in dataset.records]
    )
    return scores, (scores > DECISION_THRESHOLD).astype(np.int64)
