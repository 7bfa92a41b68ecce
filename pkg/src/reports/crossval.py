"""
Повторная стратифицированная k-кратная перекрестная проверка и отчет по метрикам.
"""

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from sklearn.model_selection import RepeatedStratifiedKFold

from ..config import RunConfig
from ..data import TimeSeriesDataset
from ..learning import fit
from ..models import BrainGraph, ModelParams
from ..utils.errors import ConfigError
from ..utils.seeding import derive_rng
from .metrics import confusion_metrics, roc_auc
from .voting import DECISION_THRESHOLD, vote_dataset

logger = logging.getLogger(__name__)

METRIC_NAMES = ("ACC", "SEN", "SPE", "AUC")

# Номер потока генератора для окон голосования
VOTING_STREAM = 2


@dataclass(frozen=True)
class FoldAssignment:
    """Индексы обучающей и тестовой частей одного фолда."""

    repeat: int
    fold: int
    train: np.ndarray
    test: np.ndarray


@dataclass
class FoldResult:
    """Строка отчета: один фолд (или отложенная выборка)."""

    repeat: int
    fold: int
    n_test: int
    tp: int
    fn: int
    tn: int
    fp: int
    ACC: float | None
    SEN: float | None
    SPE: float | None
    AUC: float | None
    termination: str | None = None


def repeated_stratified_kfold(labels, k: int = 5, repeats: int = 5, seed: int = 0) -> list[FoldAssignment]:
    """
    Разбиения для k×repeats оценок; в каждом повторе фолды стратифицированы по классу.

    Args:
        labels: Метки субъектов {0, 1}^M
        k: Число фолдов
        repeats: Число повторов
        seed: Зерно; одинаковое зерно дает одинаковые разбиения

    Returns:
        list[FoldAssignment]: repeats·k разбиений

    Raises:
        ConfigError: Класс меньше k
    """
    y = np.asarray(labels, dtype=np.int64)
    counts = np.bincount(y, minlength=2)
    if k < 2 or counts.min() < k:
        raise ConfigError(f"Для {k}-кратной проверки в каждом классе нужно ≥ {k} субъектов, получено {counts.tolist()}")
    splitter = RepeatedStratifiedKFold(n_splits=k, n_repeats=repeats, random_state=seed)
    return [
        FoldAssignment(repeat=i // k, fold=i % k, train=train, test=test)
        for i, (train, test) in enumerate(splitter.split(np.zeros(y.size), y))
    ]


@dataclass
class MetricsReport:
    """
    Построчные метрики и их агрегат.

    Attributes:
        rows: Метрики по фолдам
        seed: Зерно прогона (определяет разбиения и окна голосования)
        voters: S
        subsequence_length: T'
    """

    rows: list[FoldResult] = field(default_factory=list)
    seed: int = 0
    voters: int = 64
    subsequence_length: int = 128

    def to_dicts(self) -> list[dict[str, Any]]:
        return [asdict(row) for row in self.rows]

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.to_dicts())

    def aggregate(self) -> dict[str, dict[str, float | None]]:
        """Среднее и выборочное std (ddof=1) по фолдам; None-значения пропускаются."""
        frame = self.frame()
        summary = {}
        for name in METRIC_NAMES:
            values = pd.to_numeric(frame[name], errors="coerce") if len(frame) else pd.Series(dtype=float)
            mean, std = values.mean(), values.std(ddof=1)
            summary[name] = {
                "mean": None if math.isnan(mean) else float(mean),
                "std": None if math.isnan(std) else float(std),
                "n": int(values.notna().sum()),
            }
        return summary

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "voters": self.voters,
            "subsequence_length": self.subsequence_length,
            "folds": self.to_dicts(),
            "aggregate": self.aggregate(),
        }

    def write_json(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")
        logger.info(f"Метрики записаны в {path}")
        return path


def score_predictions(scores: np.ndarray, labels: np.ndarray, repeat: int = 0, fold: int = 0) -> FoldResult:
    """Строка отчета по вероятностям и меткам."""
    confusion = confusion_metrics((scores > DECISION_THRESHOLD).astype(np.int64), labels)
    return FoldResult(
        repeat=repeat,
        fold=fold,
        n_test=int(len(labels)),
        tp=confusion.tp,
        fn=confusion.fn,
        tn=confusion.tn,
        fp=confusion.fp,
        ACC=confusion.acc,
        SEN=confusion.sen,
        SPE=confusion.spe,
        AUC=roc_auc(scores, labels),
    )


def evaluate_model(
    params: ModelParams,
    graph: BrainGraph,
    dataset: TimeSeriesDataset,
    settings: RunConfig,
    repeat: int = 0,
    fold: int = 0,
) -> FoldResult:
    """Голосование на наборе и метрики; окна из потока (seed, 2, repeat, fold)."""
    rng = derive_rng(settings.seed, VOTING_STREAM, repeat, fold)
    scores, _ = vote_dataset(params, graph, dataset, settings.voters, settings.subsequence_length, rng)
    return score_predictions(scores, dataset.labels, repeat, fold)


def evaluate_fold(dataset: TimeSeriesDataset, assignment: FoldAssignment, settings: RunConfig) -> FoldResult:
    """Обучить ST-DAGCN на обучающей части фолда и оценить на тестовой."""
    run_index = 1 + assignment.repeat * settings.cv_folds + assignment.fold
    result = fit(dataset.subset(assignment.train), settings, run_index=run_index)
    row = evaluate_model(
        result.params,
        result.graph,
        dataset.subset(assignment.test),
        settings,
        assignment.repeat,
        assignment.fold,
    )
    row.termination = str(result.reason)
    logger.info(f"Повтор {assignment.repeat}, фолд {assignment.fold}: ACC={row.ACC}, AUC={row.AUC}")
    return row


def cross_validate(dataset: TimeSeriesDataset, settings: RunConfig, jobs: int = 1) -> MetricsReport:
    """
    Полный протокол cv_repeats × cv_folds; фолды независимы и могут считаться параллельно.

    Args:
        dataset: Вся когорта
        settings: Конфигурация (cv_folds, cv_repeats, seed, voters, subsequence_length)
        jobs: Число процессов joblib

    Returns:
        MetricsReport: cv_folds·cv_repeats строк и агрегат
    """
    assignments = repeated_stratified_kfold(dataset.labels, settings.cv_folds, settings.cv_repeats, settings.seed)
    logger.info(f"Перекрестная проверка: {len(assignments)} оценок, jobs={jobs}")
    rows = Parallel(n_jobs=jobs)(delayed(evaluate_fold)(dataset, a, settings) for a in assignments)
    return MetricsReport(
        rows=list(rows),
        seed=settings.seed,
        voters=settings.voters,
        subsequence_length=settings.subsequence_length,
    )


def evaluate_holdout(
    params: ModelParams,
    graph: BrainGraph,
    dataset: TimeSeriesDataset,
    settings: RunConfig,
) -> MetricsReport:
    """Оценить готовую модель на отложенном наборе (одна строка отчета)."""
    row = evaluate_model(params, graph, dataset, settings)
    return MetricsReport(
        rows=[row],
        seed=settings.seed,
        voters=settings.voters,
        subsequence_length=settings.subsequence_length,
    )
