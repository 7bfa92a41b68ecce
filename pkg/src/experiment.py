"""
Главный объект для проведения экспериментов ST-DAGCN.
"""

import json
import logging
from pathlib import Path
from typing import Sequence

import numpy as np
from joblib import Parallel, delayed

from .config import RunConfig, get_settings
from .data import TimeSeriesDataset
from .extraction import ExtractedDag, average_runs, extract_dag, write_extraction
from .learning import FitResult, fit, fit_fixed_graph
from .models import Checkpoint, CheckpointStorage
from .reports import (
    GroupDifference,
    MetricsReport,
    cross_validate,
    evaluate_holdout,
    group_difference,
    write_group_difference,
)
from .utils.errors import DataError
from .utils.tables import write_labeled_matrix

logger = logging.getLogger(__name__)


def _run_trial(dataset: TimeSeriesDataset, settings: RunConfig, run_index: int, fixed_graph: bool) -> FitResult:
    if fixed_graph:
        return fit_fixed_graph(dataset, dataset.correlation_matrix(), settings, run_index=run_index)
    return fit(dataset, settings, run_index=run_index)


def _check_roi_names(expected: Sequence[str], found: Sequence[str], what: str) -> None:
    """
    Raises:
        DataError: Имена ROI расходятся (указывается первое расхождение)
    """
    if list(expected) == list(found):
        return
    if len(expected) != len(found):
        raise DataError(f"{what}: ожидалось N={len(expected)}, найдено N={len(found)}")
    position = next(i for i, (a, b) in enumerate(zip(expected, found)) if a != b)
    raise DataError(
        f"{what}: имена ROI расходятся в позиции {position}: {expected[position]!r} != {found[position]!r}"
    )


class StDagcnExperiment:
    """
    Высокоуровневый интерфейс: обучение, извлечение DAG, оценка и сравнение групп.

    Пример использования:
        >>> from src import StDagcnExperiment, load_dataset
        >>>
        >>> experiment = StDagcnExperiment(jobs=4)
        >>> dataset = load_dataset("data/manifest.csv")
        >>> results = experiment.train(dataset, trials=10)
        >>> experiment.save_training(results, dataset, "runs/train")
        >>> experiment.extract(experiment.mean_adjacency(results), dataset.roi_names, "runs/dag")
    """

    def __init__(self, settings: RunConfig | None = None, jobs: int = 1):
        """
        Args:
            settings: Конфигурация прогона. Если None, берется get_settings().
            jobs: Число процессов для независимых испытаний и фолдов
        """
        self.settings = settings or get_settings()
        self.jobs = jobs
        logger.info(f"Эксперимент ST-DAGCN инициализирован: seed={self.settings.seed}, jobs={jobs}")

    def train(self, dataset: TimeSeriesDataset, trials: int = 1, fixed_graph: bool = False) -> list[FitResult]:
        """
        Обучить модель в нескольких независимых испытаниях.

        Испытание i использует поток случайных чисел (seed, i), поэтому результат
        не зависит от числа процессов.

        Args:
            dataset: Обучающая когорта
            trials: Число испытаний
            fixed_graph: Абляция: A = корреляция Пирсона, обучается только θ

        Returns:
            list[FitResult]: Результаты в порядке испытаний
        """
        if trials < 1:
            raise DataError(f"Число испытаний должно быть ≥ 1, получено {trials}")
        logger.info(f"Обучение: {trials} испытаний, фиксированный граф: {fixed_graph}")
        results = Parallel(n_jobs=self.jobs)(
            delayed(_run_trial)(dataset, self.settings, i, fixed_graph) for i in range(trials)
        )
        return list(results)

    @staticmethod
    def mean_adjacency(results: Sequence[FitResult]) -> np.ndarray:
        """Поэлементное среднее A по испытаниям."""
        return average_runs([r.graph.numpy() for r in results])

    def save_training(self, results: Sequence[FitResult], dataset: TimeSeriesDataset, out_dir: Path) -> dict[str, Path]:
        """
        Записать контрольные точки, траектории и матрицы A.

        Одно испытание: checkpoint.json, trajectory.csv, A.csv.
        Несколько: файлы с суффиксом _trial_{i} (с единицы) и A_mean.csv.

        Returns:
            dict: Имя артефакта -> путь
        """
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        self.settings.echo(out_dir)
        config = self.settings.model_dump()
        written: dict[str, Path] = {}

        for i, result in enumerate(results, 1):
            suffix = "" if len(results) == 1 else f"_trial_{i}"
            storage = CheckpointStorage(out_dir / f"checkpoint{suffix}.json")
            written[f"checkpoint{suffix}"] = storage.save(
                Checkpoint(result.graph, result.params, dataset.roi_names, config)
            )
            written[f"trajectory{suffix}"] = result.write_trajectory(out_dir / f"trajectory{suffix}.csv")
            written[f"A{suffix}"] = write_labeled_matrix(out_dir / f"A{suffix}.csv", result.graph.numpy(), dataset.roi_names)

        if len(results) > 1:
            written["A_mean"] = write_labeled_matrix(out_dir / "A_mean.csv", self.mean_adjacency(results), dataset.roi_names)

        summary = [
            {
                "trial": i,
                "termination": str(r.reason),
                "epochs": len(r.trajectory),
                "final_h": r.final_h if r.graph.trainable else None,
                "final_cross_entropy": r.final_cross_entropy,
            }
            for i, r in enumerate(results, 1)
        ]
        written["summary"] = out_dir / "train_summary.json"
        written["summary"].write_text(json.dumps(summary, indent=2), encoding="utf-8")
        logger.info(f"Результаты обучения записаны в {out_dir}")
        return written

    def extract(
        self,
        adjacency: np.ndarray,
        names: Sequence[str],
        out_dir: Path,
        epsilons: Sequence[float] | None = None,
        transpose: bool = False,
    ) -> list[ExtractedDag]:
        """
        Постобработка A для одного или нескольких порогов.

        Один порог пишется прямо в out_dir, несколько пишутся в подкаталоги eps_{ε}.
        """
        epsilons = list(epsilons) if epsilons else [self.settings.epsilon]
        out_dir = Path(out_dir)
        self.settings.echo(out_dir)
        extracted = []
        for epsilon in epsilons:
            result = extract_dag(adjacency, epsilon)
            target = out_dir if len(epsilons) == 1 else out_dir / f"eps_{epsilon:g}"
            write_extraction(result, names, target, transpose=transpose)
            extracted.append(result)
        return extracted

    def cross_validate(self, dataset: TimeSeriesDataset) -> MetricsReport:
        """Протокол cv_repeats × cv_folds с обучением на каждом фолде."""
        return cross_validate(dataset, self.settings, jobs=self.jobs)

    def evaluate_checkpoint(self, checkpoint: Checkpoint, dataset: TimeSeriesDataset) -> MetricsReport:
        """
        Оценить сохраненную модель голосованием на отложенной когорте.

        Raises:
            DataError: N или имена ROI контрольной точки не совпадают с данными
        """
        if checkpoint.graph.n_nodes != dataset.n_nodes:
            raise DataError(
                f"Контрольная точка обучена для N={checkpoint.graph.n_nodes}, в данных N={dataset.n_nodes}"
            )
        _check_roi_names(checkpoint.roi_names, dataset.roi_names, "Контрольная точка и данные")
        return evaluate_holdout(checkpoint.params, checkpoint.graph, dataset, self.settings)

    def compare_groups(
        self,
        group1: tuple[np.ndarray, Sequence[str]],
        group2: tuple[np.ndarray, Sequence[str]],
        out_dir: Path,
        top_nodes: int = 10,
        top_edges: int = 10,
    ) -> GroupDifference:
        """
        Различия узлов и ребер двух групп с записью таблиц.

        Args:
            group1: (матрица, имена ROI) первой группы
            group2: (матрица, имена ROI) второй группы
        """
        (a1, names1), (a2, names2) = group1, group2
        _check_roi_names(names1, names2, "Матрицы групп")
        diff = group_difference(a1, a2)
        self.settings.echo(out_dir)
        write_group_difference(diff, list(names1), out_dir, top_nodes, top_edges)
        return diff

    def __repr__(self) -> str:
        return f"<StDagcnExperiment(seed={self.settings.seed}, preset={self.settings.preset}, jobs={self.jobs})>"
