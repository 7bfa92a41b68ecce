"""
Совместное обучение A и θ: внутренняя задача (Adam по мини-батчам)
и внешний цикл расширенного лагранжиана.
"""

import logging
from dataclasses import asdict, dataclass, field, replace
from .._compat import StrEnum
from pathlib import Path

import numpy as np
import pandas as pd

from ..config import RunConfig
from ..data import TimeSeriesDataset, sample_batch
from ..engine import AdamState, Mode, Tape, adam_step
from ..models import BrainGraph, ModelParams
from ..utils.errors import DataError, OptimizationDiverged
from ..utils.seeding import derive_rng
from ..utils.tables import FLOAT_FORMAT
from .acyclicity import acyclicity, acyclicity_grad
from .auglag import AugLagState, outer_step
from .score import ScoreConfig, score_terms

logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = ["epoch", "outer_k", "cross_entropy", "h", "eta", "c", "l1_norm"]


class TerminationReason(StrEnum):
    CONVERGED = "converged"
    PENALTY_EXHAUSTED = "penalty-exhausted"
    ITERATION_LIMIT = "iteration-limit"
    EPOCH_BUDGET = "epoch-budget"


@dataclass(frozen=True)
class TrajectoryRow:
    """Одна эпоха; для абляции с фиксированным графом h, eta, c отсутствуют."""

    epoch: int
    outer_k: int
    cross_entropy: float
    h: float | None
    eta: float | None
    c: float | None
    l1_norm: float


@dataclass
class FitResult:
    """
    Результат обучения.

    Attributes:
        graph: Итоговый граф (A до постобработки)
        params: Итоговые параметры θ
        trajectory: Строки по эпохам
        reason: Причина остановки
        state: Итоговое состояние лагранжиана (None для фиксированного графа)
    """

    graph: BrainGraph
    params: ModelParams
    trajectory: list[TrajectoryRow] = field(default_factory=list)
    reason: TerminationReason = TerminationReason.ITERATION_LIMIT
    state: AugLagState | None = None

    @property
    def final_h(self) -> float:
        return acyclicity(self.graph)

    @property
    def final_cross_entropy(self) -> float | None:
        return self.trajectory[-1].cross_entropy if self.trajectory else None

    def to_dicts(self) -> list[dict]:
        return [asdict(row) for row in self.trajectory]

    def trajectory_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.to_dicts(), columns=TRAJECTORY_COLUMNS)

    def write_trajectory(self, path: Path) -> Path:
        """CSV: epoch, outer_k, cross_entropy, h, eta, c, l1_norm (пустые ячейки для None)."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.trajectory_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT)
        return path


def _require_both_classes(dataset: TimeSeriesDataset) -> None:
    counts = np.bincount(dataset.labels, minlength=2)
    if np.any(counts == 0):
        raise DataError(f"Для обучения нужны оба класса, получено {counts.tolist()}")


def inner_solve(
    dataset: TimeSeriesDataset,
    graph: BrainGraph,
    params: ModelParams,
    state: AugLagState | None,
    cfg: ScoreConfig,
    *,
    subsequence_length: int,
    rng: np.random.Generator,
    adam: AdamState | None = None,
    trajectory: list[TrajectoryRow] | None = None,
) -> tuple[BrainGraph, ModelParams]:
    """
    Минимизировать L_c(A, θ, η) = F + η·h + (c/2)·h² мини-батчевым Adam.

    Обучение продолжается с переданных (A, θ, статистик batch norm, моментов Adam);
    диагональ A обнуляется после каждого шага. При state=None ограничение
    не применяется (абляция с фиксированным графом).

    Args:
        dataset: Обучающие субъекты
        graph: Граф (обновляется на месте, если обучаемый)
        params: Параметры сети (обновляются на месте)
        state: Зафиксированное на время решения состояние лагранжиана
        cfg: Гиперпараметры функции оценки
        subsequence_length: T'
        rng: Генератор для перемешивания, окон и dropout
        adam: Состояние Adam (создается, если не передано)
        trajectory: Список, в который добавляется строка на каждую эпоху

    Returns:
        tuple: (graph, params)

    Raises:
        OptimizationDiverged: Функция потерь стала нечисловой
    """
    adam = adam if adam is not None else AdamState(lr=cfg.learning_rate, weight_decay=cfg.weight_decay)
    trajectory = trajectory if trajectory is not None else []
    named = params.named_parameters()
    if graph.trainable:
        named["A"] = graph.A
    decay = params.decay_names()
    records = dataset.records
    constrained = state is not None and graph.trainable

    for _ in range(cfg.inner_epochs):
        order = rng.permutation(len(records))
        ce_total = 0.0
        for start in range(0, len(order), cfg.batch_size):
            batch = sample_batch([records[i] for i in order[start : start + cfg.batch_size]], subsequence_length, rng)
            with Tape() as tape:
                total, cross_entropy = score_terms(batch, graph, params, cfg, Mode.TRAIN, rng)
            if not np.isfinite(total.item()):
                last = asdict(trajectory[-1]) if trajectory else None
                raise OptimizationDiverged(f"Нечисловая функция потерь на эпохе {len(trajectory) + 1}", last)

            for tensor in named.values():
                tensor.zero_grad()
            tape.backward(total)
            grads = {name: tensor.grad for name, tensor in named.items()}

            if constrained:
                # ∇(η·h + (c/2)·h²) = (η + c·h)·∇h
                h = acyclicity(graph)
                penalty = (state.eta + state.c * h) * acyclicity_grad(graph)
                grads["A"] = penalty if grads["A"] is None else grads["A"] + penalty

            adam_step(named, grads, adam, decay)
            graph.mask_diagonal()
            ce_total += cross_entropy.item() * len(batch)

        row = TrajectoryRow(
            epoch=len(trajectory) + 1,
            outer_k=state.k if state is not None else 0,
            cross_entropy=ce_total / len(records),
            h=acyclicity(graph) if constrained else None,
            eta=state.eta if constrained else None,
            c=state.c if constrained else None,
            l1_norm=float(np.abs(graph.A.data).sum()),
        )
        trajectory.append(row)
        logger.debug(f"Эпоха {row.epoch}: CE={row.cross_entropy:.5f}, h={row.h}, |A|₁={row.l1_norm:.4f}")

    return graph, params


def _initial_params(n_nodes: int, settings: RunConfig, rng: np.random.Generator) -> ModelParams:
    return ModelParams.create(
        n_nodes,
        rng,
        hidden_channels=settings.hidden_channels,
        kernel=settings.temporal_kernel,
        dropout=settings.dropout,
    )


def fit(
    dataset: TimeSeriesDataset,
    settings: RunConfig,
    init_seed: int | None = None,
    run_index: int = 0,
) -> FitResult:
    """
    Чередовать inner_solve и outer_step до h(A) ≤ h_tol, c > c_max или k = k_max.

    Args:
        dataset: Обучающие субъекты (оба класса)
        settings: Конфигурация прогона
        init_seed: Зерно (по умолчанию settings.seed)
        run_index: Номер испытания; поток случайных чисел зависит от (init_seed, run_index)

    Returns:
        FitResult: Итоговые A, θ, траектория и причина остановки
    """
    _require_both_classes(dataset)
    seed = settings.seed if init_seed is None else init_seed
    rng = derive_rng(seed, run_index)
    cfg = ScoreConfig.from_settings(settings)

    graph = BrainGraph.random(dataset.n_nodes, settings.init_scale, rng)
    params = _initial_params(dataset.n_nodes, settings, rng)
    adam = AdamState(lr=cfg.learning_rate, weight_decay=cfg.weight_decay)
    state = AugLagState(
        eta=settings.eta_init,
        c=settings.c_init,
        beta=settings.penalty_growth,
        gamma=settings.progress_ratio,
    )
    trajectory: list[TrajectoryRow] = []
    reason = TerminationReason.ITERATION_LIMIT

    logger.info(f"Обучение ST-DAGCN: {dataset}, seed={seed}, run={run_index}")
    for _ in range(settings.k_max):
        inner_solve(
            dataset,
            graph,
            params,
            state,
            cfg,
            subsequence_length=settings.subsequence_length,
            rng=rng,
            adam=adam,
            trajectory=trajectory,
        )
        h = acyclicity(graph)
        logger.info(f"Внешняя итерация {state.k}: h(A)={h:.3e}, eta={state.eta:.3e}, c={state.c:.1e}")
        if h <= settings.h_tol:
            reason = TerminationReason.CONVERGED
            break
        state = outer_step(h, state)
        if state.c > settings.c_max:
            reason = TerminationReason.PENALTY_EXHAUSTED
            break

    logger.info(f"Обучение завершено: {reason}, эпох {len(trajectory)}, h(A)={acyclicity(graph):.3e}")
    return FitResult(graph=graph, params=params, trajectory=trajectory, reason=reason, state=state)


def fit_fixed_graph(
    dataset: TimeSeriesDataset,
    a_fixed: np.ndarray,
    settings: RunConfig,
    seed: int | None = None,
    run_index: int = 0,
    epochs: int | None = None,
) -> FitResult:
    """
    Обучить только θ при фиксированной матрице A (без ограничения и без L1).

    Args:
        dataset: Обучающие субъекты
        a_fixed: Фиксированная матрица (например, корреляция Пирсона)
        settings: Конфигурация прогона
        seed: Зерно (по умолчанию settings.seed)
        run_index: Номер испытания
        epochs: Бюджет эпох (по умолчанию settings.epoch_budget)
    """
    _require_both_classes(dataset)
    seed = settings.seed if seed is None else seed
    rng = derive_rng(seed, run_index)
    budget = settings.epoch_budget if epochs is None else epochs
    cfg = replace(ScoreConfig.from_settings(settings), l1_lambda=0.0, inner_epochs=budget)

    graph = BrainGraph(a_fixed, trainable=False)
    params = _initial_params(dataset.n_nodes, settings, rng)
    trajectory: list[TrajectoryRow] = []

    logger.info(f"Абляция с фиксированным графом: {dataset}, эпох {budget}")
    inner_solve(
        dataset,
        graph,
        params,
        None,
        cfg,
        subsequence_length=settings.subsequence_length,
        rng=rng,
        trajectory=trajectory,
    )
    return FitResult(graph=graph, params=params, trajectory=trajectory, reason=TerminationReason.EPOCH_BUDGET)
