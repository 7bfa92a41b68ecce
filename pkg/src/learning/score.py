"""
Функция оценки F(A, θ) = средняя кросс-энтропия + λ‖A‖₁.
"""

from dataclasses import dataclass

import numpy as np

from ..config import RunConfig
from ..data.sampling import Batch
from ..engine import Mode, Tensor, add, bce_with_sigmoid, l1_norm, mul
from ..models import BrainGraph, ModelParams, forward
from ..utils.errors import ConfigError, UsageError


@dataclass(frozen=True)
class ScoreConfig:
    """
    Гиперпараметры функции оценки и внутренней задачи.

    Attributes:
        l1_lambda: Коэффициент λ при ‖A‖₁
        batch_size: Размер мини-батча
        learning_rate: Шаг Adam
        inner_epochs: Эпох на одну внешнюю итерацию
        dropout: Доля dropout
        weight_decay: Развязанный L2 для матриц весов
    """

    l1_lambda: float = 1e-3
    batch_size: int = 64
    learning_rate: float = 1e-3
    inner_epochs: int = 100
    dropout: float = 0.5
    weight_decay: float = 1e-3

    def __post_init__(self):
        if self.l1_lambda < 0:
            raise ConfigError(f"l1_lambda должен быть ≥ 0, получено {self.l1_lambda}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size должен быть ≥ 1, получено {self.batch_size}")

    @classmethod
    def from_settings(cls, settings: RunConfig) -> "ScoreConfig":
        return cls(
            l1_lambda=settings.l1_lambda,
            batch_size=settings.batch_size,
            learning_rate=settings.learning_rate,
            inner_epochs=settings.inner_epochs,
            dropout=settings.dropout,
            weight_decay=settings.weight_decay,
        )


def score_terms(
    batch: Batch,
    graph: BrainGraph,
    params: ModelParams,
    cfg: ScoreConfig,
    mode: Mode = Mode.TRAIN,
    rng: np.random.Generator | None = None,
) -> tuple[Tensor, Tensor]:
    """
    F и ее слагаемое кросс-энтропии; оба записаны на активную ленту.

    Raises:
        UsageError: Пустой батч
    """
    if len(batch) == 0:
        raise UsageError("score: пустой батч")
    logits = forward(batch.x, graph, params, mode=mode, rng=rng)
    cross_entropy = bce_with_sigmoid(logits, batch.labels)
    if cfg.l1_lambda == 0.0:
        return cross_entropy, cross_entropy
    return add(cross_entropy, mul(l1_norm(graph.masked()), cfg.l1_lambda)), cross_entropy


def score(
    batch: Batch,
    graph: BrainGraph,
    params: ModelParams,
    cfg: ScoreConfig,
    mode: Mode = Mode.TRAIN,
    rng: np.random.Generator | None = None,
) -> Tensor:
    """F = средняя кросс-энтропия по батчу + λ·Σ|A[i, j]| (субградиент 0 в нуле)."""
    return score_terms(batch, graph, params, cfg, mode, rng)[0]
