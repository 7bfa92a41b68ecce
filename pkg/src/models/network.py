"""
Сеть ST-DAGCN: три слоя ST-DAGC, глобальный средний пулинг и скалярная голова.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from ..engine import (
    Mode,
    RunningStats,
    Tensor,
    add,
    dropout,
    global_mean_pool,
    matmul,
    reshape,
)
from ..utils.errors import DataError, ShapeError
from .graph import BrainGraph
from .layers import WEIGHT_MATRICES, StDagcLayer, dag_conv, temporal_conv

logger = logging.getLogger(__name__)

N_LAYERS = 3


@dataclass
class ModelParams:
    """
    Все обучаемые параметры θ: три слоя и голова классификатора.

    Attributes:
        layers: Ровно три слоя ST-DAGC
        head_w: Веса головы [C, 1]
        head_b: Смещение головы [1]
        dropout: Доля dropout после каждого слоя
        kernel: Ширина временного ядра
    """

    layers: list[StDagcLayer]
    head_w: Tensor
    head_b: Tensor
    dropout: float
    kernel: int

    @classmethod
    def create(
        cls,
        n_nodes: int,
        rng: np.random.Generator,
        hidden_channels: int = 64,
        kernel: int = 7,
        dropout: float = 0.5,
        in_channels: int = 1,
    ) -> "ModelParams":
        """
        Случайная инициализация параметров.

        Args:
            n_nodes: Число узлов N
            rng: Генератор случайных чисел
            hidden_channels: f_s = f_t во всех слоях
            kernel: Ширина временного ядра (нечетная)
            dropout: Доля dropout
            in_channels: Число входных признаков (1 для BOLD-рядов)
        """
        layers = []
        channels = in_channels
        for _ in range(N_LAYERS):
            layers.append(
                StDagcLayer.create(n_nodes, channels, hidden_channels, hidden_channels, kernel, rng)
            )
            channels = hidden_channels
        bound = 1.0 / np.sqrt(hidden_channels)
        return cls(
            layers=layers,
            head_w=Tensor(rng.uniform(-bound, bound, size=(hidden_channels, 1)), requires_grad=True),
            head_b=Tensor(np.zeros(1), requires_grad=True),
            dropout=dropout,
            kernel=kernel,
        )

    @property
    def hidden_channels(self) -> int:
        return self.head_w.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.layers[0].n_nodes

    def named_parameters(self) -> dict[str, Tensor]:
        """Параметры по именам вида layer1.ws, head_w."""
        named = {}
        for index, layer in enumerate(self.layers, 1):
            for name, tensor in layer.parameters().items():
                named[f"layer{index}.{name}"] = tensor
        named["head_w"] = self.head_w
        named["head_b"] = self.head_b
        return named

    def decay_names(self) -> set[str]:
        """Имена матриц весов (смещения, batch norm и A не регуляризуются)."""
        names = {f"layer{i}.{w}" for i in range(1, len(self.layers) + 1) for w in WEIGHT_MATRICES}
        names.add("head_w")
        return names

    def named_running_stats(self) -> dict[str, RunningStats]:
        named = {}
        for index, layer in enumerate(self.layers, 1):
            for name, stats in layer.running_stats().items():
                named[f"layer{index}.{name}"] = stats
        return named

    def zero_grad(self) -> None:
        for tensor in self.named_parameters().values():
            tensor.zero_grad()


def forward(
    x,
    graph: BrainGraph,
    params: ModelParams,
    mode: Mode = Mode.EVAL,
    rng: np.random.Generator | None = None,
    normalize: bool = True,
) -> Tensor:
    """
    Прямой проход ST-DAGCN.

    Args:
        x: Стандартизованный вход [N, T', 1] или батч [B, N, T', 1]
        graph: Граф с матрицей A
        params: Параметры сети
        mode: train/eval
        rng: Генератор для dropout (обязателен в train при dropout > 0)
        normalize: False отключает batch norm во всех слоях

    Returns:
        Tensor: Логит (скаляр) или логиты [B]; сигмоиду применяет вызывающий код

    Raises:
        DataError: Нечисловые значения во входе
        ShapeError: Неверная форма входа
    """
    x = x if isinstance(x, Tensor) else Tensor(x)
    if not np.all(np.isfinite(x.data)):
        raise DataError("forward: вход содержит нечисловые значения")
    single = x.ndim == 3
    if single:
        x = reshape(x, (1,) + x.shape)
    if x.ndim != 4:
        raise ShapeError(f"forward: ожидается [B, N, T', f], получено {x.shape}")
    if x.shape[-2] < params.kernel:
        raise ShapeError(f"forward: длина окна {x.shape[-2]} меньше ширины ядра {params.kernel}")

    h = x
    for layer in params.layers:
        h = dag_conv(h, graph, layer, mode, normalize)
        h = temporal_conv(h, layer, mode, normalize)
        h = dropout(h, params.dropout, mode, rng)

    pooled = global_mean_pool(h)
    logits = add(reshape(matmul(pooled, params.head_w), (pooled.shape[0],)), params.head_b)
    return reshape(logits, ()) if single else logits


def predict_proba(logit) -> np.ndarray | float:
    """σ(logit) ∈ (0, 1) без переполнения при больших |logit|."""
    value = logit.data if isinstance(logit, Tensor) else np.asarray(logit, dtype=np.float64)
    prob = expit(value)
    return float(prob) if np.ndim(prob) == 0 else prob
