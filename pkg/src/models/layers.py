"""
Слой ST-DAGC: DAG-свертка по узлам и одномерная свертка по времени.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..engine import (
    Mode,
    RunningStats,
    Tensor,
    add,
    batch_norm,
    conv1d,
    matmul,
    relu,
    reshape,
    transpose,
)
from ..utils.errors import ShapeError
from .graph import BrainGraph

logger = logging.getLogger(__name__)


@dataclass
class StDagcLayer:
    """
    Параметры одного слоя ST-DAGC.

    Attributes:
        ws: Пространственные веса [f, f_s]
        bias: Смещение по узлам [N, f_s]
        spatial_gamma, spatial_beta: Аффинная часть пространственного batch norm [f_s]
        spatial_stats: Скользящие статистики пространственного batch norm
        wt: Временное ядро [k, f_s, f_t]
        temporal_gamma, temporal_beta: Аффинная часть временного batch norm [f_t]
        temporal_stats: Скользящие статистики временного batch norm
    """

    ws: Tensor
    bias: Tensor
    spatial_gamma: Tensor
    spatial_beta: Tensor
    spatial_stats: RunningStats
    wt: Tensor
    temporal_gamma: Tensor
    temporal_beta: Tensor
    temporal_stats: RunningStats

    @classmethod
    def create(
        cls,
        n_nodes: int,
        in_channels: int,
        spatial_channels: int,
        temporal_channels: int,
        kernel: int,
        rng: np.random.Generator,
    ) -> "StDagcLayer":
        """Инициализация He для весов, нули для смещений, (1, 0) для batch norm."""
        ws = rng.normal(0.0, np.sqrt(2.0 / in_channels), size=(in_channels, spatial_channels))
        wt = rng.normal(
            0.0, np.sqrt(2.0 / (kernel * spatial_channels)), size=(kernel, spatial_channels, temporal_channels)
        )
        return cls(
            ws=Tensor(ws, requires_grad=True),
            bias=Tensor(np.zeros((n_nodes, spatial_channels)), requires_grad=True),
            spatial_gamma=Tensor(np.ones(spatial_channels), requires_grad=True),
            spatial_beta=Tensor(np.zeros(spatial_channels), requires_grad=True),
            spatial_stats=RunningStats.initial(spatial_channels),
            wt=Tensor(wt, requires_grad=True),
            temporal_gamma=Tensor(np.ones(temporal_channels), requires_grad=True),
            temporal_beta=Tensor(np.zeros(temporal_channels), requires_grad=True),
            temporal_stats=RunningStats.initial(temporal_channels),
        )

    @property
    def n_nodes(self) -> int:
        return self.bias.shape[0]

    def parameters(self) -> dict[str, Tensor]:
        return {
            "ws": self.ws,
            "bias": self.bias,
            "spatial_gamma": self.spatial_gamma,
            "spatial_beta": self.spatial_beta,
            "wt": self.wt,
            "temporal_gamma": self.temporal_gamma,
            "temporal_beta": self.temporal_beta,
        }

    def running_stats(self) -> dict[str, RunningStats]:
        return {"spatial": self.spatial_stats, "temporal": self.temporal_stats}


# Имена матриц весов, к которым применяется weight decay
WEIGHT_MATRICES = ("ws", "wt")


def dag_conv(h: Tensor, graph: BrainGraph, layer: StDagcLayer, mode: Mode, normalize: bool = True) -> Tensor:
    """
    DAG-свертка σ(BatchNorm(Aᵀ(H[:, t, :] Wˢ + B))) для каждого временного среза.

    Узел i агрегирует только родителей {j : A[j, i] ≠ 0}.

    Args:
        h: Признаки [..., N, T, f]
        graph: Граф с матрицей A
        layer: Параметры слоя
        mode: train/eval (влияет на batch norm)
        normalize: False отключает batch norm (для ручной проверки)

    Returns:
        Tensor: [..., N, T, f_s]

    Raises:
        ShapeError: Число узлов не совпадает с графом
    """
    if h.ndim < 3 or h.shape[-3] != graph.n_nodes:
        raise ShapeError(f"dag_conv: ожидается ось узлов длины {graph.n_nodes}, получена форма {h.shape}")
    if layer.n_nodes != graph.n_nodes:
        raise ShapeError(f"dag_conv: слой рассчитан на {layer.n_nodes} узлов, граф имеет {graph.n_nodes}")

    n, fs = layer.bias.shape
    z = add(matmul(h, layer.ws), reshape(layer.bias, (n, 1, fs)))

    # Ось узлов переносим в конец, чтобы Aᵀ применялась как правое умножение на A
    nd = z.ndim
    lead = tuple(range(nd - 3))
    to_last = lead + (nd - 2, nd - 1, nd - 3)
    back = lead + (nd - 1, nd - 3, nd - 2)
    z = transpose(matmul(transpose(z, to_last), graph.masked()), back)

    if normalize:
        z = batch_norm(z, layer.spatial_gamma, layer.spatial_beta, layer.spatial_stats, mode)
    return relu(z)


def temporal_conv(h: Tensor, layer: StDagcLayer, mode: Mode, normalize: bool = True) -> Tensor:
    """
    Одномерная свертка по времени отдельно для каждого узла, затем batch norm и ReLU.

    Args:
        h: Признаки [..., N, T, f_s]

    Returns:
        Tensor: [..., N, T, f_t] той же длины по времени
    """
    z = conv1d(h, layer.wt)
    if normalize:
        z = batch_norm(z, layer.temporal_gamma, layer.temporal_beta, layer.temporal_stats, mode)
    return relu(z)
