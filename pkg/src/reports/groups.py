"""
Сравнение графов двух групп: различия узлов и ребер.

edge_diff[i, j] = |A1[i, j] - A2[i, j]|
node_diff[i] = Σ_j edge_diff[i, j] + Σ_j edge_diff[j, i]
"""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from ..utils.errors import UsageError
from ..utils.tables import FLOAT_FORMAT

logger = logging.getLogger(__name__)

NODE_COLUMNS = ["rank", "roi", "node_diff"]
EDGE_COLUMNS = ["rank", "source", "target", "edge_diff", "weight_group1", "weight_group2"]


@dataclass
class GroupDifference:
    """
    Различия двух матриц смежности.

    Attributes:
        node_diff: Вектор [N]
        edge_diff: Матрица [N × N]
        group1: Матрица первой группы
        group2: Матрица второй группы
    """

    node_diff: np.ndarray
    edge_diff: np.ndarray
    group1: np.ndarray
    group2: np.ndarray

    def ranked_nodes(self) -> list[tuple[int, float]]:
        """Узлы по убыванию node_diff; при равенстве меньший индекс раньше."""
        order = np.lexsort((np.arange(self.node_diff.size), -self.node_diff))
        return [(int(i), float(self.node_diff[i])) for i in order]

    def ranked_edges(self) -> list[tuple[int, int, float]]:
        """Ребра с ненулевым различием по убыванию edge_diff."""
        sources, targets = np.nonzero(self.edge_diff)
        values = self.edge_diff[sources, targets]
        order = np.lexsort((targets, sources, -values))
        return [(int(sources[k]), int(targets[k]), float(values[k])) for k in order]

    def top_nodes(self, k: int) -> list[tuple[int, float]]:
        return self.ranked_nodes()[:k]

    def top_edges(self, k: int) -> list[tuple[int, int, float]]:
        return self.ranked_edges()[:k]

    def node_frame(self, names: list[str], top_k: int | None = None) -> pd.DataFrame:
        ranked = self.ranked_nodes() if top_k is None else self.top_nodes(top_k)
        return pd.DataFrame(
            [(rank + 1, names[i], value) for rank, (i, value) in enumerate(ranked)],
            columns=NODE_COLUMNS,
        )

    def edge_frame(self, names: list[str], top_k: int | None = None) -> pd.DataFrame:
        ranked = self.ranked_edges() if top_k is None else self.top_edges(top_k)
        return pd.DataFrame(
            [
                (rank + 1, names[s], names[t], value, self.group1[s, t], self.group2[s, t])
                for rank, (s, t, value) in enumerate(ranked)
            ],
            columns=EDGE_COLUMNS,
        )


def group_difference(a_group1: np.ndarray, a_group2: np.ndarray) -> GroupDifference:
    """
    Посчитать различия узлов и ребер двух групп.

    Raises:
        UsageError: Формы матриц не совпадают или не квадратные
    """
    a1 = np.asarray(a_group1, dtype=np.float64)
    a2 = np.asarray(a_group2, dtype=np.float64)
    if a1.shape != a2.shape or a1.ndim != 2 or a1.shape[0] != a1.shape[1]:
        raise UsageError(f"group_difference: формы {a1.shape} и {a2.shape} несовместимы")
    edge_diff = np.abs(a1 - a2)
    node_diff = edge_diff.sum(axis=1) + edge_diff.sum(axis=0)
    return GroupDifference(node_diff=node_diff, edge_diff=edge_diff, group1=a1, group2=a2)


def write_group_difference(
    diff: GroupDifference,
    names: list[str],
    out_dir: Path,
    top_nodes: int = 10,
    top_edges: int = 10,
) -> tuple[Path, Path]:
    """
    Записать таблицу узлов и ранжированную таблицу ребер.

    Returns:
        tuple: (node_difference.csv, edge_difference.csv)
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    node_path = out_dir / "node_difference.csv"
    edge_path = out_dir / "edge_difference.csv"
    diff.node_frame(names, top_nodes).to_csv(node_path, index=False, float_format=FLOAT_FORMAT)
    diff.edge_frame(names, top_edges).to_csv(edge_path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Различия групп записаны в {out_dir}")
    return node_path, edge_path
