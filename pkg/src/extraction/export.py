"""Запись результатов извлечения DAG в CSV."""

import logging
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from ..utils.tables import FLOAT_FORMAT, write_labeled_matrix

logger = logging.getLogger(__name__)

EDGE_COLUMNS = ["source_index", "source_name", "target_index", "target_name", "weight", "status"]

STATUS_BY_REASON = {"threshold": "threshold_removed", "cycle": "cycle_removed"}


def write_edge_list(path: Path, adjacency: np.ndarray, names: Sequence[str], removed: Sequence = ()) -> Path:
    """
    Записать ребра: сохраненные (status=kept) и удаленные с причиной.

    Args:
        path: Путь к CSV
        adjacency: Матрица сохраненных ребер
        names: Имена ROI
        removed: RemovedEdge из журнала извлечения
    """
    rows = [
        {
            "source_index": int(s),
            "source_name": names[s],
            "target_index": int(t),
            "target_name": names[t],
            "weight": float(adjacency[s, t]),
            "status": "kept",
        }
        for s, t in np.argwhere(np.asarray(adjacency) != 0.0)
    ]
    rows += [
        {
            "source_index": e.source,
            "source_name": names[e.source],
            "target_index": e.target,
            "target_name": names[e.target],
            "weight": e.weight,
            "status": STATUS_BY_REASON[str(e.reason)],
        }
        for e in removed
    ]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows, columns=EDGE_COLUMNS).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.debug(f"Список ребер ({len(rows)}) записан в {path}")
    return path


def write_extraction(result, names: Sequence[str], out_dir: Path, transpose: bool = False) -> dict[str, Path]:
    """
    Записать edges.csv, A_dag.csv и residual.csv.

    Args:
        result: ExtractedDag
        names: Имена ROI
        out_dir: Каталог результатов
        transpose: Записывать матрицы как Aᵀ (строка: цель, столбец: источник)
    """
    out_dir = Path(out_dir)
    orient = (lambda m: m.T) if transpose else (lambda m: m)
    paths = {
        "edges": write_edge_list(out_dir / "edges.csv", result.adjacency, names, result.removed_edges),
        "adjacency": write_labeled_matrix(out_dir / "A_dag.csv", orient(result.adjacency), list(names)),
        "residual": write_labeled_matrix(out_dir / "residual.csv", orient(result.residual), list(names)),
    }
    logger.info(f"Результаты извлечения записаны в {out_dir}")
    return paths
