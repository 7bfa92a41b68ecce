"""
Чтение и запись квадратных матриц с подписями ROI в CSV.

Формат: в первой строке и первом столбце имена ROI.
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import ParseError

logger = logging.getLogger(__name__)

# 17 значащих цифр достаточно для точного восстановления float64
FLOAT_FORMAT = "%.17g"


def write_labeled_matrix(path: Path, matrix: np.ndarray, names: list[str]) -> Path:
    """
    Записать матрицу N×N с именами ROI в заголовке строк и столбцов.

    Args:
        path: Путь к CSV файлу
        matrix: Квадратная матрица
        names: Имена узлов (длина N)

    Returns:
        Path: Путь к записанному файлу
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(np.asarray(matrix, dtype=np.float64), index=names, columns=names)
    frame.index.name = "roi"
    frame.to_csv(path, float_format=FLOAT_FORMAT)
    logger.debug(f"Матрица {matrix.shape} записана в {path}")
    return path


def read_labeled_matrix(path: Path) -> tuple[np.ndarray, list[str]]:
    """
    Прочитать матрицу, записанную write_labeled_matrix.

    Returns:
        tuple: (матрица float64, имена ROI)

    Raises:
        ParseError: Матрица не квадратная, имена не совпадают или есть нечисловые ячейки
    """
    path = Path(path)
    frame = pd.read_csv(path, index_col=0, dtype=str)
    names = [str(c) for c in frame.columns]
    if frame.shape[0] != frame.shape[1]:
        raise ParseError(f"Матрица в {path} не квадратная: {frame.shape}")
    if [str(i) for i in frame.index] != names:
        raise ParseError(f"Имена строк и столбцов в {path} не совпадают")

    values = np.empty(frame.shape, dtype=np.float64)
    for j, column in enumerate(frame.columns):
        parsed = pd.to_numeric(frame[column], errors="coerce")
        bad = parsed.isna().to_numpy()
        if bad.any():
            row = int(np.argmax(bad))
            # +2: заголовок и нумерация строк с единицы
            raise ParseError(f"Нечисловое значение в {path}", row=row + 2, column=str(column))
        values[:, j] = parsed.to_numpy(dtype=np.float64)
    return values, names
