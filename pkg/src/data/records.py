"""
Записи субъектов, когорты и стандартизация рядов ROI.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from ..utils.errors import DataError, UsageError

logger = logging.getLogger(__name__)


def standardize(row) -> tuple[np.ndarray, bool]:
    """
    z-преобразование ряда по времени (популяционное СКО).

    Args:
        row: Ряд длины ≥ 2

    Returns:
        tuple: (стандартизованный ряд, флаг постоянного ряда)
    """
    x = np.asarray(row, dtype=np.float64)
    if x.size < 2:
        raise DataError(f"standardize: нужен ряд длины ≥ 2, получено {x.size}")
    std = x.std()
    if std == 0.0 or not np.isfinite(std):
        return np.zeros_like(x), True
    return (x - x.mean()) / std, False


def standardize_rows(series: np.ndarray, subject_id: str = "") -> tuple[np.ndarray, list[int]]:
    """
    Стандартизовать каждую строку матрицы [N × T].

    Returns:
        tuple: (матрица, индексы постоянных строк)
    """
    out = np.empty_like(series, dtype=np.float64)
    constant = []
    for i, row in enumerate(series):
        out[i], flagged = standardize(row)
        if flagged:
            constant.append(i)
    if constant:
        logger.warning(f"Субъект {subject_id}: постоянные ряды ROI {constant} заменены нулями")
    return out, constant


@dataclass
class SubjectRecord:
    """
    Один субъект: метка и матрица рядов [N × T_total] (строки соответствуют ROI).
    """

    subject_id: str
    label: int
    series: np.ndarray
    standardized: bool = False
    constant_rows: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.label not in (0, 1):
            raise DataError(f"Субъект {self.subject_id}: метка должна быть 0 или 1, получено {self.label!r}")
        self.series = np.asarray(self.series, dtype=np.float64)
        if self.series.ndim != 2:
            raise DataError(f"Субъект {self.subject_id}: ожидается матрица [N × T], получено {self.series.shape}")
        if not np.all(np.isfinite(self.series)):
            raise DataError(f"Субъект {self.subject_id}: ряд содержит нечисловые значения")

    @property
    def n_nodes(self) -> int:
        return self.series.shape[0]

    @property
    def n_timepoints(self) -> int:
        return self.series.shape[1]

    def standardize(self) -> "SubjectRecord":
        """Стандартизовать ряды на месте и вернуть запись."""
        self.series, self.constant_rows = standardize_rows(self.series, self.subject_id)
        self.standardized = True
        return self


@dataclass
class TimeSeriesDataset:
    """
    Когорта субъектов с общими N и T_total.

    Attributes:
        records: Записи субъектов
        roi_names: Имена ROI (длина N)
    """

    records: list[SubjectRecord]
    roi_names: list[str]

    def __post_init__(self):
        if not self.records:
            raise DataError("Датасет не содержит субъектов")
        first = self.records[0]
        if len(self.roi_names) != first.n_nodes:
            raise DataError(f"Имен ROI {len(self.roi_names)}, а у субъекта {first.subject_id} рядов {first.n_nodes}")
        seen = set()
        for record in self.records:
            if record.series.shape != first.series.shape:
                raise DataError(
                    f"Субъект {record.subject_id}: форма {record.series.shape}, "
                    f"ожидалось {first.series.shape}"
                )
            if record.subject_id in seen:
                raise DataError(f"Повторяющийся subject_id {record.subject_id!r}")
            seen.add(record.subject_id)

    @property
    def n_nodes(self) -> int:
        return self.records[0].n_nodes

    @property
    def n_timepoints(self) -> int:
        return self.records[0].n_timepoints

    @property
    def labels(self) -> np.ndarray:
        return np.array([r.label for r in self.records], dtype=np.int64)

    def __len__(self) -> int:
        return len(self.records)

    def subset(self, indices) -> "TimeSeriesDataset":
        """Подмножество субъектов по индексам."""
        indices = list(indices)
        if not indices:
            raise UsageError("subset: пустой список индексов")
        return TimeSeriesDataset([self.records[i] for i in indices], list(self.roi_names))

    def by_label(self, label: int) -> "TimeSeriesDataset":
        """Субъекты одной группы (для раздельной оценки связности групп)."""
        return self.subset(i for i, r in enumerate(self.records) if r.label == label)

    def correlation_matrix(self) -> np.ndarray:
        """Средняя по субъектам корреляция Пирсона между ROI с нулевой диагональю."""
        total = np.zeros((self.n_nodes, self.n_nodes))
        for record in self.records:
            corr = np.corrcoef(record.series)
            total += np.nan_to_num(corr, nan=0.0)
        mean = total / len(self.records)
        np.fill_diagonal(mean, 0.0)
        return mean

    def __repr__(self) -> str:
        counts = np.bincount(self.labels, minlength=2)
        return f"<TimeSeriesDataset(M={len(self)}, N={self.n_nodes}, T={self.n_timepoints}, classes={counts.tolist()})>"
