"""Случайные подпоследовательности для обучения и голосования."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..engine import Tensor
from ..utils.errors import ConfigError
from .records import SubjectRecord


@dataclass
class Batch:
    """Мини-батч окон: x [B, N, T', 1] и метки [B]."""

    x: np.ndarray
    labels: np.ndarray
    starts: np.ndarray

    def __len__(self) -> int:
        return self.x.shape[0]


def draw_start(n_timepoints: int, length: int, rng: np.random.Generator) -> int:
    """
    Начало окна, равномерно в [0, T_total - T'].

    Raises:
        ConfigError: T' > T_total
    """
    if length > n_timepoints:
        raise ConfigError(f"Длина окна {length} больше длины ряда {n_timepoints}")
    return int(rng.integers(0, n_timepoints - length + 1))


def sample_subsequence(record: SubjectRecord, length: int, rng: np.random.Generator) -> Tensor:
    """
    Непрерывное окно длины T' одновременно по всем ROI.

    Returns:
        Tensor: [N, T', 1]
    """
    start = draw_start(record.n_timepoints, length, rng)
    return Tensor(record.series[:, start : start + length, None])


def sample_batch(records: Sequence[SubjectRecord], length: int, rng: np.random.Generator) -> Batch:
    """Одно случайное окно на каждого субъекта."""
    starts = np.array([draw_start(r.n_timepoints, length, rng) for r in records], dtype=np.int64)
    x = np.stack([r.series[:, s : s + length] for r, s in zip(records, starts)])[..., None]
    return Batch(x=x, labels=np.array([r.label for r in records], dtype=np.float64), starts=starts)
