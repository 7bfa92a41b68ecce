"""Данные: когорты, загрузка, подпоследовательности, синтетический генератор."""

from .loader import load_dataset, write_dataset
from .records import SubjectRecord, TimeSeriesDataset, standardize, standardize_rows
from .sampling import Batch, sample_batch, sample_subsequence
from .synthetic import SyntheticTruth, generate_synthetic, write_ground_truth

__all__ = [
    "Batch",
    "SubjectRecord",
    "SyntheticTruth",
    "TimeSeriesDataset",
    "generate_synthetic",
    "load_dataset",
    "sample_batch",
    "sample_subsequence",
    "standardize",
    "standardize_rows",
    "write_dataset",
    "write_ground_truth",
]
