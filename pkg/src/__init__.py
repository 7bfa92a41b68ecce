"""
ST-DAGCN - совместное обучение DAG эффективной связности и классификатора временных рядов.
"""

__version__ = "0.1.0"

from .config import RunConfig, SyntheticSpec, get_settings
from .data import TimeSeriesDataset, generate_synthetic, load_dataset
from .experiment import StDagcnExperiment
from .extraction import extract_dag
from .learning import fit, fit_fixed_graph

__all__ = [
    "RunConfig",
    "StDagcnExperiment",
    "SyntheticSpec",
    "TimeSeriesDataset",
    "extract_dag",
    "fit",
    "fit_fixed_graph",
    "generate_synthetic",
    "get_settings",
    "load_dataset",
]
