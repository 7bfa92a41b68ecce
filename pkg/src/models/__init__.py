"""Модель ST-DAGCN и ее контрольные точки."""

from .checkpoint import Checkpoint, CheckpointStorage
from .graph import BrainGraph
from .layers import StDagcLayer, dag_conv, temporal_conv
from .network import ModelParams, forward, predict_proba

__all__ = [
    "BrainGraph",
    "Checkpoint",
    "CheckpointStorage",
    "ModelParams",
    "StDagcLayer",
    "dag_conv",
    "forward",
    "predict_proba",
    "temporal_conv",
]
