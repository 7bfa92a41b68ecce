"""Тензорный движок с лентой обратного дифференцирования."""

from .ops import (
    RunningStats,
    add,
    batch_norm,
    bce_with_sigmoid,
    conv1d,
    dropout,
    global_mean_pool,
    l1_norm,
    matmul,
    mul,
    relu,
    reshape,
    sub,
    tensor_mean,
    tensor_sum,
    transpose,
)
from .optim import AdamState, adam_step
from .tensor import Mode, Tape, Tensor, as_tensor, backward, current_tape

__all__ = [
    "AdamState",
    "Mode",
    "RunningStats",
    "Tape",
    "Tensor",
    "adam_step",
    "add",
    "as_tensor",
    "backward",
    "batch_norm",
    "bce_with_sigmoid",
    "conv1d",
    "current_tape",
    "dropout",
    "global_mean_pool",
    "l1_norm",
    "matmul",
    "mul",
    "relu",
    "reshape",
    "sub",
    "tensor_mean",
    "tensor_sum",
    "transpose",
]
