"""Оптимизатор Adam с развязанным weight decay."""

from dataclasses import dataclass, field
from typing import Collection, Mapping

import numpy as np

from ..utils.errors import ShapeError
from .tensor import Tensor


@dataclass
class AdamState:
    """
    Состояние Adam: моменты по каждому параметру и счетчик шагов.

    Attributes:
        lr: Шаг обучения
        beta1: Коэффициент первого момента
        beta2: Коэффициент второго момента
        eps: Стабилизатор знаменателя
        weight_decay: Коэффициент развязанного L2 (только для матриц весов)
    """

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 1e-3
    step: int = 0
    first_moment: dict[str, np.ndarray] = field(default_factory=dict)
    second_moment: dict[str, np.ndarray] = field(default_factory=dict)


def adam_step(
    params: Mapping[str, Tensor],
    grads: Mapping[str, np.ndarray | None],
    state: AdamState,
    decay: Collection[str] = (),
) -> Mapping[str, Tensor]:
    """
    Один шаг Adam с поправкой смещения; параметры обновляются на месте.

    Args:
        params: Параметры по имени
        grads: Градиенты по имени (отсутствующий градиент считается нулевым)
        state: Состояние оптимизатора
        decay: Имена параметров, к которым применяется weight decay

    Returns:
        Mapping[str, Tensor]: Те же параметры после обновления

    Raises:
        ShapeError: Форма градиента не совпадает с формой параметра
    """
    state.step += 1
    t = state.step
    correction1 = 1.0 - state.beta1**t
    correction2 = 1.0 - state.beta2**t

    for name, param in params.items():
        grad = grads.get(name)
        if grad is None:
            grad = np.zeros_like(param.data)
        if grad.shape != param.shape:
            raise ShapeError(f"adam_step: градиент {name} имеет форму {grad.shape}, параметр {param.shape}")

        m = state.first_moment.get(name)
        v = state.second_moment.get(name)
        if m is None or v is None:
            m = np.zeros_like(param.data)
            v = np.zeros_like(param.data)
        m = state.beta1 * m + (1.0 - state.beta1) * grad
        v = state.beta2 * v + (1.0 - state.beta2) * grad * grad
        state.first_moment[name] = m
        state.second_moment[name] = v

        update = state.lr * (m / correction1) / (np.sqrt(v / correction2) + state.eps)
        if name in decay:
            update = update + state.lr * state.weight_decay * param.data
        param.data = param.data - update

    return params
