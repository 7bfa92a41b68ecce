"""
Дифференцируемые примитивы, необходимые модели ST-DAGCN.

Каждый примитив вычисляет результат в numpy и, если есть активная лента
и хотя бы один вход требует градиента, записывает функцию обратного прохода.
"""

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import expit

from ..utils.errors import ConfigError, DataError, ShapeError
from .tensor import Mode, Tensor, as_tensor, current_tape

BN_EPS = 1e-5
BN_MOMENTUM = 0.1


def _emit(op: str, data: np.ndarray, inputs: Sequence[Tensor], fn) -> Tensor:
    """Создать выходной тензор и записать операцию на активную ленту."""
    inputs = tuple(inputs)
    out = Tensor(data, requires_grad=any(t.requires_grad for t in inputs))
    tape = current_tape()
    if out.requires_grad and tape is not None:
        tape.record(op, inputs, out, fn)
    return out


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Свернуть градиент обратно к форме входа после broadcasting."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


# --- поэлементные операции -------------------------------------------------


def add(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    return _emit(
        "add",
        a.data + b.data,
        (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)),
    )


def sub(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    return _emit(
        "sub",
        a.data - b.data,
        (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)),
    )


def mul(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    return _emit(
        "mul",
        a.data * b.data,
        (a, b),
        lambda g: (_unbroadcast(g * b.data, a.shape), _unbroadcast(g * a.data, b.shape)),
    )


def relu(x: Tensor) -> Tensor:
    """max(0, x); субградиент в нуле равен 0."""
    active = x.data > 0
    return _emit("relu", np.where(active, x.data, 0.0), (x,), lambda g: (g * active,))


# --- форма ------------------------------------------------------------------


def reshape(x: Tensor, shape: tuple[int, ...]) -> Tensor:
    original = x.shape
    return _emit("reshape", x.data.reshape(shape), (x,), lambda g: (g.reshape(original),))


def transpose(x: Tensor, axes: Sequence[int]) -> Tensor:
    axes = tuple(axes)
    inverse = tuple(np.argsort(axes))
    return _emit("transpose", x.data.transpose(axes), (x,), lambda g: (g.transpose(inverse),))


def tensor_sum(x: Tensor) -> Tensor:
    """Сумма всех элементов."""
    return _emit("sum", np.asarray(x.data.sum()), (x,), lambda g: (np.full(x.shape, float(g)),))


def tensor_mean(x: Tensor) -> Tensor:
    """Среднее всех элементов."""
    n = x.size
    return _emit("mean", np.asarray(x.data.mean()), (x,), lambda g: (np.full(x.shape, float(g) / n),))


def l1_norm(x: Tensor) -> Tensor:
    """Сумма модулей; субградиент sign(x), равный 0 в нуле."""
    sign = np.sign(x.data)
    return _emit("l1_norm", np.asarray(np.abs(x.data).sum()), (x,), lambda g: (float(g) * sign,))


# --- линейная алгебра и свертка ----------------------------------------------


def matmul(a, b) -> Tensor:
    """
    Матричное произведение [..., p, q] × [..., q, r] с broadcasting по ведущим осям.

    Raises:
        ShapeError: Несовпадение внутренних размерностей
    """
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
        raise ShapeError(f"matmul: несовместимые формы {a.shape} и {b.shape}")

    def _backward(g):
        ga = np.matmul(g, np.swapaxes(b.data, -1, -2))
        gb = np.matmul(np.swapaxes(a.data, -1, -2), g)
        return _unbroadcast(ga, a.shape), _unbroadcast(gb, b.shape)

    return _emit("matmul", np.matmul(a.data, b.data), (a, b), _backward)


def conv1d(x: Tensor, kernel: Tensor) -> Tensor:
    """
    Кросс-корреляция по оси времени с нулевым same-padding.

    Args:
        x: Вход [..., T, f_in]
        kernel: Ядро [k, f_in, f_out], k нечетное

    Returns:
        Tensor: [..., T, f_out]

    Raises:
        ConfigError: Четная ширина ядра
        ShapeError: Несовпадение числа входных каналов
    """
    if kernel.ndim != 3:
        raise ShapeError(f"conv1d: ядро должно быть [k, f_in, f_out], получено {kernel.shape}")
    k, f_in, f_out = kernel.shape
    if k % 2 == 0:
        raise ConfigError(f"conv1d: ширина ядра должна быть нечетной, получено {k}")
    if x.ndim < 2 or x.shape[-1] != f_in:
        raise ShapeError(f"conv1d: вход {x.shape} несовместим с ядром {kernel.shape}")

    pad = k // 2
    steps = x.shape[-2]
    widths = [(0, 0)] * (x.ndim - 2) + [(pad, pad), (0, 0)]
    padded = np.pad(x.data, widths)
    lead = x.shape[:-2]

    out = np.zeros(lead + (steps, f_out))
    for j in range(k):
        out += padded[..., j : j + steps, :] @ kernel.data[j]

    def _backward(g):
        g2 = g.reshape(-1, f_out)
        grad_kernel = np.empty_like(kernel.data)
        grad_padded = np.zeros_like(padded)
        for j in range(k):
            window = padded[..., j : j + steps, :].reshape(-1, f_in)
            grad_kernel[j] = window.T @ g2
            grad_padded[..., j : j + steps, :] += g @ kernel.data[j].T
        return grad_padded[..., pad : pad + steps, :], grad_kernel

    return _emit("conv1d", out, (x, kernel), _backward)


# --- нормализация, регуляризация, пулинг -------------------------------------


@dataclass
class RunningStats:
    """Скользящие статистики batch norm по каналам."""

    mean: np.ndarray
    var: np.ndarray
    momentum: float = BN_MOMENTUM
    eps: float = BN_EPS
    updates: int = field(default=0)

    @classmethod
    def initial(cls, channels: int) -> "RunningStats":
        return cls(mean=np.zeros(channels), var=np.ones(channels))


def batch_norm(x: Tensor, gamma: Tensor, beta: Tensor, stats: RunningStats, mode: Mode) -> Tensor:
    """
    Нормализация по последней (канальной) оси; статистики по всем остальным осям.

    В режиме train используются статистики батча и обновляются скользящие
    (дисперсия для скользящей оценки несмещенная); в режиме eval используются скользящие.
    """
    axes = tuple(range(x.ndim - 1))
    eps = stats.eps

    if mode == Mode.TRAIN:
        n = math.prod(x.shape[:-1])
        mu = x.data.mean(axis=axes)
        var = x.data.var(axis=axes)
        inv_std = 1.0 / np.sqrt(var + eps)
        xhat = (x.data - mu) * inv_std

        m = stats.momentum
        stats.mean = (1.0 - m) * stats.mean + m * mu
        unbiased = var * n / (n - 1) if n > 1 else var
        stats.var = (1.0 - m) * stats.var + m * unbiased
        stats.updates += 1

        def _backward(g):
            dxhat = g * gamma.data
            dx = (inv_std / n) * (
                n * dxhat - dxhat.sum(axis=axes) - xhat * (dxhat * xhat).sum(axis=axes)
            )
            return dx, (g * xhat).sum(axis=axes), g.sum(axis=axes)

    else:
        inv_std = 1.0 / np.sqrt(stats.var + eps)
        xhat = (x.data - stats.mean) * inv_std

        def _backward(g):
            return g * gamma.data * inv_std, (g * xhat).sum(axis=axes), g.sum(axis=axes)

    return _emit("batch_norm", xhat * gamma.data + beta.data, (x, gamma, beta), _backward)


def dropout(x: Tensor, rate: float, mode: Mode, rng: np.random.Generator | None = None) -> Tensor:
    """
    Обнуляет элементы с вероятностью rate и масштабирует остальные на 1/(1-rate).

    Raises:
        ConfigError: rate вне [0, 1) или нет генератора в режиме train
    """
    if not 0.0 <= rate < 1.0:
        raise ConfigError(f"dropout: rate должен быть в [0, 1), получено {rate}")
    if mode == Mode.EVAL or rate == 0.0:
        return x
    if rng is None:
        raise ConfigError("dropout: в режиме train нужен генератор случайных чисел")
    mask = (rng.random(x.shape) >= rate) / (1.0 - rate)
    return _emit("dropout", x.data * mask, (x,), lambda g: (g * mask,))


def global_mean_pool(x: Tensor) -> Tensor:
    """Среднее по осям узлов и времени: [..., N, T, f] → [..., f]."""
    if x.ndim < 3:
        raise ShapeError(f"global_mean_pool ожидает [..., N, T, f], получено {x.shape}")
    count = x.shape[-3] * x.shape[-2]
    return _emit(
        "global_mean_pool",
        x.data.mean(axis=(-3, -2)),
        (x,),
        lambda g: (np.broadcast_to(g[..., None, None, :] / count, x.shape).copy(),),
    )


# --- функция потерь -----------------------------------------------------------


def bce_with_sigmoid(logit: Tensor, labels) -> Tensor:
    """
    Средняя бинарная кросс-энтропия от логитов в устойчивой форме log(1 + e^z) - y·z.

    Raises:
        ShapeError: Число меток не совпадает с числом логитов
        DataError: Метки не из {0, 1}
    """
    y = np.asarray(labels, dtype=np.float64)
    if y.size != logit.size:
        raise ShapeError(f"bce_with_sigmoid: {y.size} меток на {logit.size} логитов")
    y = y.reshape(logit.shape)
    if not np.all((y == 0.0) | (y == 1.0)):
        raise DataError("bce_with_sigmoid: метки должны быть 0 или 1")
    z = logit.data
    count = max(z.size, 1)
    value = np.mean(np.logaddexp(0.0, z) - y * z)
    return _emit(
        "bce_with_sigmoid",
        np.asarray(value),
        (logit,),
        lambda g: (float(g) * (expit(z) - y) / count,),
    )
