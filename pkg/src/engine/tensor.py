"""
Плотные тензоры float64 и лента для обратного режима дифференцирования.
"""

import logging
from contextvars import ContextVar
from dataclasses import dataclass
from .._compat import StrEnum
from typing import Callable, Sequence

import numpy as np

from ..utils.errors import ContractError

logger = logging.getLogger(__name__)

BackwardFn = Callable[[np.ndarray], Sequence[np.ndarray | None]]

# Лента, на которую записываются операции в текущем контексте (своя у каждого потока)
_active_tape: ContextVar["Tape | None"] = ContextVar("active_tape", default=None)


class Mode(StrEnum):
    """Режим прямого прохода."""

    TRAIN = "train"
    EVAL = "eval"


class Tensor:
    """
    Многомерный массив float64 с необязательным градиентом.

    Градиент накапливается при каждом вызове backward, пока не будет
    сброшен через zero_grad().
    """

    def __init__(self, data, requires_grad: bool = False, name: str | None = None):
        """
        Args:
            data: Значения (любой объект, приводимый к np.ndarray)
            requires_grad: Нужно ли вычислять градиент по тензору
            name: Имя для диагностики
        """
        self.data: np.ndarray = np.asarray(data, dtype=np.float64)
        self.requires_grad = requires_grad
        self.grad: np.ndarray | None = None
        self.tape: Tape | None = None
        self.name = name

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        """Значение скалярного тензора."""
        return float(self.data.reshape(-1)[0]) if self.data.size == 1 else float("nan")

    def numpy(self) -> np.ndarray:
        """Копия данных."""
        return self.data.copy()

    def zero_grad(self) -> None:
        self.grad = None

    def accumulate_grad(self, grad: np.ndarray) -> None:
        """Прибавить градиент той же формы."""
        if self.grad is None:
            self.grad = np.array(grad, dtype=np.float64)
        else:
            self.grad = self.grad + grad

    def backward(self) -> None:
        """Обратный проход от этого скаляра."""
        backward(self)

    # Арифметика делегируется примитивам из ops
    def __add__(self, other):
        from .ops import add

        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        from .ops import sub

        return sub(self, other)

    def __rsub__(self, other):
        from .ops import sub

        return sub(other, self)

    def __mul__(self, other):
        from .ops import mul

        return mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        from .ops import mul

        return mul(self, -1.0)

    def __matmul__(self, other):
        from .ops import matmul

        return matmul(self, other)

    def __repr__(self) -> str:
        label = f" name={self.name!r}" if self.name else ""
        return f"<Tensor shape={self.shape} requires_grad={self.requires_grad}{label}>"


def as_tensor(value) -> Tensor:
    """Обернуть константу в Tensor (тензоры возвращаются как есть)."""
    return value if isinstance(value, Tensor) else Tensor(value)


@dataclass
class TapeRecord:
    """Одна выполненная примитивная операция."""

    op: str
    inputs: tuple[Tensor, ...]
    output: Tensor
    backward: BackwardFn


class Tape:
    """
    Упорядоченная запись выполненных операций.

    Использование:
        >>> with Tape() as tape:
        ...     loss = bce_with_sigmoid(forward(...), labels)
        >>> tape.backward(loss)
    """

    def __init__(self):
        self.records: list[TapeRecord] = []
        self._tokens = []

    def __enter__(self) -> "Tape":
        self._tokens.append(_active_tape.set(self))
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        _active_tape.reset(self._tokens.pop())

    def __len__(self) -> int:
        return len(self.records)

    def record(self, op: str, inputs: tuple[Tensor, ...], output: Tensor, fn: BackwardFn) -> None:
        output.tape = self
        self.records.append(TapeRecord(op, inputs, output, fn))

    def backward(self, loss: Tensor) -> None:
        """
        Пройти ленту в обратном порядке и накопить градиенты.

        Raises:
            ContractError: loss не скаляр или не записан на этой ленте
        """
        if loss.size != 1:
            raise ContractError(f"backward ожидает скаляр, получена форма {loss.shape}")
        if loss.tape is not self:
            raise ContractError("loss не был получен на этой ленте")

        pending: dict[int, np.ndarray] = {id(loss): np.ones_like(loss.data)}
        reached: dict[int, Tensor] = {id(loss): loss}

        for rec in reversed(self.records):
            upstream = pending.get(id(rec.output))
            if upstream is None:
                continue
            for tensor, grad in zip(rec.inputs, rec.backward(upstream)):
                if grad is None or not tensor.requires_grad:
                    continue
                key = id(tensor)
                if key in pending:
                    pending[key] = pending[key] + grad
                else:
                    pending[key] = grad
                    reached[key] = tensor

        for key, tensor in reached.items():
            tensor.accumulate_grad(pending[key])
        logger.debug(f"backward: {len(self.records)} операций, {len(reached)} тензоров")


def current_tape() -> Tape | None:
    """Лента текущего контекста или None."""
    return _active_tape.get()


def backward(loss: Tensor) -> None:
    """
    Обратный проход от скалярной функции потерь.

    Raises:
        ContractError: loss не скаляр или не записан ни на одной ленте
    """
    if loss.size != 1:
        raise ContractError(f"backward ожидает скаляр, получена форма {loss.shape}")
    if loss.tape is None:
        raise ContractError("loss не записан на ленте: вычисляйте его внутри `with Tape()`")
    loss.tape.backward(loss)
