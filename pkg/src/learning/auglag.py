"""Состояние и внешний шаг метода расширенного лагранжиана."""

import logging
import math
from dataclasses import dataclass, replace

from ..utils.errors import ConfigError, UsageError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AugLagState:
    """
    Attributes:
        eta: Множитель Лагранжа η
        c: Штраф c (не убывает)
        beta: Множитель роста штрафа β > 1
        gamma: Порог прогресса 0 < γ < 1
        k: Номер внешней итерации
        h_prev: Значение ограничения на предыдущей итерации
    """

    eta: float = 0.0
    c: float = 1.0
    beta: float = 10.0
    gamma: float = 0.25
    k: int = 0
    h_prev: float = math.inf

    def __post_init__(self):
        if not self.beta > 1.0:
            raise ConfigError(f"beta должен быть > 1, получено {self.beta}")
        if not 0.0 < self.gamma < 1.0:
            raise ConfigError(f"gamma должен быть в (0, 1), получено {self.gamma}")


def outer_step(h_k: float, state: AugLagState) -> AugLagState:
    """
    η ← η + c·h_k; c ← β·c, если |h_k| > γ·|h_prev|, иначе без изменений.

    Raises:
        UsageError: h_k < 0
    """
    if h_k < 0:
        raise UsageError(f"outer_step: h должно быть ≥ 0, получено {h_k}")
    grow = abs(h_k) > state.gamma * abs(state.h_prev)
    new_state = replace(
        state,
        eta=state.eta + state.c * h_k,
        c=state.beta * state.c if grow else state.c,
        h_prev=h_k,
        k=state.k + 1,
    )
    logger.debug(f"outer_step: h={h_k:.3e}, eta={new_state.eta:.3e}, c={new_state.c:.3e}")
    return new_state
