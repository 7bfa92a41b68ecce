"""Детерминированные потоки случайных чисел."""

import numpy as np


def derive_rng(base_seed: int, *indices: int) -> np.random.Generator:
    """
    Получить независимый генератор для прогона/субъекта/фолда.

    Поток однозначно определяется парой (base_seed, indices), поэтому
    параллельные прогоны не зависят от порядка выполнения.

    Args:
        base_seed: Базовое зерно из конфигурации
        *indices: Индексы прогона (номер испытания, номер субъекта и т.д.)

    Returns:
        np.random.Generator: Генератор PCG64
    """
    return np.random.default_rng(np.random.SeedSequence([int(base_seed), *map(int, indices)]))
