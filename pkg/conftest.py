"""Общие фикстуры тестов."""

import os

import numpy as np
import pytest

from src.config import reset_settings

FD_STEP = 1e-5


def numerical_grad(fn, array: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    """Центральные разности fn() по каждому элементу array (array меняется на месте и восстанавливается)."""
    grad = np.zeros_like(array)
    flat = array.reshape(-1)
    out = grad.reshape(-1)
    for i in range(flat.size):
        original = flat[i]
        flat[i] = original + step
        plus = fn()
        flat[i] = original - step
        minus = fn()
        flat[i] = original
        out[i] = (plus - minus) / (2.0 * step)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = np.linalg.norm(analytic) + np.linalg.norm(numeric)
    return float(np.linalg.norm(analytic - numeric) / max(scale, 1e-12))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def fd():
    """Пара (numerical_grad, relative_error) для проверки градиентов."""
    return numerical_grad, relative_error


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Изолировать тесты от окружения и кэша настроек."""
    for key in list(os.environ):
        if key.startswith("STDAGCN_"):
            monkeypatch.delenv(key)
    reset_settings()
    yield
    reset_settings()
