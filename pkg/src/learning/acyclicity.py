"""
Гладкое ограничение ацикличности h(A) = tr[(I + αA∘A)^N] - N и его градиент.
"""

import numpy as np

from ..models.graph import BrainGraph
from ..utils.errors import DataError


def _as_matrix(graph) -> tuple[np.ndarray, float]:
    if isinstance(graph, BrainGraph):
        return graph.A.data, graph.alpha
    a = np.asarray(graph, dtype=np.float64)
    return a, 1.0 / a.shape[0]


def _powers(a: np.ndarray, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """(M^{N-1}, M^N) для M = I + αA∘A; ровно N-1 умножений."""
    if not np.all(np.isfinite(a)):
        raise DataError("acyclicity: матрица содержит нечисловые значения")
    n = a.shape[0]
    m = np.eye(n) + alpha * a * a
    partial = np.eye(n) if n == 1 else m
    for _ in range(n - 2):
        partial = partial @ m
    return partial, partial @ m


def acyclicity(graph, alpha: float | None = None) -> float:
    """
    h(A) ≥ 0; равно нулю тогда и только тогда, когда носитель A ацикличен.

    Args:
        graph: BrainGraph или матрица N×N
        alpha: Коэффициент α (по умолчанию 1/N)
    """
    a, default_alpha = _as_matrix(graph)
    _, full = _powers(a, default_alpha if alpha is None else alpha)
    return max(float(np.trace(full)) - a.shape[0], 0.0)


def acyclicity_grad(graph, alpha: float | None = None) -> np.ndarray:
    """
    ∇h(A) = 2αN · [(I + αA∘A)^{N-1}]ᵀ ∘ A.

    При α = 1/N множитель αN равен единице.
    """
    a, default_alpha = _as_matrix(graph)
    alpha = default_alpha if alpha is None else alpha
    partial, _ = _powers(a, alpha)
    return 2.0 * alpha * a.shape[0] * partial.T * a
