"""Обучаемая матрица смежности мозгового графа."""

import numpy as np

from ..engine import Tensor, mul
from ..utils.errors import DataError, ShapeError


class BrainGraph:
    """
    Взвешенный ориентированный граф над N узлами.

    Элемент A[j, i] задает силу ребра v_j → v_i. Диагональ всегда нулевая:
    она маскируется перед каждым прямым проходом и после каждого шага оптимизатора.
    """

    def __init__(self, adjacency, trainable: bool = True):
        """
        Args:
            adjacency: Квадратная матрица N×N
            trainable: Вычислять ли градиент по A

        Raises:
            ShapeError: Матрица не квадратная
            DataError: Есть нечисловые значения
        """
        a = np.array(adjacency, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ShapeError(f"Матрица смежности должна быть квадратной, получено {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DataError("Матрица смежности содержит нечисловые значения")
        self.A = Tensor(a, requires_grad=trainable, name="A")
        self._off_diagonal = 1.0 - np.eye(a.shape[0])
        self.mask_diagonal()

    @classmethod
    def random(cls, n_nodes: int, scale: float, rng: np.random.Generator) -> "BrainGraph":
        """Равномерная инициализация U(-scale, scale) вне диагонали."""
        return cls(rng.uniform(-scale, scale, size=(n_nodes, n_nodes)))

    @property
    def n_nodes(self) -> int:
        return self.A.shape[0]

    @property
    def alpha(self) -> float:
        """Коэффициент α = 1/N в ограничении ацикличности."""
        return 1.0 / self.n_nodes

    @property
    def trainable(self) -> bool:
        return self.A.requires_grad

    def masked(self) -> Tensor:
        """A ∘ (1 - I), записанное на ленту."""
        return mul(self.A, self._off_diagonal)

    def mask_diagonal(self) -> None:
        np.fill_diagonal(self.A.data, 0.0)

    def numpy(self) -> np.ndarray:
        return self.A.numpy()

    def __repr__(self) -> str:
        edges = int(np.count_nonzero(self.A.data))
        return f"<BrainGraph(N={self.n_nodes}, nonzero={edges}, trainable={self.trainable})>"
