"""Поиск ориентированных циклов и проверки ацикличности."""

import networkx as nx
import numpy as np

from ..utils.errors import DataError

WHITE, GREY, BLACK = 0, 1, 2


def find_cycle(adjacency) -> list[tuple[int, int]] | None:
    """
    Найти ориентированный цикл в носителе матрицы (ребро j → i при A[j, i] ≠ 0).

    Обход в глубину детерминирован: старт с наименьшего непосещенного узла,
    соседи в порядке возрастания индекса.

    Returns:
        list | None: Ребра цикла по порядку обхода или None, если граф ацикличен
    """
    support = np.asarray(adjacency) != 0
    n = support.shape[0]
    successors = [np.flatnonzero(support[i]).tolist() for i in range(n)]
    color = [WHITE] * n

    for root in range(n):
        if color[root] != WHITE:
            continue
        color[root] = GREY
        path = [root]
        pending = [iter(successors[root])]
        while pending:
            node = path[-1]
            for child in pending[-1]:
                if color[child] == GREY:
                    loop = path[path.index(child) :]
                    return list(zip(loop, loop[1:])) + [(node, child)]
                if color[child] == WHITE:
                    color[child] = GREY
                    path.append(child)
                    pending.append(iter(successors[child]))
                    break
            else:
                color[node] = BLACK
                path.pop()
                pending.pop()
    return None


def to_digraph(adjacency) -> nx.DiGraph:
    """Носитель матрицы как nx.DiGraph (узлы 0..N-1)."""
    support = (np.asarray(adjacency) != 0).astype(int)
    return nx.from_numpy_array(support, create_using=nx.DiGraph)


def is_acyclic(adjacency) -> bool:
    """Независимая проверка ацикличности через networkx."""
    return nx.is_directed_acyclic_graph(to_digraph(adjacency))


def topological_order(adjacency) -> list[int]:
    """
    Топологический порядок узлов.

    Raises:
        DataError: Граф содержит цикл
    """
    try:
        return list(nx.topological_sort(to_digraph(adjacency)))
    except nx.NetworkXUnfeasible as e:
        raise DataError("Граф содержит ориентированный цикл") from e
