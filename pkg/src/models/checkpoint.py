"""
Сохранение и загрузка контрольных точек модели в JSON.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..utils.errors import ParseError
from .graph import BrainGraph
from .network import ModelParams

logger = logging.getLogger(__name__)

FORMAT = "st-dagcn-checkpoint/1"


@dataclass
class Checkpoint:
    """Содержимое контрольной точки."""

    graph: BrainGraph
    params: ModelParams
    roi_names: list[str]
    config: dict[str, Any] = field(default_factory=dict)


def _encode(array: np.ndarray) -> dict[str, Any]:
    # float.__repr__ восстанавливается без потерь, поэтому tolist() достаточно
    return {"shape": list(array.shape), "data": np.asarray(array, dtype=np.float64).reshape(-1).tolist()}


def _decode(entry: dict[str, Any]) -> np.ndarray:
    return np.asarray(entry["data"], dtype=np.float64).reshape(entry["shape"])


class CheckpointStorage:
    """
    Хранилище контрольной точки: граф, параметры, статистики batch norm и эхо конфигурации.
    """

    def __init__(self, storage_path: Path):
        """
        Args:
            storage_path: Путь к JSON файлу
        """
        self.storage_path = Path(storage_path)

    def save(self, checkpoint: Checkpoint) -> Path:
        """
        Сохранить контрольную точку.

        Args:
            checkpoint: Граф, параметры и метаданные

        Returns:
            Path: Путь к файлу
        """
        graph, params = checkpoint.graph, checkpoint.params
        data = {
            "format": FORMAT,
            "config": checkpoint.config,
            "n_nodes": graph.n_nodes,
            "alpha": graph.alpha,
            "roi_names": list(checkpoint.roi_names),
            "adjacency": graph.numpy().tolist(),
            "architecture": {
                "n_layers": len(params.layers),
                "hidden_channels": params.hidden_channels,
                "in_channels": int(params.layers[0].ws.shape[0]),
                "kernel": params.kernel,
                "dropout": params.dropout,
            },
            "parameters": {name: _encode(t.data) for name, t in params.named_parameters().items()},
            "running_stats": {
                name: {"mean": _encode(s.mean), "var": _encode(s.var), "updates": s.updates}
                for name, s in params.named_running_stats().items()
            },
        }

        self.storage_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.storage_path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=1)
        logger.info(f"Контрольная точка сохранена в {self.storage_path}")
        return self.storage_path

    def load(self) -> Checkpoint:
        """
        Загрузить контрольную точку.

        Returns:
            Checkpoint: Восстановленные граф и параметры

        Raises:
            ParseError: Файл отсутствует, поврежден или имеет другой формат
        """
        try:
            with open(self.storage_path, encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ParseError(f"Не удалось прочитать контрольную точку {self.storage_path}: {e}") from e

        if data.get("format") != FORMAT:
            raise ParseError(f"{self.storage_path}: неизвестный формат {data.get('format')!r}")

        try:
            arch = data["architecture"]
            n_nodes = int(data["n_nodes"])
            params = ModelParams.create(
                n_nodes,
                np.random.default_rng(0),
                hidden_channels=int(arch["hidden_channels"]),
                kernel=int(arch["kernel"]),
                dropout=float(arch["dropout"]),
                in_channels=int(arch["in_channels"]),
            )
            for name, tensor in params.named_parameters().items():
                values = _decode(data["parameters"][name])
                if values.shape != tensor.shape:
                    raise ParseError(f"{self.storage_path}: параметр {name} имеет форму {values.shape}")
                tensor.data = values
            for name, stats in params.named_running_stats().items():
                entry = data["running_stats"][name]
                stats.mean = _decode(entry["mean"])
                stats.var = _decode(entry["var"])
                stats.updates = int(entry.get("updates", 0))
            graph = BrainGraph(np.asarray(data["adjacency"], dtype=np.float64))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, ParseError):
                raise
            raise ParseError(f"{self.storage_path}: повреждена контрольная точка ({e})") from e

        logger.debug(f"Контрольная точка загружена из {self.storage_path}")
        return Checkpoint(
            graph=graph,
            params=params,
            roi_names=list(data.get("roi_names", [])),
            config=data.get("config", {}),
        )
