"""Параметры синтетического SEM-генератора."""

import json
import logging
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..utils.errors import ConfigError

logger = logging.getLogger(__name__)


class SyntheticSpec(BaseModel):
    """Описание синтетической когорты с известным DAG."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    n_nodes: int = Field(default=10, ge=2, description="Число ROI N")
    n_timepoints: int = Field(default=256, ge=2, description="Длина ряда T_total")
    subjects_per_class: int = Field(default=100, ge=1, description="Субъектов в каждом классе")
    edge_probability: float = Field(default=0.3, gt=0.0, lt=1.0, description="Вероятность ребра p")
    weight_low: float = Field(default=0.5, gt=0.0, description="Минимальный модуль веса ребра")
    weight_high: float = Field(default=1.5, gt=0.0, description="Максимальный модуль веса ребра")
    persistence: float = Field(default=0.5, ge=0.0, lt=1.0, description="Авторегрессия rho")
    noise_std: float = Field(default=0.5, gt=0.0, description="СКО шума")
    perturbed_fraction: float = Field(default=0.3, ge=0.0, le=1.0, description="Доля ребер, различающих классы")
    class_scale: float = Field(default=1.8, gt=0.0, description="Множитель kappa весов для класса 1")
    burn_in: int = Field(default=50, ge=0, description="Отбрасываемые начальные шаги")
    seed: int = Field(default=0, ge=0, description="Мастер-зерно")

    @model_validator(mode="after")
    def check_weight_range(self) -> "SyntheticSpec":
        """Диапазон весов должен быть упорядочен."""
        if self.weight_low > self.weight_high:
            raise ValueError("weight_low не может превышать weight_high")
        return self

    @classmethod
    def from_file(cls, path: Path | None) -> "SyntheticSpec":
        """
        Загрузить спецификацию из JSON файла (None дает значения по умолчанию).

        Raises:
            ConfigError: Файл не читается или значения недопустимы
        """
        try:
            data = {} if path is None else json.loads(Path(path).read_text(encoding="utf-8"))
            return cls(**data)
        except (OSError, json.JSONDecodeError, ValidationError, TypeError) as e:
            raise ConfigError(f"Недопустимая спецификация синтетических данных: {e}") from e
