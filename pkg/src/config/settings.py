"""
Конфигурация экспериментов ST-DAGCN.
Использует pydantic-settings для валидации и загрузки настроек из файла, окружения и .env.
"""

import json
import logging
from pathlib import Path
from typing import Any, Literal

from pydantic import Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..utils.errors import ConfigError

logger = logging.getLogger(__name__)

# Длина подпоследовательности и число голосующих окон для наборов данных
PRESETS: dict[str, dict[str, int]] = {
    "hcp": {"subsequence_length": 128, "voters": 64},
    "adni": {"subsequence_length": 100, "voters": 64},
}


class RunConfig(BaseSettings):
    """Все гиперпараметры прогона; значения по умолчанию взяты из описания метода."""

    model_config = SettingsConfigDict(
        env_prefix="STDAGCN_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="forbid",
    )

    preset: Literal["custom", "hcp", "adni"] = Field(
        default="custom", description="Набор значений T' и S для известных датасетов"
    )

    # Подпоследовательности и голосование
    subsequence_length: int = Field(default=128, ge=1, description="Длина подпоследовательности T'")
    voters: int = Field(default=64, ge=1, description="Число голосующих окон S")

    # Функция оценки и оптимизатор
    l1_lambda: float = Field(default=1e-3, ge=0.0, description="Коэффициент L1 для матрицы A")
    learning_rate: float = Field(default=1e-3, ge=0.0, description="Шаг Adam")
    batch_size: int = Field(default=64, ge=1, description="Размер мини-батча")
    dropout: float = Field(default=0.5, ge=0.0, lt=1.0, description="Доля dropout после каждого слоя")
    weight_decay: float = Field(default=1e-3, ge=0.0, description="Развязанный weight decay для матриц весов")
    inner_epochs: int = Field(default=100, ge=0, description="Эпох на одну внешнюю итерацию")

    # Расширенный лагранжиан
    penalty_growth: float = Field(default=10.0, gt=1.0, description="Множитель штрафа beta")
    progress_ratio: float = Field(default=0.25, gt=0.0, lt=1.0, description="Порог прогресса gamma")
    eta_init: float = Field(default=0.0, description="Начальный множитель Лагранжа")
    c_init: float = Field(default=1.0, gt=0.0, description="Начальный штраф")
    h_tol: float = Field(default=1e-8, gt=0.0, description="Допуск ограничения ацикличности")
    c_max: float = Field(default=1e16, gt=0.0, description="Максимальный штраф")
    k_max: int = Field(default=20, ge=0, description="Максимум внешних итераций")

    # Архитектура
    temporal_kernel: int = Field(default=7, ge=1, description="Ширина временного ядра (нечетная)")
    hidden_channels: int = Field(default=64, ge=1, description="Число признаков в каждом слое")
    init_scale: float = Field(default=0.1, gt=0.0, description="Полуширина равномерной инициализации A")

    # Постобработка и оценка
    epsilon: float = Field(default=0.015, gt=0.0, description="Порог для разреживания A")
    cv_folds: int = Field(default=5, ge=2, description="Число фолдов")
    cv_repeats: int = Field(default=5, ge=1, description="Число повторов кросс-валидации")
    fixed_graph_epochs: int | None = Field(
        default=None, ge=0, description="Бюджет эпох для абляции с фиксированным графом"
    )

    seed: int = Field(default=0, ge=0, description="Базовое зерно всех случайных потоков")

    @model_validator(mode="before")
    @classmethod
    def apply_preset(cls, data: Any) -> Any:
        """Подставить T' и S из пресета, если они не заданы явно."""
        if isinstance(data, dict):
            preset = data.get("preset")
            for key, value in PRESETS.get(str(preset), {}).items():
                data.setdefault(key, value)
        return data

    @field_validator("temporal_kernel")
    @classmethod
    def validate_kernel(cls, v: int) -> int:
        """Ядро должно быть нечетным, чтобы same-padding сохранял длину."""
        if v % 2 == 0:
            raise ValueError("temporal_kernel должен быть нечетным")
        return v

    @property
    def epoch_budget(self) -> int:
        """Эпох на абляцию с фиксированным графом."""
        if self.fixed_graph_epochs is not None:
            return self.fixed_graph_epochs
        return self.inner_epochs * self.k_max

    def echo(self, out_dir: Path) -> Path:
        """
        Записать полностью разрешенную конфигурацию в каталог результатов.

        Args:
            out_dir: Каталог результатов

        Returns:
            Path: Путь к run_config.json
        """
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "run_config.json"
        path.write_text(self.model_dump_json(indent=2), encoding="utf-8")
        logger.debug(f"Конфигурация записана в {path}")
        return path


def parse_config_text(text: str) -> dict[str, Any]:
    """
    Распарсить текст конфигурации (JSON или строки key=value).

    Args:
        text: Содержимое файла

    Returns:
        dict: Значения настроек (для key=value это строки, их приводит pydantic)

    Raises:
        ConfigError: Неверный синтаксис
    """
    # Формат определяем по содержимому
    stripped = text.lstrip("\ufeff").strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Не удалось распарсить JSON конфигурацию: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError("JSON конфигурация должна быть объектом")
        return data

    values: dict[str, Any] = {}
    for lineno, line in enumerate(stripped.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"Строка {lineno}: ожидается key=value, получено {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ConfigError(f"Строка {lineno}: ключ {key!r} задан повторно")
        values[key] = None if value.lower() in ("", "none", "null") else value
    return values


def build_config(values: dict[str, Any] | None = None, **overrides: Any) -> RunConfig:
    """
    Создать RunConfig со строгой проверкой ключей.

    Raises:
        ConfigError: Неизвестный ключ или недопустимое значение
    """
    merged = dict(values or {})
    merged.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**merged)
    except ValidationError as e:
        raise ConfigError(f"Недопустимая конфигурация: {e}") from e


def load_run_config(path: Path | None = None, **overrides: Any) -> RunConfig:
    """
    Загрузить конфигурацию из файла (если указан) с переопределениями.

    Args:
        path: Путь к файлу конфигурации (JSON или key=value)
        **overrides: Значения, имеющие приоритет над файлом (например, seed из CLI)

    Returns:
        RunConfig: Провалидированная конфигурация
    """
    values: dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        try:
            values = parse_config_text(path.read_text(encoding="utf-8"))
        except OSError as e:
            raise ConfigError(f"Не удалось прочитать конфигурацию {path}: {e}") from e
        logger.info(f"Конфигурация загружена из {path}")
    return build_config(values, **overrides)


# Глобальный экземпляр настроек (singleton)
_settings: RunConfig | None = None


def get_settings() -> RunConfig:
    """
    Получить экземпляр настроек по умолчанию (окружение + .env).

    Returns:
        RunConfig: Экземпляр настроек
    """
    global _settings
    if _settings is None:
        _settings = build_config()
    return _settings


def reset_settings() -> None:
    """Сбросить кэшированные настройки (для тестирования)."""
    global _settings
    _settings = None
