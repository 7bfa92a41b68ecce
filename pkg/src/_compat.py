"""Совместимость со старыми версиями Python."""

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        """Бэкпорт enum.StrEnum: str() и format() возвращают значение члена."""

        __str__ = str.__str__
        __format__ = str.__format__

__all__ = ["StrEnum"]
