"""
Иерархия исключений пакета.

Все «пользовательские» ошибки наследуются также от ValueError,
чтобы вызывающий код мог перехватывать их обобщенно.
"""


class StDagcnError(Exception):
    """Базовое исключение пакета."""


class ShapeError(StDagcnError, ValueError):
    """Несогласованные размерности тензоров или матриц."""


class ConfigError(StDagcnError, ValueError):
    """Недопустимое значение гиперпараметра или настройки."""


class DataError(StDagcnError, ValueError):
    """Некорректные входные данные (нечисловые значения, несовпадение форм, метки)."""


class ParseError(DataError):
    """Ошибка разбора файла; содержит строку и столбец."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        self.row = row
        self.column = column
        location = ""
        if row is not None or column is not None:
            location = f" (строка {row}, столбец {column!r})"
        super().__init__(f"{message}{location}")


class UsageError(StDagcnError, ValueError):
    """Неверный вызов API (пустые списки, разные длины аргументов)."""


class ContractError(StDagcnError, ValueError):
    """Нарушение контракта ленты вычислений (например, backward от не-скаляра)."""


class OptimizationDiverged(StDagcnError):
    """
    Функция потерь стала нечисловой во время внутренней задачи.

    Attributes:
        last_row: Последняя строка траектории с конечными значениями (или None)
    """

    def __init__(self, message: str, last_row: dict | None = None):
        self.last_row = last_row
        super().__init__(f"{message}; последняя конечная строка: {last_row}")
