"""
Загрузка и запись когорт в формате manifest CSV + CSV на субъекта.

manifest: subject_id,label,path (path относительно каталога манифеста);
файл субъекта: T строк × N столбцов, в заголовке имена ROI.
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from ..utils.errors import DataError, ParseError
from ..utils.tables import FLOAT_FORMAT
from .records import SubjectRecord, TimeSeriesDataset

logger = logging.getLogger(__name__)

MANIFEST_COLUMNS = ["subject_id", "label", "path"]


def _read_series(path: Path, subject_id: str) -> tuple[np.ndarray, list[str]]:
    """Прочитать CSV ряда субъекта и вернуть матрицу [N × T] и имена ROI."""
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ParseError(f"Субъект {subject_id}: не удалось прочитать {path}: {e}") from e

    values = np.empty(frame.shape, dtype=np.float64)
    for j, column in enumerate(frame.columns):
        parsed = pd.to_numeric(frame[column].str.strip(), errors="coerce")
        bad = parsed.isna().to_numpy()
        if bad.any():
            row = int(np.argmax(bad))
            raise ParseError(
                f"Субъект {subject_id}: нечисловое значение {frame[column].iloc[row]!r} в {path}",
                row=row + 2,
                column=str(column),
            )
        values[:, j] = parsed.to_numpy(dtype=np.float64)
    return values.T, [str(c) for c in frame.columns]


def load_dataset(manifest_path: Path) -> TimeSeriesDataset:
    """
    Загрузить когорту по манифесту, проверить формы и стандартизовать ряды.

    Args:
        manifest_path: Путь к manifest CSV

    Returns:
        TimeSeriesDataset: Стандартизованная когорта

    Raises:
        DataError: Несовпадение форм или имен ROI, недопустимая метка
        ParseError: Нечисловые ячейки, поврежденный манифест
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.exists():
        raise DataError(f"Манифест не найден: {manifest_path}")

    manifest = pd.read_csv(manifest_path, dtype=str, keep_default_na=False)
    missing = [c for c in MANIFEST_COLUMNS if c not in manifest.columns]
    if missing:
        raise ParseError(f"В манифесте {manifest_path} нет столбцов {missing}")

    logger.info(f"Загрузка {len(manifest)} субъектов из {manifest_path}")
    records: list[SubjectRecord] = []
    roi_names: list[str] | None = None

    for row in manifest.itertuples(index=False):
        subject_id = str(row.subject_id).strip()
        label_text = str(row.label).strip()
        if label_text not in ("0", "1"):
            raise DataError(f"Субъект {subject_id}: метка должна быть 0 или 1, получено {label_text!r}")

        series_path = Path(str(row.path).strip())
        if not series_path.is_absolute():
            series_path = manifest_path.parent / series_path
        series, names = _read_series(series_path, subject_id)

        if roi_names is None:
            roi_names = names
        elif series.shape != records[0].series.shape:
            raise DataError(
                f"Субъект {subject_id}: форма ряда {series.shape}, "
                f"ожидалось {records[0].series.shape} (N × T)"
            )
        elif names != roi_names:
            raise DataError(f"Субъект {subject_id}: имена ROI не совпадают с первым субъектом")

        records.append(SubjectRecord(subject_id, int(label_text), series).standardize())

    if not records:
        raise DataError(f"Манифест {manifest_path} пуст")

    dataset = TimeSeriesDataset(records, roi_names)
    logger.info(f"Загружено: {dataset}")
    return dataset


def write_dataset(dataset: TimeSeriesDataset, out_dir: Path) -> Path:
    """
    Записать когорту: manifest.csv и subjects/<id>.csv.

    Args:
        dataset: Когорта
        out_dir: Каталог результатов

    Returns:
        Path: Путь к манифесту
    """
    out_dir = Path(out_dir)
    subjects_dir = out_dir / "subjects"
    subjects_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    for record in dataset.records:
        relative = Path("subjects") / f"{record.subject_id}.csv"
        frame = pd.DataFrame(record.series.T, columns=dataset.roi_names)
        frame.to_csv(out_dir / relative, index=False, float_format=FLOAT_FORMAT)
        rows.append({"subject_id": record.subject_id, "label": record.label, "path": relative.as_posix()})

    manifest_path = out_dir / "manifest.csv"
    pd.DataFrame(rows, columns=MANIFEST_COLUMNS).to_csv(manifest_path, index=False)
    logger.info(f"Записано {len(rows)} субъектов в {out_dir}")
    return manifest_path
