"""
CSV interchange formats.

Dataset files have a header ``f1,...,fp[,label]`` and one observation per
row, floats written in shortest round-trip form. Detection files have the
header ``index,distance,label``. Diagnostics files are long-form
``table,key,value`` rows.
"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .exceptions import DataFormatError

logger = logging.getLogger(__name__)

LABEL_COLUMN = 'label'

PathLike = Union[str, Path]


@dataclass(frozen=True, eq=False)
class LoadedDataset:
    """Matrix read from a dataset CSV, with its label column when present."""

    data: np.ndarray
    labels: Optional[np.ndarray] = None


def format_float(value: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(value))


def parse_label(token: str, line: int) -> int:
    """
    Parse a 0/1 label.

    Raises:
        DataFormatError: If the token is not exactly 0 or 1
    """
    text = token.strip()
    if text not in ('0', '1'):
        raise DataFormatError(f"expected label 0 or 1, got {text!r}", line=line)
    return int(text)


def write_dataset(path: PathLike, data: np.ndarray, labels: Optional[np.ndarray] = None) -> None:
    """Write observations (and optional labels) in the dataset CSV format."""
    data = np.asarray(data, dtype=float)
    header = [f"f{j + 1}" for j in range(data.shape[1])]
    if labels is not None:
        header.append(LABEL_COLUMN)

    with open(path, 'w', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(header)
        for i, row in enumerate(data):
            values = [format_float(v) for v in row]
            if labels is not None:
                values.append(str(int(labels[i])))
            writer.writerow(values)
    logger.debug(f"Wrote dataset {data.shape[0]}x{data.shape[1]} to {path}")


def read_dataset(path: PathLike) -> LoadedDataset:
    """
    Read a dataset CSV.

    Args:
        path: File in the dataset format; the ``label`` column is optional

    Returns:
        LoadedDataset: matrix of feature columns and labels if present

    Raises:
        DataFormatError: On an empty file, ragged rows, non-numeric or
            non-finite values, or labels other than 0/1
        OSError: If the file cannot be read
    """
    with open(path, newline='') as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header:
            raise DataFormatError("dataset file is empty", line=1)
        header = [name.strip() for name in header]
        label_at = header.index(LABEL_COLUMN) if LABEL_COLUMN in header else None
        feature_at = [j for j, name in enumerate(header) if j != label_at]
        if not feature_at:
            raise DataFormatError("dataset has no feature columns", line=1)

        rows = []
        labels = []
        for line, record in enumerate(reader, start=2):
            if not record or all(not cell.strip() for cell in record):
                continue
            if len(record) != len(header):
                raise DataFormatError(
                    f"expected {len(header)} fields, got {len(record)}", line=line
                )
            try:
                values = [float(record[j]) for j in feature_at]
            except ValueError as e:
                raise DataFormatError(f"non-numeric value ({e})", line=line) from e
            if not all(math.isfinite(v) for v in values):
                raise DataFormatError("non-finite value", line=line)
            rows.append(values)
            if label_at is not None:
                labels.append(parse_label(record[label_at], line))

    if not rows:
        raise DataFormatError("dataset has no observations", line=2)
    data = np.array(rows, dtype=float)
    return LoadedDataset(
        data=data,
        labels=np.array(labels, dtype=np.int64) if label_at is not None else None,
    )


def write_detections(path: PathLike, distances: np.ndarray, labels: np.ndarray) -> None:
    """Write per-observation robust distances and labels (``index,distance,label``)."""
    with open(path, 'w', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(['index', 'distance', LABEL_COLUMN])
        for i, (distance, label) in enumerate(zip(distances, labels)):
            writer.writerow([i, format_float(distance), int(label)])


def write_diagnostics(path: PathLike, log_dets: Sequence[Optional[float]],
                      counts: Optional[np.ndarray] = None,
                      scan_scores: Optional[Mapping[int, Optional[float]]] = None) -> None:
    """
    Write ensemble diagnostics in long form, header ``table,key,value``.

    ``log_det`` rows hold one bootstrap log-determinant per draw, ``votes``
    rows the count of every variable among the retained draws, and ``scan``
    rows the nested-scan score per dimension j. Degenerate entries are ``nan``.
    """
    def value(v: Optional[float]) -> str:
        return 'nan' if v is None else format_float(v)

    with open(path, 'w', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(['table', 'key', 'value'])
        for draw, log_det in enumerate(log_dets):
            writer.writerow(['log_det', draw, value(log_det)])
        if counts is not None:
            for variable, count in enumerate(counts):
                writer.writerow(['votes', variable, int(count)])
        for j in sorted(scan_scores or {}):
            writer.writerow(['scan', j, value(scan_scores[j])])
    logger.debug(f"Wrote diagnostics for {len(log_dets)} draws to {path}")
