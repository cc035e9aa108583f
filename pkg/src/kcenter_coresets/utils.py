"""
k-center coresets utilities.

This module provides file ingestion and emission helpers and the named PRNG
streams every randomized component draws from.
"""

import csv
import io
import json
import os
import re
import sys
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

import numpy as np

from .exceptions import KCenterFileError, KCenterUsageError
from .metric import PointSet

# Fixed spawn keys: each purpose gets an independent stream derived from one seed.
RNG_PURPOSES: Dict[str, int] = {
    "generator": 0,
    "order": 1,
    "partition": 2,
    "start": 3,
}

_MATRIX_SPLIT = re.compile(r"[,\s]+")


def rng_stream(seed: int, purpose: str) -> np.random.Generator:
    """Return the PRNG stream for ``purpose`` derived from ``seed``.

    Args:
        seed: 64-bit seed (negative values are wrapped)
        purpose: One of ``RNG_PURPOSES``

    Returns:
        A numpy Generator

    Raises:
        KCenterUsageError: If the purpose is unknown
    """
    if purpose not in RNG_PURPOSES:
        raise KCenterUsageError(f"Unknown PRNG purpose: {purpose}")
    sequence = np.random.SeedSequence(
        entropy=int(seed) & 0xFFFFFFFFFFFFFFFF,
        spawn_key=(RNG_PURPOSES[purpose],),
    )
    return np.random.default_rng(sequence)


def _is_numeric_row(row: Sequence[str]) -> bool:
    try:
        for cell in row:
            float(cell)
    except ValueError:
        return False
    return True


def load_points_csv(path: str) -> PointSet:
    """Load a point set from a CSV file.

    All columns must be numeric. A first row with any non-numeric cell is
    treated as a header. Row order defines point ids.

    Args:
        path: CSV file path

    Returns:
        PointSet with one point per data row

    Raises:
        KCenterFileError: If the file is missing, empty or malformed
    """
    if not os.path.exists(path):
        raise KCenterFileError(f"Input file not found: {path}")

    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            rows = [row for row in csv.reader(f) if row and any(cell.strip() for cell in row)]
    except (IOError, UnicodeDecodeError) as e:
        raise KCenterFileError(f"Error reading input file {path}: {str(e)}")

    if rows and not _is_numeric_row(rows[0]):
        rows = rows[1:]
    if not rows:
        raise KCenterFileError(f"No data rows in {path}")

    width = len(rows[0])
    values: List[List[float]] = []
    for line_no, row in enumerate(rows, start=1):
        if len(row) != width:
            raise KCenterFileError(
                f"Row {line_no} of {path} has {len(row)} columns, expected {width}"
            )
        try:
            values.append([float(cell) for cell in row])
        except ValueError:
            raise KCenterFileError(f"Non-numeric value in row {line_no} of {path}")

    try:
        return PointSet(values)
    except KCenterUsageError as e:
        raise KCenterFileError(f"Invalid points in {path}: {str(e)}")


def save_points_csv(points: PointSet, path: Optional[str] = None) -> str:
    """Write a point set as headerless CSV.

    Coordinates use the shortest round-trip float form, so loading the file
    reproduces the PointSet exactly.

    Args:
        points: Point set to write
        path: Output path (None returns the text only)

    Returns:
        The CSV text

    Raises:
        KCenterFileError: If the file cannot be written
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for row in points.coordinates:
        writer.writerow([repr(float(x)) for x in row])
    text = buffer.getvalue()
    if path:
        write_text(text, path)
    return text


def load_distance_matrix(path: str) -> np.ndarray:
    """Load a square distance matrix separated by whitespace and/or commas.

    Raises:
        KCenterFileError: If the file is missing, non-numeric or not square
    """
    if not os.path.exists(path):
        raise KCenterFileError(f"Matrix file not found: {path}")

    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = [line.strip() for line in f]
    except (IOError, UnicodeDecodeError) as e:
        raise KCenterFileError(f"Error reading matrix file {path}: {str(e)}")

    rows = []
    for line in lines:
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(cell) for cell in _MATRIX_SPLIT.split(line) if cell])
        except ValueError:
            raise KCenterFileError(f"Non-numeric matrix entry in {path}: {line!r}")

    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise KCenterFileError(f"Distance matrix in {path} is not square")
    return np.array(rows, dtype=np.float64)


def load_json_config(path: str) -> Dict[str, Any]:
    """Load a JSON scenario file.

    Raises:
        KCenterFileError: If the file is missing or not a JSON object
    """
    if not os.path.exists(path):
        raise KCenterFileError(f"Config file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (json.JSONDecodeError, IOError) as e:
        raise KCenterFileError(f"Error loading config file {path}: {str(e)}")
    if not isinstance(data, dict):
        raise KCenterFileError(f"Config file {path} must contain a JSON object")
    return data


def _json_default(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def to_json(record: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(record, sort_keys=True, indent=2, default=_json_default) + "\n"


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV text with floats in shortest round-trip form."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buffer.getvalue()


def write_text(text: str, path: Optional[str] = None, stream: Optional[TextIO] = None) -> None:
    """Write output text to ``path``, or to ``stream`` (stdout by default).

    Raises:
        KCenterFileError: If the file cannot be written
    """
    if path:
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        except IOError as e:
            raise KCenterFileError(f"Error writing output file {path}: {str(e)}")
        return
    (stream or sys.stdout).write(text)
