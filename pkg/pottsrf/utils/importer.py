"""CSV import utilities."""

import csv
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from pottsrf.core.exceptions import DatasetParseError
from pottsrf.core.models import SeedSet


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


class CsvImporter:
    """Handles importing data from CSV files."""

    @staticmethod
    def _read_rows(input_path: Union[str, Path]) -> List[tuple]:
        """Return (line_number, cells) for every non-empty row."""
        try:
            with open(input_path, "r", newline="", encoding="utf-8") as f:
                return [
                    (reader_line, row)
                    for reader_line, row in enumerate(csv.reader(f), start=1)
                    if row and any(cell.strip() for cell in row)
                ]
        except FileNotFoundError:
            raise DatasetParseError("file not found", path=input_path)
        except (OSError, UnicodeDecodeError, csv.Error) as e:
            raise DatasetParseError(str(e), path=input_path)

    @staticmethod
    def import_matrix(input_path: Union[str, Path]) -> np.ndarray:
        """Import a numeric matrix; a non-numeric first row is taken as a header."""
        return CsvImporter._parse_matrix(input_path)[0]

    @staticmethod
    def _parse_matrix(input_path: Union[str, Path]) -> Tuple[np.ndarray, List[int]]:
        rows = CsvImporter._read_rows(input_path)
        if rows and not all(_is_number(c) for c in rows[0][1]):
            rows = rows[1:]
        if not rows:
            raise DatasetParseError("no data rows", path=input_path)

        width = len(rows[0][1])
        values = []
        for line, cells in rows:
            if len(cells) != width:
                raise DatasetParseError(
                    f"expected {width} columns, found {len(cells)}",
                    path=input_path,
                    line=line,
                )
            try:
                values.append([float(c) for c in cells])
            except ValueError:
                bad = next(c for c in cells if not _is_number(c))
                raise DatasetParseError(
                    f"non-numeric cell {bad!r}", path=input_path, line=line
                )
        matrix = np.array(values, dtype=float)
        if not np.all(np.isfinite(matrix)):
            line = rows[int(np.argwhere(~np.isfinite(matrix))[0][0])][0]
            raise DatasetParseError("non-finite value", path=input_path, line=line)
        return matrix, [line for line, _ in rows]

    @staticmethod
    def import_points(input_path: Union[str, Path]) -> np.ndarray:
        """Import an N x D point cloud."""
        return CsvImporter.import_matrix(input_path)

    @staticmethod
    def import_labels(input_path: Union[str, Path]) -> np.ndarray:
        """Import one integer class label per row (first column)."""
        matrix, lines = CsvImporter._parse_matrix(input_path)
        labels = matrix[:, 0]
        bad = (labels != np.round(labels)) | (labels < 0)
        if np.any(bad):
            line = lines[int(np.argmax(bad))]
            raise DatasetParseError(
                "labels must be nonnegative integers", path=input_path, line=line
            )
        return labels.astype(int)

    @staticmethod
    def import_seeds(input_path: Union[str, Path], n_classes: int) -> SeedSet:
        """Import ``index,class_label`` rows into a seed set."""
        matrix, lines = CsvImporter._parse_matrix(input_path)
        if matrix.shape[1] != 2:
            raise DatasetParseError(
                f"seed file needs 2 columns, found {matrix.shape[1]}", path=input_path
            )
        classes: Dict[int, List[int]] = {k: [] for k in range(n_classes)}
        for line, (index, label) in zip(lines, matrix.astype(int)):
            if label not in classes:
                raise DatasetParseError(
                    f"class label {label} outside [0, {n_classes})",
                    path=input_path,
                    line=line,
                )
            classes[label].append(int(index))
        return SeedSet(classes=[classes[k] for k in range(n_classes)])
