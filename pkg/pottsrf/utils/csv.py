"""CSV export utilities."""

import csv
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from pottsrf.core.config import RunConfig
from pottsrf.core.models import SeedSet, SolverReport
from pottsrf.graph.graph import Graph
from pottsrf.utils.atomic import atomic_write


class CsvExporter:
    """Handles exporting arrays and reports to CSV format."""

    @staticmethod
    def _resolve_path(
        output_path: Union[str, Path], config: Optional[RunConfig] = None
    ) -> Path:
        """Resolve the output path using config if provided."""
        path = Path(output_path)
        if config:
            output_dir = getattr(config, "output_dir", None)
            if output_dir:
                # A bare file name goes into output_dir; anything else is used as-is
                if len(path.parts) == 1:
                    return Path(output_dir) / path
        return path

    @staticmethod
    def _write_rows(
        path: Path, header: Optional[Sequence[str]], rows: np.ndarray
    ) -> None:
        with atomic_write(path) as f:
            writer = csv.writer(f, lineterminator="\n")
            if header:
                writer.writerow(header)
            for row in rows:
                writer.writerow([repr(float(x)) for x in np.atleast_1d(row)])

    @staticmethod
    def export_points(
        points: np.ndarray,
        output_path: Union[str, Path],
        config: Optional[RunConfig] = None,
    ) -> Path:
        """Export an N x D point cloud, one row per point, no header."""
        path = CsvExporter._resolve_path(output_path, config)
        CsvExporter._write_rows(path, None, np.asarray(points, dtype=float))
        return path

    @staticmethod
    def export_labels(
        labels: np.ndarray,
        output_path: Union[str, Path],
        config: Optional[RunConfig] = None,
    ) -> Path:
        """Export integer class labels, one per line."""
        path = CsvExporter._resolve_path(output_path, config)
        with atomic_write(path) as f:
            writer = csv.writer(f, lineterminator="\n")
            for label in np.asarray(labels, dtype=int):
                writer.writerow([int(label)])
        return path

    @staticmethod
    def export_seeds(
        seeds: SeedSet,
        output_path: Union[str, Path],
        config: Optional[RunConfig] = None,
    ) -> Path:
        """Export a seed set as ``index,class_label`` rows."""
        path = CsvExporter._resolve_path(output_path, config)
        with atomic_write(path) as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["index", "class_label"])
            for index, label in sorted(seeds.label_map().items()):
                writer.writerow([index, label])
        return path

    @staticmethod
    def export_probabilities(
        P: np.ndarray,
        output_path: Union[str, Path],
        config: Optional[RunConfig] = None,
    ) -> Path:
        """Export an N x K matrix (probabilities or memberships)."""
        path = CsvExporter._resolve_path(output_path, config)
        P = np.asarray(P, dtype=float)
        header = [f"class_{k}" for k in range(P.shape[1])]
        CsvExporter._write_rows(path, header, P)
        return path

    @staticmethod
    def export_graph(
        graph: Graph,
        output_path: Union[str, Path],
        config: Optional[RunConfig] = None,
    ) -> Path:
        """Export undirected edges as ``i,j,w_ij`` triplets with i < j."""
        path = CsvExporter._resolve_path(output_path, config)
        i, j, w = graph.triplets()
        with atomic_write(path) as f:
            writer = csv.writer(f, lineterminator="\n")
            for a, b, weight in zip(i, j, w):
                writer.writerow([int(a), int(b), repr(float(weight))])
        return path

    @staticmethod
    def export_history(
        report: SolverReport,
        output_path: Union[str, Path],
        config: Optional[RunConfig] = None,
    ) -> Path:
        """Export energy histories as ``iter,E_P,E_D``."""
        return CsvExporter.export_frame(report.to_history_frame(), output_path, config)

    @staticmethod
    def export_frame(
        frame: pd.DataFrame,
        output_path: Union[str, Path],
        config: Optional[RunConfig] = None,
    ) -> Path:
        """Export a DataFrame without its index."""
        path = CsvExporter._resolve_path(output_path, config)
        with atomic_write(path) as f:
            frame.to_csv(f, index=False, lineterminator="\n")
        return path
