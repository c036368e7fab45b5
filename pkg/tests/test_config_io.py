"""Tests for configuration files, CSV import/export and image I/O."""

from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from PIL import Image as PILImage

from pottsrf.core.config import RunConfig
from pottsrf.core.exceptions import (
    ConfigurationError,
    DatasetParseError,
    ImageIOError,
    InvalidArgumentError,
)
from pottsrf.core.models import GridGeometry, Image, SeedSet, SolverReport
from pottsrf.graph.graph import Graph
from pottsrf.utils.config_file import parse_config_text, parse_value, read_config_file
from pottsrf.utils.csv import CsvExporter
from pottsrf.utils.images import (
    load_image,
    read_label_map,
    render_label_map,
    save_image,
    save_label_map,
    save_membership_stack,
)
from pottsrf.utils.importer import CsvImporter

PRESETS = Path(__file__).resolve().parents[1] / "presets"


@pytest.mark.parametrize(
    "raw,expected",
    [("3", 3), ("1e-3", 1e-3), ("yes", True), ("Off", False), (" pdhg ", "pdhg")],
)
def test_parse_value(raw, expected):
    assert parse_value(raw) == expected


def test_parse_config_text_skips_comments():
    text = "# header\nalgorithm = admm\n\nalpha = 3  # trailing\n"
    assert parse_config_text(text) == {"algorithm": "admm", "alpha": 3}


@pytest.mark.parametrize(
    "text,message",
    [
        ("alpha 3", "expected 'key = value'"),
        ("= 3", "empty key"),
        ("alpha = 1\nalpha = 2", "duplicate key 'alpha'"),
    ],
)
def test_parse_config_text_errors(text, message):
    with pytest.raises(ConfigurationError, match=message):
        parse_config_text(text, source="run.cfg")


def test_read_config_file_missing(tmp_path):
    with pytest.raises(ConfigurationError, match="cannot read config"):
        read_config_file(tmp_path / "absent.cfg")


def test_run_config_from_file_with_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("alpha = 3\nn_seeds = 50\nthreads = 1\n")
    config = RunConfig.from_file(path, {"n_seeds": 75, "threads": None})
    assert config.alpha == 3.0
    assert config.n_seeds == 75
    assert config.threads == 1
    assert config.solver_config().deterministic


def test_run_config_reports_unknown_and_invalid_keys():
    with pytest.raises(ConfigurationError, match="unknown key 'alhpa'"):
        RunConfig.from_mapping({"alhpa": 3})
    with pytest.raises(ConfigurationError, match="max_iter"):
        RunConfig.from_mapping({"max_iter": 0})
    with pytest.raises(ConfigurationError):
        RunConfig.from_mapping({"log_level": "LOUD"})


@pytest.mark.parametrize("name", ["three-circles", "coil", "mnist", "image"])
def test_presets_are_valid(name):
    config = RunConfig.from_file(PRESETS / f"{name}.cfg")
    solver = config.solver_config()
    assert solver.effective_beta > 0
    if name == "image":
        assert config.image_params().k == 4
    else:
        assert config.cluster_params().alpha > 0


def test_solver_config_defaults_beta_per_algorithm():
    assert RunConfig(algorithm="admm").solver_config().effective_beta == 0.05
    assert RunConfig().solver_config().effective_beta == 0.4
    assert RunConfig(threads=4).solver_config().deterministic is False


def test_points_and_labels_round_trip(tmp_path, rng):
    points = rng.normal(size=(12, 4))
    CsvExporter.export_points(points, tmp_path / "points.csv")
    CsvExporter.export_labels(np.arange(12) % 3, tmp_path / "labels.csv")
    assert np.array_equal(CsvImporter.import_points(tmp_path / "points.csv"), points)
    labels = CsvImporter.import_labels(tmp_path / "labels.csv")
    assert labels.tolist() == (np.arange(12) % 3).tolist()


def test_exporter_uses_output_dir(tmp_path):
    config = RunConfig(output_dir=tmp_path / "runs")
    path = CsvExporter.export_labels(np.zeros(3), "labels.csv", config)
    assert path == tmp_path / "runs" / "labels.csv"
    assert path.read_text() == "0\n0\n0\n"


def test_importer_skips_header_and_reports_lines(tmp_path):
    path = tmp_path / "points.csv"
    path.write_text("x,y\n1.0,2.0\n3.0,oops\n")
    with pytest.raises(DatasetParseError) as excinfo:
        CsvImporter.import_points(path)
    assert excinfo.value.line == 3
    assert "oops" in str(excinfo.value)


def test_importer_rejects_ragged_and_non_finite_rows(tmp_path):
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("1,2\n3\n")
    with pytest.raises(DatasetParseError, match="expected 2 columns") as excinfo:
        CsvImporter.import_points(ragged)
    assert excinfo.value.line == 2
    infinite = tmp_path / "inf.csv"
    infinite.write_text("1,2\n3,inf\n")
    with pytest.raises(DatasetParseError, match="non-finite"):
        CsvImporter.import_points(infinite)


def test_importer_rejects_fractional_labels(tmp_path):
    path = tmp_path / "labels.csv"
    path.write_text("0\n1\n1.5\n")
    with pytest.raises(DatasetParseError) as excinfo:
        CsvImporter.import_labels(path)
    assert excinfo.value.line == 3


def test_importer_missing_file(tmp_path):
    with pytest.raises(DatasetParseError, match="file not found"):
        CsvImporter.import_points(tmp_path / "absent.csv")


def test_seeds_round_trip(tmp_path):
    seeds = SeedSet(classes=[[4, 1], [0], [7, 2]])
    path = CsvExporter.export_seeds(seeds, tmp_path / "seeds.csv")
    assert CsvImporter.import_seeds(path, 3).classes == [[1, 4], [0], [2, 7]]
    with pytest.raises(DatasetParseError):
        CsvImporter.import_seeds(path, 2)


def test_export_graph_probabilities_and_history(tmp_path):
    G = Graph.from_edges(3, [0, 1], [1, 2], [0.5, 2.0])
    edges = CsvExporter.export_graph(G, tmp_path / "graph.csv")
    assert edges.read_text() == "0,1,0.5\n1,2,2.0\n"

    P = np.array([[0.25, 0.75], [1.0, 0.0]])
    frame = pd.read_csv(CsvExporter.export_probabilities(P, tmp_path / "P.csv"))
    assert list(frame.columns) == ["class_0", "class_1"]
    assert np.array_equal(frame.to_numpy(), P)

    report = SolverReport(
        algorithm="pdhg",
        iterations=2,
        primal_energy_history=[3.0, 2.5],
        dual_energy_history=[1.0, 2.4],
        final_gap=0.04,
        primal_energy=2.5,
        dual_energy=2.4,
        wall_time_s=0.01,
        termination="max_iter",
    )
    history = CsvExporter.export_history(report, tmp_path / "history.csv")
    lines = history.read_text().splitlines()
    assert lines == ["iter,E_P,E_D", "1,3.0,1.0", "2,2.5,2.4"]


def test_label_map_round_trip(tmp_path):
    geom = GridGeometry(width=5, height=3)
    labels = np.arange(15) % 4
    path = save_label_map(labels, geom, 4, tmp_path / "labels.png")
    assert read_label_map(path, 4).tolist() == labels.tolist()
    rgb = render_label_map(labels, geom, 4)
    assert rgb.shape == (3, 5, 3)


def test_render_label_map_errors():
    geom = GridGeometry(width=2, height=2)
    with pytest.raises(InvalidArgumentError):
        render_label_map(np.zeros(3), geom, 2)
    with pytest.raises(InvalidArgumentError):
        render_label_map(np.array([0, 1, 2, 0]), geom, 2)
    with pytest.raises(InvalidArgumentError):
        render_label_map(np.zeros(4), geom, 17)


@pytest.mark.parametrize("suffix,channels", [(".png", 3), (".ppm", 3), (".pgm", 1)])
def test_image_save_and_load(tmp_path, suffix, channels):
    values = np.linspace(0.0, 1.0, 4 * 6 * channels).reshape(4, 6, channels)
    quantized = np.round(values * 255) / 255
    path = save_image(Image(values=quantized), tmp_path / f"image{suffix}")
    loaded = load_image(path)
    assert (loaded.height, loaded.width, loaded.channels) == (4, 6, channels)
    assert np.allclose(loaded.values, quantized)


def test_load_image_errors(tmp_path):
    with pytest.raises(ImageIOError, match="file not found"):
        load_image(tmp_path / "absent.png")
    save_image(Image(values=np.zeros((8, 8, 3))), tmp_path / "full.png")
    truncated = tmp_path / "truncated.png"
    truncated.write_bytes((tmp_path / "full.png").read_bytes()[:40])
    with pytest.raises(ImageIOError) as excinfo:
        load_image(truncated)
    assert excinfo.value.exit_code == 2
    garbage = tmp_path / "garbage.png"
    garbage.write_bytes(b"not an image")
    with pytest.raises(ImageIOError):
        load_image(garbage)


def test_dark_sixteen_bit_image_keeps_its_scale(tmp_path):
    raw = np.array([[0, 100], [200, 257]], dtype=np.uint16)
    path = tmp_path / "dark16.png"
    PILImage.fromarray(raw).save(path, format="PNG")
    loaded = load_image(path)
    assert loaded.channels == 1
    assert np.allclose(loaded.values[:, :, 0], raw / 65535.0)
    assert loaded.values.max() < 0.01


def test_membership_stack(tmp_path):
    geom = GridGeometry(width=3, height=2)
    phi = np.zeros((6, 2))
    phi[:, 0] = [1.0, 0.5, 0.0, 1.0, 1.0, 0.0]
    phi[:, 1] = 1.0 - phi[:, 0]
    paths = save_membership_stack(phi, geom, tmp_path / "phi")
    assert [p.name for p in paths] == ["phi_0.pgm", "phi_1.pgm"]
    first = load_image(paths[0])
    assert first.channels == 1
    assert np.round(first.pixels()[:, 0] * 255).tolist() == [255, 128, 0, 255, 255, 0]
