"""Image loading and label-map rendering with Pillow."""

import logging
from pathlib import Path
from typing import List, Union

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from pottsrf.core.exceptions import ImageIOError, InvalidArgumentError
from pottsrf.core.models import GridGeometry, Image
from pottsrf.utils.atomic import atomic_path

logger = logging.getLogger(__name__)

# class k is drawn in PALETTE[k]
PALETTE = np.array(
    [
        [230, 25, 75],
        [60, 180, 75],
        [0, 130, 200],
        [255, 225, 25],
        [145, 30, 180],
        [70, 240, 240],
        [245, 130, 48],
        [240, 50, 230],
        [210, 245, 60],
        [0, 128, 128],
        [170, 110, 40],
        [128, 0, 0],
        [0, 0, 128],
        [128, 128, 0],
        [255, 255, 255],
        [0, 0, 0],
    ],
    dtype=np.uint8,
)


def load_image(path: Union[str, Path]) -> Image:
    """Read a PNG, PPM (P6) or PGM (P5) file into [0, 1] channel values."""
    try:
        with PILImage.open(path) as img:
            img.load()
            if img.mode.startswith("I"):
                # 16-bit PNG and PGM samples open as I;16 or I
                values = np.asarray(img, dtype=float) / 65535.0
            else:
                target = "L" if img.mode in ("1", "L", "LA") else "RGB"
                values = np.asarray(img.convert(target), dtype=float) / 255.0
    except FileNotFoundError:
        raise ImageIOError("file not found", path)
    except UnidentifiedImageError:
        raise ImageIOError("unsupported or corrupt image", path)
    except (OSError, SyntaxError, ValueError) as e:
        raise ImageIOError(f"cannot read image: {e}", path)

    image = Image(values=values)
    logger.info(
        "Loaded %s: %dx%d, %d channel(s)",
        path,
        image.width,
        image.height,
        image.channels,
    )
    return image


def render_label_map(
    labels: np.ndarray, geom: GridGeometry, n_classes: int
) -> np.ndarray:
    """H x W x 3 uint8 array with class k painted in PALETTE[k]."""
    labels = np.asarray(labels, dtype=int).ravel()
    if labels.size != geom.n_pixels:
        raise InvalidArgumentError(
            f"{labels.size} labels for a {geom.width}x{geom.height} grid"
        )
    if n_classes > len(PALETTE):
        raise InvalidArgumentError(
            f"palette has {len(PALETTE)} colors, {n_classes} classes requested"
        )
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise InvalidArgumentError(f"labels must lie in [0, {n_classes})")
    return PALETTE[labels].reshape(geom.height, geom.width, 3)


def save_label_map(
    labels: np.ndarray, geom: GridGeometry, n_classes: int, path: Union[str, Path]
) -> Path:
    """Write a palette-colored PNG label map."""
    rgb = render_label_map(labels, geom, n_classes)
    path = Path(path)
    try:
        with atomic_path(path) as tmp:
            PILImage.fromarray(rgb, mode="RGB").save(tmp, format="PNG")
    except OSError as e:
        raise ImageIOError(f"cannot write label map: {e}", path)
    return path


def read_label_map(path: Union[str, Path], n_classes: int) -> np.ndarray:
    """Invert save_label_map: flat label vector from a palette PNG."""
    rgb = np.round(load_image(path).values * 255).astype(np.uint8)
    if rgb.shape[2] != 3:
        raise ImageIOError("label map must be RGB", path)
    flat = rgb.reshape(-1, 3)
    labels = np.full(flat.shape[0], -1, dtype=int)
    for k in range(n_classes):
        labels[np.all(flat == PALETTE[k], axis=1)] = k
    if np.any(labels < 0):
        raise ImageIOError("pixel colors outside the label palette", path)
    return labels


def save_membership_stack(
    phi: np.ndarray, geom: GridGeometry, directory: Union[str, Path]
) -> List[Path]:
    """Write each class column of phi as an 8-bit PGM ``phi_<k>.pgm``."""
    phi = np.asarray(phi, dtype=float)
    if phi.ndim != 2 or phi.shape[0] != geom.n_pixels:
        raise InvalidArgumentError(
            f"membership field must be {geom.n_pixels} x K, got {phi.shape}"
        )
    directory = Path(directory)
    written = []
    for k in range(phi.shape[1]):
        gray = np.round(np.clip(phi[:, k], 0.0, 1.0) * 255).astype(np.uint8)
        target = directory / f"phi_{k}.pgm"
        try:
            with atomic_path(target) as tmp:
                PILImage.fromarray(gray.reshape(geom.shape), mode="L").save(
                    tmp, format="PPM"
                )
        except OSError as e:
            raise ImageIOError(f"cannot write membership image: {e}", target)
        written.append(target)
    return written


def save_image(image: Image, path: Union[str, Path]) -> Path:
    """Write an Image as 8-bit PNG (or PPM/PGM by suffix)."""
    path = Path(path)
    data = np.round(image.values * 255).astype(np.uint8)
    if image.channels == 1:
        pil = PILImage.fromarray(data[:, :, 0], mode="L")
    else:
        pil = PILImage.fromarray(data, mode="RGB")
    fmt = "PPM" if path.suffix.lower() in (".ppm", ".pgm") else "PNG"
    try:
        with atomic_path(path) as tmp:
            pil.save(tmp, format=fmt)
    except OSError as e:
        raise ImageIOError(f"cannot write image: {e}", path)
    return path
