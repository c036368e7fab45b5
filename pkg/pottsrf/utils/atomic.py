"""Atomic file writes."""

import os
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Iterator, List, Mapping, Tuple, Union


@contextmanager
def atomic_write(
    path: Union[str, Path], mode: str = "w", encoding: str = "utf-8"
) -> Iterator[IO]:
    """Write to a temp file next to ``path`` and rename it into place on success."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(
        dir=path.parent, prefix=f".{path.name}.", suffix=".tmp"
    )
    try:
        kwargs = {} if "b" in mode else {"encoding": encoding, "newline": ""}
        with os.fdopen(fd, mode, **kwargs) as f:
            yield f
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


@contextmanager
def atomic_path(path: Union[str, Path]) -> Iterator[Path]:
    """Yield a temp path for writers that need a file name (e.g. Pillow)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(
        dir=path.parent, prefix=f".{path.name}.", suffix=path.suffix
    )
    os.close(fd)
    try:
        yield Path(tmp_name)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def atomic_write_many(
    contents: Mapping[Path, str], encoding: str = "utf-8"
) -> List[Path]:
    """Write every file in ``contents`` or none of them.

    All temp files are written before any is renamed into place. If a rename
    fails, targets created by earlier renames are removed again.
    """
    staged: List[Tuple[str, Path]] = []
    created: List[Path] = []
    try:
        for path, text in contents.items():
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(
                dir=path.parent, prefix=f".{path.name}.", suffix=".tmp"
            )
            staged.append((tmp_name, path))
            with os.fdopen(fd, "w", encoding=encoding, newline="") as f:
                f.write(text)
        for tmp_name, path in staged:
            existed = path.exists()
            os.replace(tmp_name, path)
            if not existed:
                created.append(path)
    except BaseException:
        for tmp_name, _ in staged:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
        for path in created:
            path.unlink()
        raise
    return [path for _, path in staged]
