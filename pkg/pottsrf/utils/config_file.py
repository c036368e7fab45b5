"""Flat ``key = value`` config files with ``#`` comments."""

from pathlib import Path
from typing import Any, Dict, Union

from pottsrf.core.exceptions import ConfigurationError

_BOOLEANS = {
    "true": True,
    "yes": True,
    "on": True,
    "false": False,
    "no": False,
    "off": False,
}


def parse_value(raw: str) -> Any:
    """Convert a raw value to bool, int, float or leave it as a string."""
    text = raw.strip()
    if text.lower() in _BOOLEANS:
        return _BOOLEANS[text.lower()]
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, Any]:
    values: Dict[str, Any] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{line_no}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigurationError(f"{source}:{line_no}: empty key")
        if key in values:
            raise ConfigurationError(f"{source}:{line_no}: duplicate key '{key}'")
        values[key] = parse_value(raw)
    return values


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"cannot read config {path}: {e.strerror}")
    return parse_config_text(text, source=str(path))
