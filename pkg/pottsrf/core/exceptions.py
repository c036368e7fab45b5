"""Custom exceptions for pottsrf."""

from pathlib import Path
from typing import Optional, Sequence, Union


class PottsError(Exception):
    """Base exception for all pottsrf errors."""

    exit_code = 1


class InvalidArgumentError(PottsError):
    """Raised when an argument violates an operation's precondition."""

    pass


class ShapeMismatchError(InvalidArgumentError):
    """Raised when field sizes do not match the graph or grid they live on."""

    pass


class ConfigurationError(PottsError):
    """Raised when there's an issue with configuration."""

    pass


class IsolatedNodeError(PottsError):
    """Raised when an affinity matrix has rows summing to zero.

    The offending node indices are kept on the exception so callers can
    report or drop them.
    """

    exit_code = 3

    def __init__(self, indices: Sequence[int]):
        self.indices = [int(i) for i in indices]
        shown = ", ".join(str(i) for i in self.indices[:20])
        more = "" if len(self.indices) <= 20 else f" (+{len(self.indices) - 20} more)"
        super().__init__(f"Isolated nodes with zero degree: {shown}{more}")


class NumericDegeneracyError(PottsError):
    """Raised when a formula would divide by zero or take log(0)."""

    exit_code = 3

    def __init__(self, message: str, node: Optional[int] = None):
        self.node = node
        if node is not None:
            message = f"{message} (node {node})"
        super().__init__(message)


class DivergenceError(PottsError):
    """Raised when a solver produces a non-finite iterate or energy."""

    exit_code = 3

    def __init__(self, message: str, iteration: int):
        self.iteration = iteration
        super().__init__(f"{message} at iteration {iteration}")


class SeedingError(PottsError):
    """Raised when labelled seeds cannot cover every class."""

    exit_code = 3


class DatasetParseError(PottsError):
    """Raised when a CSV input cannot be parsed."""

    exit_code = 2

    def __init__(
        self,
        message: str,
        path: Optional[Union[str, Path]] = None,
        line: Optional[int] = None,
    ):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(f"{where}{message}")


class ImageIOError(PottsError):
    """Raised when an image cannot be read or written."""

    exit_code = 2

    def __init__(self, message: str, path: Union[str, Path]):
        self.path = path
        super().__init__(f"{path}: {message}")


class UsageError(PottsError):
    """Raised for malformed command-line arguments."""

    pass
