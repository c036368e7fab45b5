"""Entry points for solving the relaxed Potts problem."""

from typing import Dict, Type

import numpy as np

from pottsrf.core.config import SolverConfig
from pottsrf.core.exceptions import ConfigurationError
from pottsrf.solvers.admm import AdmmSolver
from pottsrf.solvers.backends import TVBackend
from pottsrf.solvers.base import PottsSolver, SolveResult
from pottsrf.solvers.pdhg import PdhgSolver

SOLVERS: Dict[str, Type[PottsSolver]] = {"pdhg": PdhgSolver, "admm": AdmmSolver}


def create_solver(config: SolverConfig) -> PottsSolver:
    try:
        return SOLVERS[config.algorithm](config)
    except KeyError:
        raise ConfigurationError(f"unknown algorithm {config.algorithm!r}")


def pdhg_solve(
    F: np.ndarray, alpha: np.ndarray, backend: TVBackend, config: SolverConfig
) -> SolveResult:
    return PdhgSolver(config).solve(F, alpha, backend)


def admm_solve(
    F: np.ndarray, alpha: np.ndarray, backend: TVBackend, config: SolverConfig
) -> SolveResult:
    return AdmmSolver(config).solve(F, alpha, backend)


def solve(
    F: np.ndarray, alpha: np.ndarray, backend: TVBackend, config: SolverConfig
) -> SolveResult:
    """Dispatch on ``config.algorithm``."""
    return create_solver(config).solve(F, alpha, backend)
