"""Base Potts solver interface."""

import logging
import time
from abc import ABC, abstractmethod
from typing import Any, Dict, List, NamedTuple, Tuple

import numpy as np

from pottsrf.core.config import SolverConfig
from pottsrf.core.exceptions import ConfigurationError, DivergenceError
from pottsrf.core.models import SolverReport
from pottsrf.solvers.backends import TVBackend
from pottsrf.solvers.energy import dual_energy, duality_gap, primal_energy
from pottsrf.solvers.projections import project_simplex_rows


class SolveResult(NamedTuple):
    """Membership field, dual flow and convergence report of one solve."""

    phi: np.ndarray
    flow: np.ndarray
    report: SolverReport


def argmin_init(F: np.ndarray, uniform: bool = False) -> np.ndarray:
    """One-hot rows at argmin_k f_k, or uniform 1/K rows."""
    n, K = F.shape
    if uniform:
        return np.full((n, K), 1.0 / K)
    phi = np.zeros((n, K))
    phi[np.arange(n), np.argmin(F, axis=1)] = 1.0
    return phi


def assign_labels(phi: np.ndarray) -> np.ndarray:
    """Row-wise argmax; ties go to the smallest class index."""
    return np.argmax(np.asarray(phi, dtype=float), axis=1)


class PottsSolver(ABC):
    """Abstract base class for relaxed Potts solvers.

    Subclasses keep their iterates in a state dict and implement one iteration
    at a time; the base class owns initialization checks, energy tracking,
    the stopping rule and the report.
    """

    algorithm: str

    def __init__(self, config: SolverConfig):
        """Initialize the solver."""
        if config.algorithm != self.algorithm:
            raise ConfigurationError(
                f"{type(self).__name__} needs algorithm={self.algorithm!r}, "
                f"got {config.algorithm!r}"
            )
        self.config = config
        self.logger = logging.getLogger(__name__)
        self.logger.setLevel(getattr(logging, config.log_level.upper()))

    @abstractmethod
    def _initialize(
        self, F: np.ndarray, alpha: np.ndarray, backend: TVBackend
    ) -> Dict[str, Any]:
        """Return the initial iterate state."""
        pass

    @abstractmethod
    def _iterate(
        self,
        state: Dict[str, Any],
        F: np.ndarray,
        alpha: np.ndarray,
        backend: TVBackend,
        iteration: int,
    ) -> None:
        """Advance ``state`` by one iteration in place."""
        pass

    def _energies(
        self,
        state: Dict[str, Any],
        F: np.ndarray,
        alpha: np.ndarray,
        backend: TVBackend,
    ) -> Tuple[float, float]:
        return (
            primal_energy(F, state["phi"], alpha, backend),
            dual_energy(F, state["q"], backend),
        )

    def _extract(self, state: Dict[str, Any]) -> np.ndarray:
        """Membership field handed back to the caller."""
        return project_simplex_rows(state["phi"])

    def solve(
        self, F: np.ndarray, alpha: np.ndarray, backend: TVBackend
    ) -> SolveResult:
        """
        Solve the relaxed Potts problem for region forces F.

        Args:
            F: N x K region force matrix
            alpha: TV weight per node (scalar broadcast allowed)
            backend: spatial operators the TV term lives on

        Returns:
            SolveResult with the simplex-feasible field, the dual flow and a report

        Raises:
            DivergenceError: If an energy or iterate becomes non-finite
        """
        cfg = self.config
        if cfg.tv_flavor is not None and cfg.tv_flavor != backend.flavor:
            raise ConfigurationError(
                f"tv_flavor {cfg.tv_flavor!r} does not match backend {backend.flavor!r}"
            )
        F = backend.check_forces(F)
        if not np.all(np.isfinite(F)):
            raise DivergenceError("non-finite region forces", iteration=0)
        alpha = backend.check_alpha(alpha)

        self.logger.info(
            "Starting %s on %d nodes, %d classes (%s)",
            self.algorithm.upper(),
            F.shape[0],
            F.shape[1],
            backend.flavor,
        )
        start = time.perf_counter()
        state = self._initialize(F, alpha, backend)
        primal_history: List[float] = []
        dual_history: List[float] = []
        gap = float("inf")
        termination = "max_iter"

        for iteration in range(1, cfg.max_iter + 1):
            self._iterate(state, F, alpha, backend, iteration)
            E_P, E_D = self._energies(state, F, alpha, backend)
            if not (np.isfinite(E_P) and np.isfinite(E_D)):
                raise DivergenceError(
                    f"non-finite energy (E_P={E_P}, E_D={E_D})", iteration=iteration
                )
            primal_history.append(E_P)
            dual_history.append(E_D)
            gap = duality_gap(E_P, E_D)
            self.logger.debug(
                "iter %d: E_P=%.8g E_D=%.8g gap=%.3e", iteration, E_P, E_D, gap
            )
            if gap <= cfg.epsilon:
                termination = "gap"
                break

        phi = self._extract(state)
        flow = state["q"]
        report = SolverReport(
            algorithm=self.algorithm,
            iterations=len(primal_history),
            primal_energy_history=primal_history,
            dual_energy_history=dual_history,
            final_gap=gap,
            primal_energy=primal_energy(F, phi, alpha, backend),
            dual_energy=dual_energy(F, flow, backend),
            wall_time_s=time.perf_counter() - start,
            termination=termination,
        )
        self.logger.info(
            "%s finished after %d iterations (%s, gap=%.3e, %.2fs)",
            self.algorithm.upper(),
            report.iterations,
            termination,
            gap,
            report.wall_time_s,
        )
        return SolveResult(phi=phi, flow=flow, report=report)
