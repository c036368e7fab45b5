"""Semi-supervised s-NN clustering with Bernoulli region forces."""

import logging
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed
from scipy import sparse

from pottsrf.core.config import ClusterParams, RunConfig, SolverConfig
from pottsrf.core.exceptions import InvalidArgumentError, ShapeMismatchError
from pottsrf.core.models import Dataset, SeedSet, TrialAggregate, TrialResult
from pottsrf.forces.probabilities import diffusion_probabilities
from pottsrf.forces.region import region_force_linear, region_force_log
from pottsrf.graph.affinity import normalize_affinity, with_self_loops
from pottsrf.graph.builders import build_knn_graph
from pottsrf.graph.graph import Graph
from pottsrf.pipelines.datasets import sample_seeds
from pottsrf.solvers.backends import GraphBackend
from pottsrf.solvers.base import assign_labels
from pottsrf.solvers.potts import create_solver

logger = logging.getLogger(__name__)


class PreparedGraph(NamedTuple):
    """s-NN graph and its normalized affinity, reusable across seed draws."""

    graph: Graph
    affinity: sparse.csr_matrix


def accuracy(predicted: np.ndarray, truth: np.ndarray) -> float:
    """Fraction of exact label matches."""
    predicted = np.asarray(predicted).ravel()
    truth = np.asarray(truth).ravel()
    if predicted.shape != truth.shape:
        raise ShapeMismatchError(
            f"{predicted.size} predictions vs {truth.size} ground-truth labels"
        )
    if predicted.size == 0:
        raise InvalidArgumentError("cannot score an empty labeling")
    return float(np.mean(predicted == truth))


def probability_accuracy(P: np.ndarray, truth: np.ndarray) -> float:
    """Accuracy of the most probable class alone."""
    return accuracy(assign_labels(P), truth)


def prepare_graph(dataset: Dataset, params: ClusterParams) -> PreparedGraph:
    graph = build_knn_graph(
        dataset.points,
        params.s,
        weight_kind=params.weight_kind,
        rbf_epsilon=params.rbf_epsilon,
    )
    affinity = normalize_affinity(with_self_loops(graph))
    return PreparedGraph(graph=graph, affinity=affinity)


def cluster(
    dataset: Dataset,
    seeds: SeedSet,
    params: ClusterParams,
    solver_config: SolverConfig,
    prepared: Optional[PreparedGraph] = None,
    trial: int = 0,
    rng_seed: int = 0,
) -> TrialResult:
    """
    Label every point of ``dataset`` from the seeded ones.

    Args:
        dataset: Points and ground truth (used for scoring only)
        seeds: Labelled node indices per class
        params: Graph, probability and force parameters
        solver_config: Potts solver settings
        prepared: Graph and affinity from ``prepare_graph``, built if omitted
        trial: Trial index recorded in the result
        rng_seed: Seed recorded in the result

    Returns:
        TrialResult with accuracies and the solver report
    """
    if seeds.n_classes != dataset.n_classes:
        raise InvalidArgumentError(
            f"{seeds.n_classes} seed classes for a {dataset.n_classes}-class dataset"
        )
    seed_index = seeds.indices()
    if seed_index.size and seed_index.max() >= dataset.n_points:
        raise InvalidArgumentError(f"seed index {seed_index.max()} out of range")

    if prepared is None:
        prepared = prepare_graph(dataset, params)
    P = diffusion_probabilities(prepared.affinity, seeds, m=params.m)
    if params.region_force == "log":
        F = region_force_log(P, params.delta)
    else:
        F = region_force_linear(P)

    result = create_solver(solver_config).solve(
        F, params.alpha, GraphBackend(prepared.graph)
    )
    unclamped = assign_labels(result.phi)
    labels = unclamped.copy()
    if params.clamp_seeds:
        for index, k in seeds.label_map().items():
            labels[index] = k

    truth = dataset.labels
    unlabeled = np.ones(dataset.n_points, dtype=bool)
    unlabeled[seed_index] = False
    trial_result = TrialResult(
        trial=trial,
        rng_seed=rng_seed,
        region_force=params.region_force,
        accuracy=accuracy(labels, truth),
        unlabeled_accuracy=(
            accuracy(labels[unlabeled], truth[unlabeled]) if unlabeled.any() else 1.0
        ),
        unclamped_accuracy=accuracy(unclamped, truth),
        probability_accuracy=probability_accuracy(P, truth),
        seed_indices=seed_index.tolist(),
        report=result.report,
    )
    if trial_result.accuracy != trial_result.unclamped_accuracy:
        logger.info(
            "Seed clamping changed accuracy %.4f -> %.4f",
            trial_result.unclamped_accuracy,
            trial_result.accuracy,
        )
    return trial_result


def aggregate_trials(
    results: Sequence[TrialResult],
    run_id: str,
    algorithm: str,
    n_seeds: int,
    base_seed: int,
) -> TrialAggregate:
    """Means and standard deviations over trials, reduced in trial order."""
    if not results:
        raise InvalidArgumentError("no trial results to aggregate")
    ordered = sorted(results, key=lambda r: r.trial)
    acc = np.array([r.accuracy for r in ordered])
    prob = np.array([r.probability_accuracy for r in ordered])
    return TrialAggregate(
        run_id=run_id,
        algorithm=algorithm,
        region_force=ordered[0].region_force,
        n_trials=len(ordered),
        n_seeds=n_seeds,
        base_seed=base_seed,
        mean_accuracy=float(acc.mean()),
        std_accuracy=float(acc.std()),
        mean_unlabeled_accuracy=float(np.mean([r.unlabeled_accuracy for r in ordered])),
        mean_probability_accuracy=float(prob.mean()),
        std_probability_accuracy=float(prob.std()),
        mean_iterations=float(np.mean([r.report.iterations for r in ordered])),
        mean_wall_time_s=float(np.mean([r.report.wall_time_s for r in ordered])),
        mean_final_gap=float(np.mean([r.report.final_gap for r in ordered])),
        trials=list(ordered),
    )


class ClusteringRunner:
    """Repeats seeded clustering trials for one dataset and configuration."""

    def __init__(self, config: RunConfig):
        """Initialize the runner."""
        self.config = config
        self.params = config.cluster_params()
        self.solver_config = config.solver_config()
        self.logger = logging.getLogger(__name__)
        self.logger.setLevel(getattr(logging, config.log_level))
        self._prepared: Optional[PreparedGraph] = None
        self._prepared_for: Optional[int] = None

    def _graph_for(self, dataset: Dataset) -> PreparedGraph:
        if self._prepared is None or self._prepared_for != id(dataset):
            self._prepared = prepare_graph(dataset, self.params)
            self._prepared_for = id(dataset)
        return self._prepared

    def run_trial(self, dataset: Dataset, trial: int, n_seeds: int) -> TrialResult:
        rng_seed = self.config.rng_seed + trial
        seeds = sample_seeds(
            dataset, n_seeds, rng_seed=rng_seed, stratified=self.config.stratified
        )
        result = cluster(
            dataset,
            seeds,
            self.params,
            self.solver_config,
            prepared=self._graph_for(dataset),
            trial=trial,
            rng_seed=rng_seed,
        )
        self.logger.info(
            "Trial %d (seed %d): accuracy %.4f, %d iterations",
            trial,
            rng_seed,
            result.accuracy,
            result.report.iterations,
        )
        return result

    def run_trials(
        self,
        dataset: Dataset,
        n_trials: Optional[int] = None,
        n_seeds: Optional[int] = None,
    ) -> TrialAggregate:
        """
        Run trials with rng seeds base+0 ... base+n_trials-1 and aggregate them.

        Any failing trial fails the whole run.
        """
        n_trials = n_trials if n_trials is not None else self.config.n_trials
        n_seeds = n_seeds if n_seeds is not None else self.config.n_seeds
        if n_trials < 1:
            raise InvalidArgumentError(f"n_trials must be positive, got {n_trials}")
        self._graph_for(dataset)

        if self.solver_config.deterministic or self.config.threads == 1:
            results = [self.run_trial(dataset, t, n_seeds) for t in range(n_trials)]
        else:
            results = Parallel(n_jobs=self.config.threads, prefer="threads")(
                delayed(self.run_trial)(dataset, t, n_seeds) for t in range(n_trials)
            )

        run_id = (
            f"{dataset.name}-{self.solver_config.algorithm}-{self.params.region_force}"
            f"-n{n_seeds}-seed{self.config.rng_seed}"
        )
        aggregate = aggregate_trials(
            results,
            run_id=run_id,
            algorithm=self.solver_config.algorithm,
            n_seeds=n_seeds,
            base_seed=self.config.rng_seed,
        )
        self.logger.info(
            "%s: mean accuracy %.4f +/- %.4f over %d trials",
            run_id,
            aggregate.mean_accuracy,
            aggregate.std_accuracy,
            n_trials,
        )
        return aggregate

    def sweep_seed_counts(
        self,
        dataset: Dataset,
        seed_counts: Sequence[int],
        n_trials: Optional[int] = None,
    ) -> List[TrialAggregate]:
        """One aggregate per labelled-set size, sharing the same graph."""
        if not seed_counts:
            raise InvalidArgumentError("seed_counts is empty")
        return [
            self.run_trials(dataset, n_trials=n_trials, n_seeds=int(n))
            for n in seed_counts
        ]


def run_trials(
    dataset: Dataset, config: RunConfig, n_trials: Optional[int] = None
) -> TrialAggregate:
    return ClusteringRunner(config).run_trials(dataset, n_trials=n_trials)


def sweep_seed_counts(
    dataset: Dataset,
    config: RunConfig,
    seed_counts: Sequence[int] = (50, 75, 100),
    n_trials: Optional[int] = None,
) -> List[TrialAggregate]:
    return ClusteringRunner(config).sweep_seed_counts(dataset, seed_counts, n_trials)
