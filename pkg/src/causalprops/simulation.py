"""Linear Gaussian structural models, analytic covariance, and the PC
recovery experiment.

Per-batch random streams are derived from (seed, batch index), so batches
are reproducible bit-for-bit whether run serially, in parallel, or in any
order; the reduction is plain counting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algorithms import pc_run
from .ci import Dataset, FisherZOracle, GaussianModel, GaussianOracle
from .graphs import DAG, DIRECTED, MixedGraph, mec_key, validate_class


@dataclass(frozen=True)
class LinearSCM:
    """Linear structural equations with independent Gaussian noise.

    ``coefficients[j][i]`` is the weight of variable i+1 in the equation of
    variable j+1; the induced directed graph must be acyclic.
    """

    n: int
    coefficients: tuple[tuple[float, ...], ...]
    noise_variances: tuple[float, ...]

    @classmethod
    def build(cls, coefficients, noise_variances=None) -> "LinearSCM":
        coeffs = tuple(tuple(float(x) for x in row) for row in coefficients)
        n = len(coeffs)
        if any(len(row) != n for row in coeffs):
            raise ValueError("coefficient matrix must be square")
        if noise_variances is None:
            noise_variances = (1.0,) * n
        variances = tuple(float(v) for v in noise_variances)
        if len(variances) != n or any(v <= 0 for v in variances):
            raise ValueError("need one positive noise variance per variable")
        scm = cls(n, coeffs, variances)
        if not validate_class(scm.induced_graph(), DAG):
            raise ValueError("coefficient matrix induces a directed cycle")
        return scm

    def induced_graph(self) -> MixedGraph:
        edges = [
            (i + 1, j + 1, DIRECTED)
            for j, row in enumerate(self.coefficients)
            for i, w in enumerate(row)
            if w != 0.0
        ]
        return MixedGraph.build(self.n, edges)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "coefficients": [list(row) for row in self.coefficients],
            "noise_variances": list(self.noise_variances),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LinearSCM":
        return cls.build(obj["coefficients"], obj.get("noise_variances"))


def population_covariance(scm: LinearSCM, tolerance: float = 1e-9) -> GaussianModel:
    """Sigma = (I - B)^-1 D (I - B)^-T, exact up to float arithmetic."""
    b = np.array(scm.coefficients, dtype=float)
    d = np.diag(scm.noise_variances)
    inv = np.linalg.inv(np.eye(scm.n) - b)
    return GaussianModel(scm.n, inv @ d @ inv.T, tolerance)


def sample(scm: LinearSCM, m: int, seed) -> Dataset:
    """Draw m rows; each variable adds its noise to the weighted parents."""
    if m < 2:
        raise ValueError("need at least two rows")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((m, scm.n)) * np.sqrt(np.array(scm.noise_variances))
    b = np.array(scm.coefficients, dtype=float)
    rows = noise @ np.linalg.inv(np.eye(scm.n) - b).T
    return Dataset(scm.n, rows)


_CANCELLATION_COEFFS = (
    (0, 0, 0, 0),
    (0, 0, 0, 0),
    (2, -3, 0, 0),
    (3, 2, 0, 0),
)


def cancellation_scm() -> LinearSCM:
    """Four-variable SCM whose two treks between the sink variables cancel
    exactly (2*3 - 3*2 = 0), creating a marginal independence the graph
    does not display.

    With unit noise everywhere the coefficient rows are orthogonal in both
    pairings, so the precision entry between the two source variables
    vanishes as well: the induced relation has four independence
    statements, not three.  Use :func:`experiment_scm` when exactly the
    three-statement relation is wanted.
    """
    return LinearSCM.build(_CANCELLATION_COEFFS)


def experiment_scm() -> LinearSCM:
    """The cancellation SCM with noise variance 2 on the last variable.

    The bumped variance breaks the second (accidental) cancellation while
    keeping the trek cancellation, so the induced relation is exactly: the
    sources are marginally independent, and the sinks are independent both
    marginally and given the sources.  This is the relation the recovery
    experiment needs the data to carry.
    """
    return LinearSCM.build(_CANCELLATION_COEFFS, (1, 1, 1, 2))


def two_collider_square() -> MixedGraph:
    """1 -> 3 <- 2 and 1 -> 4 <- 2: the graph of the cancellation SCM."""
    return MixedGraph.build(4, [(1, 3, DIRECTED), (2, 3, DIRECTED), (1, 4, DIRECTED), (2, 4, DIRECTED)])


@dataclass(frozen=True)
class ExperimentConfig:
    batches: int = 200
    samples: int = 10000
    alpha: float = 0.01
    seed: int = 42
    variants: tuple[int, ...] = (1, 3)

    def __post_init__(self):
        if self.batches <= 0 or self.samples <= 0:
            raise ValueError("batches and samples must be positive")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        if not self.variants or any(v not in (1, 2, 3) for v in self.variants):
            raise ValueError("variants must be drawn from 1, 2, 3")


def batch_outcomes(cfg: ExperimentConfig, batch: int) -> dict[int, bool]:
    """Whether each variant recovers the true equivalence class exactly, on
    one freshly sampled batch."""
    scm = experiment_scm()
    target = frozenset([mec_key(two_collider_square())])
    data = sample(scm, cfg.samples, [cfg.seed, batch])
    oracle = FisherZOracle(data, cfg.alpha)
    return {v: pc_run(v, oracle, scm.n).meckeys() == target for v in cfg.variants}


def table1_experiment(cfg: ExperimentConfig, exact_oracle: bool = False) -> dict[int, float]:
    """Fraction of batches on which each PC variant returns exactly the
    true equivalence class of the cancellation SCM.

    With ``exact_oracle`` the Fisher-z tests are replaced by the analytic
    population oracle and a single noiseless run decides each rate.
    """
    scm = experiment_scm()
    target = frozenset([mec_key(two_collider_square())])
    if exact_oracle:
        oracle = GaussianOracle(population_covariance(scm))
        return {
            v: 1.0 if pc_run(v, oracle, scm.n).meckeys() == target else 0.0
            for v in cfg.variants
        }
    correct = {v: 0 for v in cfg.variants}
    for batch in range(cfg.batches):
        for v, ok in batch_outcomes(cfg, batch).items():
            if ok:
                correct[v] += 1
    return {v: correct[v] / cfg.batches for v in cfg.variants}
