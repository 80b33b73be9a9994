"""Conditional-independence models and oracles.

Three oracle flavours answer the same elementary query "is i independent of
j given C": an explicit relation set, an exact Gaussian model queried via
partial correlations, and a Fisher-z test on sampled data.  Explicit and
Gaussian oracles are immutable; the test-backed oracle memoizes each
answered query so repeated questions always get the same answer.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.stats import norm

from .graphs import (
    DAG,
    MAG,
    UNDIRECTED,
    MixedGraph,
    Triple,
    node_pairs,
    separation_set,
    validate_class,
)


def _normalize_triple(n: int, i: int, j: int, cond: Iterable[int]) -> Triple:
    cond = frozenset(cond)
    if i == j:
        raise ValueError("independence statements need distinct endpoints")
    if i in cond or j in cond:
        raise ValueError("conditioning set must exclude the endpoints")
    for v in (i, j, *cond):
        if not 1 <= v <= n:
            raise ValueError(f"node {v} out of range 1..{n}")
    return (min(i, j), max(i, j), cond)


@dataclass(frozen=True)
class CISet:
    """Symmetric ternary relation of elementary independencies.

    Triples are stored as (i, j, C) with i < j; membership queries
    normalize the order, so the relation is symmetric by construction.
    """

    n: int
    triples: frozenset[Triple]

    @classmethod
    def of(cls, n: int, triples: Iterable[tuple[int, int, Iterable[int]]]) -> "CISet":
        return cls(n, frozenset(_normalize_triple(n, i, j, c) for i, j, c in triples))

    def holds(self, i: int, j: int, cond: Iterable[int]) -> bool:
        return _normalize_triple(self.n, i, j, cond) in self.triples

    def seps(self, i: int, j: int) -> frozenset[frozenset[int]]:
        """All conditioning sets under which the pair is independent."""
        a, b = min(i, j), max(i, j)
        return frozenset(c for (x, y, c) in self.triples if (x, y) == (a, b))

    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, j) for i, j, _ in self.triples)

    def skeleton_pairs(self) -> frozenset[tuple[int, int]]:
        """Adjacencies of the induced skeleton: pairs with no separating set."""
        return frozenset(p for p in node_pairs(self.n) if p not in self.pairs())

    def union(self, other: "CISet") -> "CISet":
        if self.n != other.n:
            raise ValueError("node counts differ")
        return CISet(self.n, self.triples | other.triples)

    def issubset(self, other: "CISet") -> bool:
        return self.n == other.n and self.triples <= other.triples

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self):
        return iter(sorted(self.triples, key=lambda t: (t[0], t[1], sorted(t[2]))))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "triples": [
                {"i": i, "j": j, "cond": sorted(c)}
                for i, j, c in sorted(self.triples, key=lambda t: (t[0], t[1], sorted(t[2])))
            ],
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> "CISet":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.of(obj["n"], [(t["i"], t["j"], t["cond"]) for t in obj["triples"]])

    def __repr__(self) -> str:
        body = ", ".join(f"{i}_||_{j}|{sorted(c)}" for i, j, c in self) or "empty"
        return f"CISet(n={self.n}: {body})"


def all_triples(n: int) -> list[Triple]:
    """Every elementary triple on 1..n (the full relation)."""
    out = []
    nodes = set(range(1, n + 1))
    for i, j in node_pairs(n):
        rest = sorted(nodes - {i, j})
        for r in range(len(rest) + 1):
            for sub in itertools.combinations(rest, r):
                out.append((i, j, frozenset(sub)))
    return out


def from_graph(g: MixedGraph) -> CISet:
    """The separation set of a DAG or MAG as a CISet (the faithful relation)."""
    if not (validate_class(g, DAG) or validate_class(g, MAG)):
        raise ValueError("from_graph expects a DAG or a MAG")
    return CISet(g.n, separation_set(g))


def union_of_markov(graphs: Iterable[MixedGraph]) -> CISet:
    """Union of the separation sets of several graphs on the same nodes."""
    graphs = list(graphs)
    if not graphs:
        raise ValueError("need at least one graph")
    n = graphs[0].n
    if any(g.n != n for g in graphs):
        raise ValueError("node counts differ")
    triples: frozenset[Triple] = frozenset()
    for g in graphs:
        triples |= from_graph(g).triples
    return CISet(n, triples)


# --- oracles ---


class ExplicitOracle:
    """Oracle backed by an explicit CISet."""

    def __init__(self, relation: CISet):
        self.relation = relation
        self.n = relation.n

    def independent(self, i: int, j: int, cond: Iterable[int]) -> bool:
        return self.relation.holds(i, j, cond)


@dataclass
class GaussianModel:
    """Zero-mean Gaussian described by its covariance matrix.

    ``tolerance`` absorbs floating-point error in zero tests of partial
    correlations; population covariances used here are exact rationals.
    """

    n: int
    covariance: np.ndarray
    tolerance: float = 1e-9

    def __post_init__(self):
        cov = np.asarray(self.covariance, dtype=float)
        if cov.shape != (self.n, self.n):
            raise ValueError(f"covariance must be {self.n}x{self.n}")
        if not np.allclose(cov, cov.T, atol=max(self.tolerance, 1e-12)):
            raise ValueError("covariance must be symmetric")
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as exc:
            raise ValueError("covariance must be positive definite") from exc
        self.covariance = cov


def partial_correlation(cov: np.ndarray, i: int, j: int, cond: Iterable[int]) -> float:
    """rho_{ij.C} from a covariance matrix (nodes are 1-based)."""
    idx = [i - 1, j - 1] + [k - 1 for k in sorted(cond)]
    sub = cov[np.ix_(idx, idx)]
    try:
        theta = np.linalg.inv(sub)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"singular covariance submatrix for ({i}, {j} | {sorted(cond)})") from exc
    return float(-theta[0, 1] / math.sqrt(theta[0, 0] * theta[1, 1]))


class GaussianOracle:
    """Exact oracle: independent iff the partial correlation vanishes."""

    def __init__(self, model: GaussianModel):
        self.model = model
        self.n = model.n

    def independent(self, i: int, j: int, cond: Iterable[int]) -> bool:
        i2, j2, c = _normalize_triple(self.n, i, j, cond)
        rho = partial_correlation(self.model.covariance, i2, j2, c)
        return abs(rho) <= self.model.tolerance


@dataclass
class Dataset:
    """Sampled data matrix with one column per node."""

    n: int
    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != self.n:
            raise ValueError(f"rows must be an m x {self.n} matrix")
        if rows.shape[0] < 2:
            raise ValueError("need at least two rows")
        if np.any(np.ptp(rows, axis=0) == 0):
            raise ValueError("constant column; correlations undefined")
        self.rows = rows

    @property
    def m(self) -> int:
        return self.rows.shape[0]

    def to_csv(self, path: str) -> None:
        header = ",".join(str(k) for k in range(1, self.n + 1))
        np.savetxt(path, self.rows, delimiter=",", header=header, comments="")

    @classmethod
    def from_csv(cls, path: str) -> "Dataset":
        with open(path) as fh:
            header = fh.readline().strip().split(",")
        n = len(header)
        if header != [str(k) for k in range(1, n + 1)]:
            raise ValueError("CSV header must be the column indices 1..n")
        rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(n, rows)


class FisherZOracle:
    """Fisher z-transform test; independence when the null is not rejected.

    Queries are memoized so every repeat of a question within a run gets the
    identical answer (clone per worker if sharing across threads).
    """

    def __init__(self, data: Dataset, alpha: float = 0.01):
        if not 0 < alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        self.data = data
        self.alpha = alpha
        self.n = data.n
        self.correlation = np.corrcoef(data.rows.T)
        self._memo: dict[Triple, bool] = {}

    def independent(self, i: int, j: int, cond: Iterable[int]) -> bool:
        key = _normalize_triple(self.n, i, j, cond)
        if key in self._memo:
            return self._memo[key]
        i2, j2, c = key
        r = partial_correlation(self.correlation, i2, j2, c)
        r = max(min(r, 1.0 - 1e-12), -1.0 + 1e-12)
        z = 0.5 * math.log((1.0 + r) / (1.0 - r))
        stat = math.sqrt(self.data.m - len(c) - 3) * abs(z)
        p = 2.0 * (1.0 - norm.cdf(stat))
        answer = p >= self.alpha
        self._memo[key] = answer
        return answer


Oracle = ExplicitOracle | GaussianOracle | FisherZOracle


def as_oracle(source: CISet | Oracle) -> Oracle:
    if isinstance(source, CISet):
        return ExplicitOracle(source)
    return source


def ci_holds(oracle: CISet | Oracle, i: int, j: int, cond: Iterable[int]) -> bool:
    """Elementary query against any oracle flavour (or a bare CISet)."""
    return as_oracle(oracle).independent(i, j, cond)


def skeleton_of(oracle: CISet | Oracle, n: int) -> MixedGraph:
    """Undirected graph joining pairs that no conditioning set separates."""
    o = as_oracle(oracle)
    if o.n != n:
        raise ValueError("node count does not match the oracle")
    nodes = set(range(1, n + 1))
    edges = []
    for i, j in node_pairs(n):
        rest = sorted(nodes - {i, j})
        if not any(
            o.independent(i, j, set(sub))
            for r in range(len(rest) + 1)
            for sub in itertools.combinations(rest, r)
        ):
            edges.append((i, j, UNDIRECTED))
    return MixedGraph.build(n, edges)


def relation_of(oracle: CISet | Oracle, n: int) -> CISet:
    """Materialize an oracle into an explicit CISet by asking everything."""
    o = as_oracle(oracle)
    if o.n != n:
        raise ValueError("node count does not match the oracle")
    return CISet(n, frozenset(t for t in all_triples(n) if o.independent(t[0], t[1], t[2])))


# --- closure and axiom checks (exploration helpers, off by default) ---


def closure(p: CISet, level: str = "semigraphoid") -> CISet:
    """Close an elementary relation under axiom projections.

    Only rules whose premises and conclusions are both elementary are
    applied.  ``semigraphoid`` uses the contraction family; ``gaussian``
    adds composition and intersection.  Property evaluation never calls
    this: counterexample relation sets are taken literally.
    """
    if level not in ("semigraphoid", "gaussian"):
        raise ValueError("level must be 'semigraphoid' or 'gaussian'")
    triples = set(p.triples)
    changed = True
    while changed:
        changed = False
        new: set[Triple] = set()
        items = list(triples)
        for (i, j, c) in items:
            for k in c:
                # (i,j | C+k) with (i,k | C) yields (i,j | C) and (i,k | C+j)
                rest = c - {k}
                if (min(i, k), max(i, k), rest) in triples:
                    new.add((i, j, rest))
                    new.add((min(i, k), max(i, k), rest | {j}))
                if (min(j, k), max(j, k), rest) in triples:
                    new.add((i, j, rest))
                    new.add((min(j, k), max(j, k), rest | {i}))
        if level == "gaussian":
            for (i, j, c) in items:
                others = set(range(1, p.n + 1)) - {i, j} - c
                for k in others:
                    # composition + weak union
                    if (min(i, k), max(i, k), c) in triples:
                        new.add((i, j, c | {k}))
                        new.add((min(i, k), max(i, k), c | {j}))
                    if (min(j, k), max(j, k), c) in triples:
                        new.add((i, j, c | {k}))
                        new.add((min(j, k), max(j, k), c | {i}))
                for k in c:
                    # intersection
                    rest = c - {k}
                    if (min(i, k), max(i, k), rest | {j}) in triples:
                        new.add((i, j, rest))
                        new.add((min(i, k), max(i, k), rest))
        if not new <= triples:
            triples |= new
            changed = True
    return CISet(p.n, frozenset(triples))


def is_singleton_transitive(p: CISet) -> bool:
    """i⊥j|C and i⊥j|C∪{k} must force i⊥k|C or j⊥k|C."""
    for (i, j, c) in p.triples:
        others = set(range(1, p.n + 1)) - {i, j} - c
        for k in others:
            if (i, j, c | {k}) in p.triples:
                if not (p.holds(i, k, c) or p.holds(j, k, c)):
                    return False
    return True
