"""Executable constraint-based learners.

The skeleton phase here is the definitional one: every conditioning set is
tested and every separating set recorded, so the orientation rules see the
same quantifiers the analysis assumes (no order-dependent shortcuts).  The
output set of a PC variant is constructed directly as the set of DAGs
consistent with the rule's assignment; no orientation propagation is
needed, and a CPDAG-style summary can be derived from the output for
display.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .ci import CISet, Oracle, as_oracle
from .framework import (
    Assignment,
    assignment_consistent_graphs,
    orientation_assign,
    pc_pair,
)
from .graphs import (
    DAG,
    UNDIRECTED,
    EnumerationCapError,
    MecKey,
    MixedGraph,
    mec_key,
    node_pairs,
)


@dataclass(frozen=True)
class SepsetTable:
    """All separating sets found for each non-adjacent pair."""

    n: int
    sets: tuple[tuple[tuple[int, int], frozenset[frozenset[int]]], ...]

    def all_seps(self, i: int, j: int) -> frozenset[frozenset[int]]:
        key = (min(i, j), max(i, j))
        for pair, seps in self.sets:
            if pair == key:
                return seps
        return frozenset()

    def as_ciset(self) -> CISet:
        triples = set()
        for (i, j), seps in self.sets:
            for c in seps:
                triples.add((i, j, c))
        return CISet(self.n, frozenset(triples))

    def to_json(self) -> list[dict]:
        return [
            {"i": i, "j": j, "seps": sorted(sorted(c) for c in seps)}
            for (i, j), seps in self.sets
        ]


def pc_skeleton(oracle: CISet | Oracle, n: int) -> tuple[MixedGraph, SepsetTable]:
    """Exhaustive skeleton phase: i-j survives iff no conditioning set
    separates the pair; every separating set is recorded."""
    o = as_oracle(oracle)
    if o.n != n:
        raise ValueError("node count does not match the oracle")
    nodes = set(range(1, n + 1))
    edges = []
    table = []
    for i, j in node_pairs(n):
        rest = sorted(nodes - {i, j})
        seps = set()
        for r in range(len(rest) + 1):
            for sub in itertools.combinations(rest, r):
                if o.independent(i, j, set(sub)):
                    seps.add(frozenset(sub))
        if seps:
            table.append(((i, j), frozenset(seps)))
        else:
            edges.append((i, j, UNDIRECTED))
    skeleton = MixedGraph.build(n, edges)
    return skeleton, SepsetTable(n, tuple(table))


@dataclass(frozen=True)
class PcResult:
    """Skeleton, v-configuration assignment, and the output set of DAGs."""

    variant: int
    skeleton: MixedGraph
    assignment: Assignment
    dags: frozenset[MixedGraph]

    def meckeys(self) -> frozenset[MecKey]:
        return frozenset(mec_key(g) for g in self.dags)

    def cpdag_marks(self) -> dict[tuple[int, int], str]:
        """Summary edge marks: directed when all output DAGs agree."""
        marks = {}
        for a, b in sorted(self.skeleton.skeleton_pairs()):
            orient = {((a, b) in g.directed) for g in self.dags}
            if orient == {True}:
                marks[(a, b)] = "directed"
            elif orient == {False}:
                marks[(a, b)] = "reversed"
            else:
                marks[(a, b)] = "undirected"
        return marks

    def to_json(self) -> dict:
        keys = sorted(
            self.meckeys(),
            key=lambda k: (sorted(k.skeleton), sorted(k.collider_paths)),
        )
        return {
            "variant": self.variant,
            "skeleton": self.skeleton.to_json(),
            "assignment": self.assignment.to_json(),
            "dags": [g.to_json() for g in sorted(self.dags, key=lambda g: g.sort_key())],
            "equivalence_classes": len(keys),
            "equivalence_class_keys": [
                {
                    "skeleton": [[i, j] for i, j in sorted(k.skeleton)],
                    "collider_paths": [list(path) for path in sorted(k.collider_paths)],
                }
                for k in keys
            ],
        }


def pc_run(variant: int, oracle: CISet | Oracle, n: int) -> PcResult:
    """Run a PC orientation-rule variant against an oracle.

    Rules 1 and 2 assign every v-configuration; rule 3 (the conservative
    rule) may leave some unassigned, widening the output set.
    """
    if variant not in (1, 2, 3):
        raise ValueError("variant must be 1, 2 or 3")
    skeleton, table = pc_skeleton(oracle, n)
    relation = table.as_ciset()
    assignment = orientation_assign(pc_pair(variant), relation)
    dags = assignment_consistent_graphs(assignment, relation, n)
    return PcResult(variant, skeleton, assignment, dags)


def permutation_dag(p: CISet | Oracle, order: Sequence[int]) -> MixedGraph:
    """Minimal-I-MAP DAG of a node ordering.

    An earlier node points to a later one iff conditioning on everything
    that precedes the later node (minus the earlier one) fails to separate
    the pair.  Acyclic by construction, and causally minimal for relation
    sets that graphs can realize.
    """
    o = as_oracle(p)
    n = o.n
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError("order must be a permutation of 1..n")
    pos = {v: idx for idx, v in enumerate(order)}
    edges = []
    for a, b in node_pairs(n):
        lo, hi = (a, b) if pos[a] < pos[b] else (b, a)
        before = {v for v in order if pos[v] < pos[hi]} - {lo}
        if not o.independent(a, b, before):
            edges.append((lo, hi, "directed"))
    return MixedGraph.build(n, edges)


def sp_run(p: CISet | Oracle, n: int, full: bool = False) -> frozenset[MixedGraph]:
    """Sparsest-permutation search: build one DAG per node ordering and
    keep those attaining the minimum edge count.

    By default the result is deduplicated to one representative per
    equivalence class; ``full`` returns every distinct minimal DAG.
    """
    if n > 7:
        raise EnumerationCapError(n, "permutation", 7)
    o = as_oracle(p)
    best: int | None = None
    found: set[MixedGraph] = set()
    for order in itertools.permutations(range(1, n + 1)):
        g = permutation_dag(o, order)
        c = g.edge_count()
        if best is None or c < best:
            best = c
            found = {g}
        elif c == best:
            found.add(g)
    if full:
        return frozenset(found)
    reps: dict[MecKey, MixedGraph] = {}
    for g in sorted(found, key=lambda g: g.sort_key()):
        reps.setdefault(mec_key(g), g)
    return frozenset(reps.values())
