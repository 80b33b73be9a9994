"""The property calculus.

A property is a pure predicate on (relation set, graph).  From a property
and a relation set, the corresponding brute-force algorithm materializes
the full satisfying set over an exhaustively enumerated graph class;
uniqueness asks whether that set sits inside one Markov equivalence class.
Together these give the exact correctness condition of the algorithm the
property corresponds to.  Local properties on v-configurations build
skeleton-level properties and orientation rules.

All evaluation is stateless; memo caches only ever store answers that all
workers would agree on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from . import catalog
from .catalog import VConfig
from .ci import CISet
from .graphs import (
    DAG,
    DIRECTED,
    MecKey,
    MixedGraph,
    class_table,
    enumerate_graphs,
    colliders,
    is_collider_in,
    mec_key,
    node_pairs,
    v_configurations,
)

COLLIDER = "collider"
NON_COLLIDER = "non-collider"
UNASSIGNED = "unassigned"


class WellDefinednessError(Exception):
    """An orientation rule would assign some v-configuration both ways."""

    def __init__(self, vconfig: VConfig):
        self.vconfig = vconfig
        i, k, j = vconfig
        super().__init__(
            f"orientation rule is not well-defined: v-configuration {i}~{k}~{j} "
            "fails both local properties"
        )


@dataclass(frozen=True)
class LocalPropertyPair:
    """Local predicates for non-colliders and colliders of a skeleton."""

    name: str
    non_collider: Callable[[CISet, VConfig], bool]
    collider: Callable[[CISet, VConfig], bool]


def pc_pair(variant: int) -> LocalPropertyPair:
    n_local, c_local = catalog._rule_locals(variant)
    return LocalPropertyPair(f"pc-rule-{variant}", n_local, c_local)


def vous_pair() -> LocalPropertyPair:
    return LocalPropertyPair("vous", catalog.vous_holds, catalog.collider_stable_holds)


ALWAYS = LocalPropertyPair("always", lambda p, vc: True, lambda p, vc: True)


@dataclass(frozen=True)
class BackgroundKnowledge:
    """Graph-side constraints, independent of the distribution.

    ``required`` and ``forbidden`` hold (i, j, mark) edge specs; a directed
    spec (i, j, "directed") means the edge i -> j.  ``no_colliders`` bans
    collider v-configurations outright.
    """

    required: frozenset = frozenset()
    forbidden: frozenset = frozenset()
    no_colliders: bool = False

    def satisfied(self, g: MixedGraph) -> bool:
        present = set(g.edges())
        for i, j, mark in self.required:
            spec = (i, j, mark) if mark == DIRECTED else (min(i, j), max(i, j), mark)
            if spec not in present:
                return False
        for i, j, mark in self.forbidden:
            spec = (i, j, mark) if mark == DIRECTED else (min(i, j), max(i, j), mark)
            if spec in present:
                return False
        if self.no_colliders and colliders(g):
            return False
        return True


EMPTY_KNOWLEDGE = BackgroundKnowledge()


@dataclass(frozen=True)
class Property:
    """Identifier plus parameters for a predicate on (relation set, graph)."""

    id: str
    cls: str = DAG
    params: tuple = ()

    def __repr__(self) -> str:
        extra = f", params={self.params!r}" if self.params else ""
        return f"Property({self.id!r}, cls={self.cls!r}{extra})"


NAMED_PROPERTIES = (
    "markov",
    "pairwise-markov",
    "faithful",
    "adj-faithful",
    "min-markov",
    "sparsest",
    "pearl-min",
    "causal-min",
    "v1",
    "v2",
    "v3",
    "vous",
)

# properties whose satisfying graphs are always Markov to the relation set;
# their satisfying sets can be streamed from the pruned Markov enumeration
_MARKOV_IMPLYING = {"markov", "faithful", "min-markov", "sparsest", "pearl-min", "causal-min"}


def make_property(name: str, cls: str = DAG) -> Property:
    if name not in NAMED_PROPERTIES:
        raise ValueError(f"unknown property {name!r} (choose from {', '.join(NAMED_PROPERTIES)})")
    return Property(name, cls)


def vnc_property(pair: LocalPropertyPair, cls: str = DAG) -> Property:
    """Skeleton agreement plus the local pair on every v-configuration."""
    return Property("vnc", cls, (pair,))


def conjoin(a: Property, other: "BackgroundKnowledge | Property") -> Property:
    """Conjunction with background knowledge or with another property."""
    return Property("conjoin", a.cls, (a, other))


def degenerate_mec_property(g: MixedGraph, cls: str = DAG) -> Property:
    """Holds exactly on the equivalence class of a fixed graph, for any input."""
    return Property("mec-of", cls, (mec_key(g),))


def complete_skeleton_property(cls: str = DAG) -> Property:
    return Property("complete-skeleton", cls)


def _evaluate_vnc(pair: LocalPropertyPair, p: CISet, g: MixedGraph) -> bool:
    if p.skeleton_pairs() != g.skeleton_pairs():
        return False
    for vc in v_configurations(g):
        if is_collider_in(g, vc):
            if not pair.collider(p, vc):
                return False
        elif not pair.non_collider(p, vc):
            return False
    return True


def evaluate(a: Property, p: CISet, g: MixedGraph) -> bool:
    """Truth of the property for this relation set and graph."""
    if p.n != g.n:
        raise ValueError("relation set and graph have different node counts")
    if a.id == "markov":
        return catalog.is_markov(p, g)
    if a.id == "pairwise-markov":
        return catalog.is_pairwise_markov(p, g)
    if a.id == "faithful":
        return catalog.is_faithful(p, g)
    if a.id == "adj-faithful":
        return catalog.adjacency_faithful(p, g)
    if a.id in catalog.MINIMALITY_KINDS:
        return catalog.minimality(a.id, p, g, a.cls)
    if a.id in ("v1", "v2", "v3"):
        return catalog.pc_property(int(a.id[1]), p, g)
    if a.id == "vous":
        return _evaluate_vnc(vous_pair(), p, g)
    if a.id == "vnc":
        return _evaluate_vnc(a.params[0], p, g)
    if a.id == "conjoin":
        base, other = a.params
        if isinstance(other, BackgroundKnowledge):
            return evaluate(base, p, g) and other.satisfied(g)
        return evaluate(base, p, g) and evaluate(other, p, g)
    if a.id == "mec-of":
        return mec_key(g) == a.params[0]
    if a.id == "complete-skeleton":
        return len(g.skeleton_pairs()) == len(node_pairs(g.n))
    raise ValueError(f"unknown property id {a.id!r}")


def _markov_root(a: Property) -> bool:
    if a.id == "conjoin":
        base, other = a.params
        if isinstance(other, Property):
            return _markov_root(base) or _markov_root(other)
        return _markov_root(base)
    return a.id in _MARKOV_IMPLYING


def _candidates(a: Property, p: CISet, n: int) -> Iterator[MixedGraph]:
    if catalog._table_ok(n, a.cls):
        for g, _ in class_table(n, a.cls):
            yield g
    elif _markov_root(a):
        yield from catalog.markov_graphs(p, a.cls, n)
    else:
        yield from enumerate_graphs(n, a.cls)


def satisfying_graphs(a: Property, p: CISet, n: int) -> Iterator[MixedGraph]:
    for g in _candidates(a, p, n):
        if evaluate(a, p, g):
            yield g


def corresponding_output(a: Property, p: CISet, n: int) -> frozenset[MixedGraph]:
    """The full satisfying set: output of the brute-force corresponding
    algorithm for this property."""
    return frozenset(satisfying_graphs(a, p, n))


def uniqueness(a: Property, p: CISet, n: int) -> bool:
    """True iff all satisfying graphs share one equivalence class.

    An empty satisfying set counts as (vacuously) unique; correctness
    checks surface emptiness separately.
    """
    first: MecKey | None = None
    for g in satisfying_graphs(a, p, n):
        key = mec_key(g)
        if first is None:
            first = key
        elif key != first:
            return False
    return True


def uniqueness_detail(a: Property, p: CISet, n: int) -> dict:
    keys = {mec_key(g) for g in satisfying_graphs(a, p, n)}
    return {
        "unique": len(keys) <= 1,
        "satisfiable": bool(keys),
        "equivalence_classes": len(keys),
    }


def is_correct(a: Property, p: CISet, g0: MixedGraph) -> bool:
    """Every member of the corresponding output is equivalent to ``g0``
    (and the output is nonempty)."""
    target = mec_key(g0)
    seen_any = False
    for g in satisfying_graphs(a, p, g0.n):
        seen_any = True
        if mec_key(g) != target:
            return False
    return seen_any


def _constant_on_mecs(a: Property, p: CISet, n: int) -> bool:
    by_key: dict[MecKey, bool] = {}
    for g, _ in class_table(n, a.cls):
        val = evaluate(a, p, g)
        key = mec_key(g)
        if key in by_key:
            if by_key[key] != val:
                return False
        else:
            by_key[key] = val
    return True


def is_class_property(a: Property, corpus: Iterable[CISet], n: int) -> bool:
    """Desk-scale verification that evaluation is constant on each
    equivalence class, over the given relation sets.  Evidence, not proof."""
    return all(_constant_on_mecs(a, p, n) for p in corpus)


def theorem1_check(a: Property, p: CISet, g0: MixedGraph) -> dict:
    """Condition (property plus uniqueness) versus actual correctness.

    The forward implication is universal; when the property is constant on
    equivalence classes for this relation set, condition and correctness
    coincide.  A condition that held without correctness would falsify the
    framework, so it raises.
    """
    condition = evaluate(a, p, g0) and uniqueness(a, p, g0.n)
    correct = is_correct(a, p, g0)
    class_prop = _constant_on_mecs(a, p, g0.n)
    if condition and not correct:
        raise RuntimeError("condition held but the corresponding algorithm was incorrect")
    return {"condition": condition, "correct": correct, "class_property": class_prop}


def support_member(a: Property, p: CISet, g: MixedGraph) -> bool:
    """(p, g) lies in the support: the property holds and is unique."""
    return evaluate(a, p, g) and uniqueness(a, p, g.n)


def support_subset(
    a: Property,
    b: Property,
    corpus: Iterable[CISet],
    n: int,
) -> tuple[bool, tuple[CISet, MixedGraph] | None]:
    """Whether supp(a) is contained in supp(b) over the corpus.

    Returns (True, None) or (False, first witnessing pair).
    """
    for p in corpus:
        if p.n != n:
            continue
        if not uniqueness(a, p, n):
            continue
        unique_b = None
        for g, _ in class_table(n, a.cls):
            if not evaluate(a, p, g):
                continue
            if unique_b is None:
                unique_b = uniqueness(b, p, n)
            if not (evaluate(b, p, g) and unique_b):
                return False, (p, g)
    return True, None


# --- orientation rules ---


@dataclass(frozen=True)
class Assignment:
    """Collider / non-collider / unassigned statuses for the
    v-configurations of a skeleton."""

    n: int
    skeleton: frozenset[tuple[int, int]]
    statuses: tuple[tuple[VConfig, str], ...]

    def status(self, vc: VConfig) -> str:
        for v, s in self.statuses:
            if v == vc:
                return s
        raise KeyError(f"{vc} is not a v-configuration of this skeleton")

    def as_dict(self) -> dict[VConfig, str]:
        return dict(self.statuses)

    def to_json(self) -> list[dict]:
        return [
            {"i": i, "k": k, "j": j, "status": s}
            for (i, k, j), s in self.statuses
        ]


def _skeleton_vconfigs(skeleton: frozenset, n: int) -> list[VConfig]:
    g = MixedGraph.build(n, [(i, j, "undirected") for i, j in sorted(skeleton)])
    return v_configurations(g)


def orientation_assign(pair: LocalPropertyPair, p: CISet) -> Assignment:
    """Apply the orientation rule induced by a local pair to sk(p).

    A v-configuration becomes a collider when the non-collider predicate
    fails, a non-collider when the collider predicate fails, and stays
    unassigned when both hold.  Well-definedness (at least one predicate
    holding everywhere) is checked first.
    """
    skeleton = p.skeleton_pairs()
    statuses = []
    for vc in _skeleton_vconfigs(skeleton, p.n):
        nv = pair.non_collider(p, vc)
        cv = pair.collider(p, vc)
        if not nv and not cv:
            raise WellDefinednessError(vc)
        if not nv:
            statuses.append((vc, COLLIDER))
        elif not cv:
            statuses.append((vc, NON_COLLIDER))
        else:
            statuses.append((vc, UNASSIGNED))
    return Assignment(p.n, skeleton, tuple(statuses))


def _acyclic_orientations(skeleton: frozenset, n: int) -> Iterator[MixedGraph]:
    from .graphs import _has_directed_cycle

    pairs = sorted(skeleton)
    for combo in itertools.product((0, 1), repeat=len(pairs)):
        edges = [
            (a, b, DIRECTED) if s == 0 else (b, a, DIRECTED)
            for (a, b), s in zip(pairs, combo)
        ]
        g = MixedGraph.build(n, edges)
        if not _has_directed_cycle(g):
            yield g


def assignment_consistent_graphs(asg: Assignment, p: CISet, n: int) -> frozenset[MixedGraph]:
    """All DAGs over sk(p) whose v-configurations respect every assigned
    status (unassigned ones are free)."""
    if asg.skeleton != p.skeleton_pairs():
        raise ValueError("assignment skeleton does not match the relation set")
    out = []
    fixed = [(vc, s) for vc, s in asg.statuses if s != UNASSIGNED]
    for g in _acyclic_orientations(asg.skeleton, n):
        ok = True
        for vc, s in fixed:
            if (s == COLLIDER) != is_collider_in(g, vc):
                ok = False
                break
        if ok:
            out.append(g)
    return frozenset(out)
