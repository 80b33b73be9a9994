"""Concrete property implementations.

The assumption ladder (Markov, pairwise Markov, faithfulness, adjacency
faithfulness), the four minimality notions parameterized by graph class,
the stability condition on v-configurations, and the three orientation-rule
properties used by the PC variants.  Everything is a pure predicate on a
relation set and a graph; counterexample relation sets are taken literally,
with no closure applied.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterator

from .ci import CISet
from .graphs import (
    DAG,
    MAG,
    ANCESTRAL,
    EnumerationCapError,
    MixedGraph,
    Triple,
    _SEPSET_CACHE,
    ancestors,
    class_table,
    is_collider_in,
    is_maximal,
    node_pairs,
    separated,
    separation_set,
    v_configurations,
)

VConfig = tuple[int, int, int]

# class tables are precomputed up to these sizes; beyond them only
# Markov-pruned streams are available
_TABLE_LIMIT = {DAG: 4, MAG: 4, ANCESTRAL: 4}


def _table_ok(n: int, cls: str) -> bool:
    return n <= _TABLE_LIMIT.get(cls, 0)


# --- the assumption ladder ---


def is_markov(p: CISet, g: MixedGraph) -> bool:
    """Every separation of the graph appears in the relation set."""
    if g in _SEPSET_CACHE:
        return _SEPSET_CACHE[g] <= p.triples
    nodes = set(range(1, g.n + 1))
    full: set[Triple] = set()
    for i, j in node_pairs(g.n):
        if g.adjacent(i, j):
            continue
        rest = sorted(nodes - {i, j})
        for r in range(len(rest) + 1):
            for sub in itertools.combinations(rest, r):
                if separated(g, i, j, set(sub)):
                    if (i, j, frozenset(sub)) not in p.triples:
                        return False
                    full.add((i, j, frozenset(sub)))
    _SEPSET_CACHE[g] = frozenset(full)
    return True


def is_faithful(p: CISet, g: MixedGraph) -> bool:
    return separation_set(g) == p.triples


def is_pairwise_markov(p: CISet, g: MixedGraph) -> bool:
    """Non-adjacent pairs are independent given their joint ancestor set."""
    for i, j in node_pairs(g.n):
        if g.adjacent(i, j):
            continue
        an = ancestors(g, [i, j]) - {i, j}
        if not p.holds(i, j, an):
            return False
    return True


def adjacency_faithful(p: CISet, g: MixedGraph) -> bool:
    return p.skeleton_pairs() == g.skeleton_pairs()


# --- Markov-graph search (shared by the minimality notions) ---


def _class_members_on_skeleton(skeleton: frozenset, n: int, cls: str) -> Iterator[MixedGraph]:
    from .graphs import BIDIRECTED, DIRECTED, UNDIRECTED, _has_directed_cycle, _is_ancestral

    pairs = sorted(skeleton)
    states = 2 if cls == DAG else 4
    for combo in itertools.product(range(states), repeat=len(pairs)):
        edges = []
        for (a, b), s in zip(pairs, combo):
            if s == 0:
                edges.append((a, b, DIRECTED))
            elif s == 1:
                edges.append((b, a, DIRECTED))
            elif s == 2:
                edges.append((a, b, UNDIRECTED))
            else:
                edges.append((a, b, BIDIRECTED))
        g = MixedGraph.build(n, edges)
        if cls == DAG:
            if not _has_directed_cycle(g):
                yield g
        else:
            if _is_ancestral(g) and (cls == ANCESTRAL or is_maximal(g)):
                yield g


def markov_graphs(p: CISet, cls: str, n: int) -> Iterator[MixedGraph]:
    """All class members Markov to ``p``, without full-class enumeration.

    A pair with no separating set in ``p`` must be adjacent in every Markov
    DAG or MAG (both classes are maximal), so only skeletons containing
    those forced edges are explored.
    """
    if _table_ok(n, cls):
        for g, j in class_table(n, cls):
            if j <= p.triples:
                yield g
        return
    if cls != DAG:
        raise EnumerationCapError(n, cls, _TABLE_LIMIT.get(cls, 0))
    if n > 5:
        raise EnumerationCapError(n, cls, 5)
    forced = p.skeleton_pairs()
    free = sorted(p.pairs())
    for r in range(len(free) + 1):
        for extra in itertools.combinations(free, r):
            skeleton = frozenset(forced | set(extra))
            for g in _class_members_on_skeleton(skeleton, n, cls):
                if is_markov(p, g):
                    yield g


_MARKOV_JS_CACHE: dict[tuple, frozenset[frozenset]] = {}


def markov_separation_sets(p: CISet, cls: str, n: int) -> frozenset[frozenset]:
    """Distinct separation sets attained by Markov graphs of the class."""
    key = (p.triples, cls, n)
    if key not in _MARKOV_JS_CACHE:
        _MARKOV_JS_CACHE[key] = frozenset(
            frozenset(separation_set(g)) for g in markov_graphs(p, cls, n)
        )
    return _MARKOV_JS_CACHE[key]


def sparsest_markov_edge_count(p: CISet, cls: str, n: int) -> int | None:
    """Least edge count over Markov graphs of the class (None if impossible)."""
    best = None
    for g in markov_graphs(p, cls, n):
        c = g.edge_count()
        if best is None or c < best:
            best = c
    return best


MIN_MARKOV = "min-markov"
SPARSEST = "sparsest"
PEARL = "pearl-min"
CAUSAL = "causal-min"

MINIMALITY_KINDS = (MIN_MARKOV, SPARSEST, PEARL, CAUSAL)


def _proper_class_subgraphs(g: MixedGraph, cls: str) -> Iterator[MixedGraph]:
    # edge deletions; for MAGs a deletion that breaks maximality leaves the
    # class and is skipped
    pairs = sorted(g.skeleton_pairs())
    for r in range(1, len(pairs) + 1):
        for drop in itertools.combinations(pairs, r):
            sub = g.without_pairs(drop)
            if cls == MAG and not is_maximal(sub):
                continue
            yield sub


def minimality(kind: str, p: CISet, g: MixedGraph, cls: str = DAG) -> bool:
    """One of the four minimality predicates, over the given graph class."""
    if kind == MIN_MARKOV:
        return is_markov(p, g) and adjacency_faithful(p, g)
    if kind == SPARSEST:
        if not is_markov(p, g):
            return False
        return g.edge_count() == sparsest_markov_edge_count(p, cls, g.n)
    if kind == PEARL:
        if not is_markov(p, g):
            return False
        mine = separation_set(g)
        return not any(mine < other for other in markov_separation_sets(p, cls, g.n))
    if kind == CAUSAL:
        if not is_markov(p, g):
            return False
        return not any(is_markov(p, sub) for sub in _proper_class_subgraphs(g, cls))
    raise ValueError(f"unknown minimality kind {kind!r}")


# --- local properties on v-configurations ---


def vous_holds(p: CISet, vc: VConfig) -> bool:
    """Adding the middle node to any separating set keeps the pair separated."""
    i, k, j = vc
    others = sorted(set(range(1, p.n + 1)) - {i, j, k})
    for r in range(len(others) + 1):
        for sub in itertools.combinations(others, r):
            if p.holds(i, j, sub) and not p.holds(i, j, set(sub) | {k}):
                return False
    return True


def collider_stable_holds(p: CISet, vc: VConfig) -> bool:
    """Some set avoiding the middle node separates the endpoints."""
    i, k, j = vc
    others = sorted(set(range(1, p.n + 1)) - {i, j, k})
    return any(
        p.holds(i, j, sub)
        for r in range(len(others) + 1)
        for sub in itertools.combinations(others, r)
    )


def vous_collider_stable(p: CISet, g: MixedGraph) -> bool:
    """Both stability bullets over every v-configuration of the graph."""
    for vc in v_configurations(g):
        if is_collider_in(g, vc):
            if not collider_stable_holds(p, vc):
                return False
        elif not vous_holds(p, vc):
            return False
    return True


def _rule_locals(variant: int) -> tuple[Callable, Callable]:
    """Local non-collider / collider predicates for PC orientation rule I.

    Each is the negation of the assignment clause of the rule, quantifying
    over every separating set of the endpoint pair.
    """

    def n1(p: CISet, vc: VConfig) -> bool:
        i, k, j = vc
        return any(k in c for c in p.seps(i, j))

    def c1(p: CISet, vc: VConfig) -> bool:
        i, k, j = vc
        return all(k not in c for c in p.seps(i, j))

    def n2(p: CISet, vc: VConfig) -> bool:
        i, k, j = vc
        return all(k in c for c in p.seps(i, j))

    def c2(p: CISet, vc: VConfig) -> bool:
        i, k, j = vc
        return any(k not in c for c in p.seps(i, j))

    if variant == 1:
        return n1, c1
    if variant == 2:
        return n2, c2
    if variant == 3:
        return n1, c2
    raise ValueError(f"PC orientation rule must be 1, 2 or 3, got {variant}")


def pc_property(variant: int, p: CISet, g: MixedGraph) -> bool:
    """Skeleton agreement plus the rule-I condition on every v-configuration."""
    if p.skeleton_pairs() != g.skeleton_pairs():
        return False
    n_local, c_local = _rule_locals(variant)
    for vc in v_configurations(g):
        if is_collider_in(g, vc):
            if not c_local(p, vc):
                return False
        elif not n_local(p, vc):
            return False
    return True
