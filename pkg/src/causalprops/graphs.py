"""Mixed graphs over labelled nodes, graph-class validation, graphical
separation, and Markov-equivalence keys.

Nodes are the integers ``1..n``.  A pair of nodes carries at most one edge,
which is directed, undirected, or bidirected.  Everything here is an
immutable value: graphs hash, compare, and can be shared freely between
workers.  Separation is implemented by explicit path enumeration, which is
the right trade-off at the scales this library targets (n <= 5); a second,
structurally different reachability implementation lives in the test suite
as an oracle.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator

DIRECTED = "directed"
UNDIRECTED = "undirected"
BIDIRECTED = "bidirected"

DAG = "dag"
ANCESTRAL = "ancestral"
MAG = "mag"
ANTERIAL = "anterial"

GRAPH_CLASSES = (DAG, ANCESTRAL, MAG, ANTERIAL)

# Hard caps for exhaustive enumeration; override per call if you know better.
DEFAULT_ENUMERATION_CAPS = {DAG: 5, ANCESTRAL: 4, MAG: 4}


class EnumerationCapError(Exception):
    """A brute-force enumeration would exceed its node cap."""

    def __init__(self, n: int, cls: str, cap: int):
        self.n = n
        self.cls = cls
        self.cap = cap
        super().__init__(f"enumeration of {cls} graphs capped at n={cap}, got n={n}")


def node_pairs(n: int) -> list[tuple[int, int]]:
    """All unordered node pairs (i, j) with i < j."""
    return list(itertools.combinations(range(1, n + 1), 2))


@dataclass(frozen=True)
class MixedGraph:
    """Graph with directed, undirected, and bidirected edges.

    ``directed`` holds ordered (tail, head) pairs; ``undirected`` and
    ``bidirected`` hold unordered pairs stored as (min, max).
    """

    n: int
    directed: frozenset[tuple[int, int]]
    undirected: frozenset[tuple[int, int]]
    bidirected: frozenset[tuple[int, int]]

    @classmethod
    def build(cls, n: int, edges: Iterable[tuple[int, int, str]] = ()) -> "MixedGraph":
        """Construct from (i, j, mark) triples, validating well-formedness."""
        directed: set[tuple[int, int]] = set()
        undirected: set[tuple[int, int]] = set()
        bidirected: set[tuple[int, int]] = set()
        seen: set[tuple[int, int]] = set()
        for i, j, mark in edges:
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"node out of range in edge ({i}, {j})")
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"parallel edge between {key[0]} and {key[1]}")
            seen.add(key)
            if mark == DIRECTED:
                directed.add((i, j))
            elif mark == UNDIRECTED:
                undirected.add(key)
            elif mark == BIDIRECTED:
                bidirected.add(key)
            else:
                raise ValueError(f"unknown edge mark {mark!r}")
        return cls(n, frozenset(directed), frozenset(undirected), frozenset(bidirected))

    # --- structure queries ---

    def skeleton_pairs(self) -> frozenset[tuple[int, int]]:
        pairs = {(min(i, j), max(i, j)) for i, j in self.directed}
        return frozenset(pairs | self.undirected | self.bidirected)

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.skeleton_pairs()

    def neighbors(self, i: int) -> set[int]:
        out = set()
        for a, b in self.skeleton_pairs():
            if a == i:
                out.add(b)
            elif b == i:
                out.add(a)
        return out

    def parents(self, i: int) -> set[int]:
        return {a for a, b in self.directed if b == i}

    def children(self, i: int) -> set[int]:
        return {b for a, b in self.directed if a == i}

    def arrowhead_at(self, other: int, node: int) -> bool:
        """True if the edge between ``other`` and ``node`` points into ``node``."""
        key = (min(other, node), max(other, node))
        return (other, node) in self.directed or key in self.bidirected

    def edge_count(self) -> int:
        return len(self.directed) + len(self.undirected) + len(self.bidirected)

    def edges(self) -> list[tuple[int, int, str]]:
        out = [(i, j, DIRECTED) for i, j in sorted(self.directed)]
        out += [(i, j, UNDIRECTED) for i, j in sorted(self.undirected)]
        out += [(i, j, BIDIRECTED) for i, j in sorted(self.bidirected)]
        return out

    def without_pairs(self, pairs: Iterable[tuple[int, int]]) -> "MixedGraph":
        """Copy with all edges between the given unordered pairs removed."""
        drop = {(min(i, j), max(i, j)) for i, j in pairs}
        return MixedGraph(
            self.n,
            frozenset((a, b) for a, b in self.directed if (min(a, b), max(a, b)) not in drop),
            frozenset(e for e in self.undirected if e not in drop),
            frozenset(e for e in self.bidirected if e not in drop),
        )

    def skeleton_graph(self) -> "MixedGraph":
        return MixedGraph.build(self.n, [(i, j, UNDIRECTED) for i, j in sorted(self.skeleton_pairs())])

    def sort_key(self) -> tuple:
        return (self.n, sorted(self.directed), sorted(self.undirected), sorted(self.bidirected))

    # --- JSON wire format ---

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": [{"i": i, "j": j, "mark": mark} for i, j, mark in self.edges()],
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> "MixedGraph":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.build(obj["n"], [(e["i"], e["j"], e["mark"]) for e in obj["edges"]])

    def __repr__(self) -> str:
        def fmt(i, j, mark):
            sym = {DIRECTED: "->", UNDIRECTED: "--", BIDIRECTED: "<->"}[mark]
            return f"{i}{sym}{j}"

        body = ", ".join(fmt(*e) for e in self.edges()) or "no edges"
        return f"MixedGraph(n={self.n}: {body})"


# --- v-configurations and colliders ---


def v_configurations(g: MixedGraph) -> list[tuple[int, int, int]]:
    """Triples (i, k, j), i < j, with i and j adjacent to k but not to each other."""
    out = []
    for k in range(1, g.n + 1):
        nbrs = sorted(g.neighbors(k))
        for i, j in itertools.combinations(nbrs, 2):
            if not g.adjacent(i, j):
                out.append((i, k, j))
    return out


def is_collider_in(g: MixedGraph, vconfig: tuple[int, int, int]) -> bool:
    i, k, j = vconfig
    return g.arrowhead_at(i, k) and g.arrowhead_at(j, k)


def colliders(g: MixedGraph) -> frozenset[tuple[int, int, int]]:
    return frozenset(vc for vc in v_configurations(g) if is_collider_in(g, vc))


# --- class validation ---


def _has_directed_cycle(g: MixedGraph) -> bool:
    indeg = {v: 0 for v in range(1, g.n + 1)}
    for _, b in g.directed:
        indeg[b] += 1
    queue = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for c in g.children(v):
            indeg[c] -= 1
            if indeg[c] == 0:
                queue.append(c)
    return seen < g.n


def ancestors(g: MixedGraph, targets: Iterable[int]) -> frozenset[int]:
    """an(C): nodes with a directed path into C, including C itself."""
    result = set(targets)
    frontier = list(result)
    while frontier:
        v = frontier.pop()
        for p in g.parents(v):
            if p not in result:
                result.add(p)
                frontier.append(p)
    return frozenset(result)


def _semi_directed_reach(g: MixedGraph, start: int) -> set[int]:
    # Steps along undirected edges (both ways) and directed edges (forward).
    reach = set()
    frontier = [start]
    while frontier:
        v = frontier.pop()
        nxt = set(g.children(v))
        for a, b in g.undirected:
            if a == v:
                nxt.add(b)
            elif b == v:
                nxt.add(a)
        for w in nxt:
            if w not in reach:
                reach.add(w)
                frontier.append(w)
    return reach


def _is_dag(g: MixedGraph) -> bool:
    return not g.undirected and not g.bidirected and not _has_directed_cycle(g)


def _is_ancestral(g: MixedGraph) -> bool:
    # 1. no arrowhead pointing into a node that carries an undirected edge
    und_nodes = {v for e in g.undirected for v in e}
    for v in und_nodes:
        if g.parents(v):
            return False
        if any(v in e for e in g.bidirected):
            return False
    # 2. no almost-directed cycle: i <-> j plus a directed path between them
    for a, b in g.bidirected:
        if a in ancestors(g, [b]) or b in ancestors(g, [a]):
            return False
    # 3. no directed cycle
    return not _has_directed_cycle(g)


def _is_anterial(g: MixedGraph) -> bool:
    # 1. endpoints of a bidirected edge must not be joined by a path of
    #    undirected / aligned directed edges
    for a, b in g.bidirected:
        if b in _semi_directed_reach(g, a) or a in _semi_directed_reach(g, b):
            return False
    # 2. no cycle of undirected / aligned directed edges that uses at least
    #    one directed edge (pure undirected cycles are allowed, so that
    #    ancestral graphs remain a subclass)
    for u, v in g.directed:
        if u in _semi_directed_reach(g, v):
            return False
    return True


def is_maximal(g: MixedGraph) -> bool:
    """True iff every non-adjacent pair has some separating set."""
    nodes = set(range(1, g.n + 1))
    for i, j in node_pairs(g.n):
        if g.adjacent(i, j):
            continue
        rest = sorted(nodes - {i, j})
        if not any(
            separated(g, i, j, set(sub))
            for r in range(len(rest) + 1)
            for sub in itertools.combinations(rest, r)
        ):
            return False
    return True


def validate_class(g: MixedGraph, cls: str) -> bool:
    """Whether ``g`` satisfies the omission rules of the given graph class."""
    if cls == DAG:
        return _is_dag(g)
    if cls == ANCESTRAL:
        return _is_ancestral(g)
    if cls == MAG:
        return _is_ancestral(g) and is_maximal(g)
    if cls == ANTERIAL:
        return _is_anterial(g)
    raise ValueError(f"unknown graph class {cls!r}")


# --- separation ---


def _simple_paths(g: MixedGraph, i: int, j: int) -> Iterator[tuple[int, ...]]:
    stack: list[tuple[int, tuple[int, ...]]] = [(i, (i,))]
    while stack:
        node, path = stack.pop()
        for nb in sorted(g.neighbors(node)):
            if nb == j:
                yield path + (j,)
            elif nb not in path and nb != i:
                stack.append((nb, path + (nb,)))


def _path_active(g: MixedGraph, path: tuple[int, ...], cond: frozenset[int], an_cond: frozenset[int]) -> bool:
    for m in range(1, len(path) - 1):
        v = path[m]
        if g.arrowhead_at(path[m - 1], v) and g.arrowhead_at(path[m + 1], v):
            if v not in an_cond:  # collider opens only when ancestral to C
                return False
        elif v in cond:
            return False
    return True


def separated(g: MixedGraph, i: int, j: int, cond: Iterable[int]) -> bool:
    """m-separation of i and j given ``cond`` (d-separation on DAGs).

    Rejects graphs that are anterial but not ancestral; separation for that
    generality is not provided here.
    """
    cond = frozenset(cond)
    if i == j:
        raise ValueError("separation requires distinct endpoints")
    if i in cond or j in cond:
        raise ValueError("conditioning set must exclude the endpoints")
    if not _is_ancestral(g):
        raise ValueError("separation is only defined here for DAGs and ancestral graphs")
    if g.adjacent(i, j):
        return False
    an_cond = ancestors(g, cond) if cond else frozenset()
    return not any(_path_active(g, p, cond, an_cond) for p in _simple_paths(g, i, j))


Triple = tuple[int, int, frozenset[int]]

_SEPSET_CACHE: dict[MixedGraph, frozenset] = {}


def separation_set(g: MixedGraph) -> frozenset[Triple]:
    """All elementary separations (i, j, C), i < j, C over all subsets."""
    cached = _SEPSET_CACHE.get(g)
    if cached is not None:
        return cached
    nodes = set(range(1, g.n + 1))
    triples: set[Triple] = set()
    for i, j in node_pairs(g.n):
        if g.adjacent(i, j):
            continue
        rest = sorted(nodes - {i, j})
        for r in range(len(rest) + 1):
            for sub in itertools.combinations(rest, r):
                if separated(g, i, j, set(sub)):
                    triples.add((i, j, frozenset(sub)))
    result = frozenset(triples)
    _SEPSET_CACHE[g] = result
    return result


# --- collider paths and Markov-equivalence keys ---


def _is_collider_path(g: MixedGraph, path: tuple[int, ...]) -> bool:
    if g.adjacent(path[0], path[-1]):
        return False
    return all(
        g.arrowhead_at(path[m - 1], path[m]) and g.arrowhead_at(path[m + 1], path[m])
        for m in range(1, len(path) - 1)
    )


def minimal_collider_paths(g: MixedGraph) -> frozenset[tuple[int, ...]]:
    """Collider paths with no collider subpath between the same endpoints.

    Paths are stored with the lexicographically smaller endpoint first.
    """
    found: set[tuple[int, ...]] = set()
    for i, j in node_pairs(g.n):
        if g.adjacent(i, j):
            continue
        for path in _simple_paths(g, i, j):
            if len(path) < 3 or not _is_collider_path(g, path):
                continue
            interior = path[1:-1]
            minimal = True
            for r in range(len(interior)):
                for sub in itertools.combinations(interior, r):
                    cand = (path[0],) + sub + (path[-1],)
                    if all(g.adjacent(cand[m], cand[m + 1]) for m in range(len(cand) - 1)):
                        if _is_collider_path(g, cand):
                            minimal = False
                            break
                if not minimal:
                    break
            if minimal:
                canon = path if path[0] < path[-1] else tuple(reversed(path))
                found.add(canon)
    return frozenset(found)


@dataclass(frozen=True)
class MecKey:
    """Canonical Markov-equivalence descriptor: skeleton plus minimal
    collider paths.

    In a graph with only directed edges every minimal collider path has
    length two, so the path set reduces to the collider triples and the key
    specializes to the skeleton-and-colliders criterion for DAGs.  One
    representation therefore serves both classes, and keys stay comparable
    when a pure-directed graph is viewed as a member of the MAG class.
    """

    skeleton: frozenset[tuple[int, int]]
    collider_paths: frozenset[tuple[int, ...]]


def mec_key(g: MixedGraph) -> MecKey:
    if not g.undirected and not g.bidirected:
        # fast path: colliders are exactly the minimal collider paths here
        return MecKey(g.skeleton_pairs(), frozenset(colliders(g)))
    return MecKey(g.skeleton_pairs(), minimal_collider_paths(g))


# --- exhaustive enumeration ---

_DAG_PAIR_STATES = 3  # none, lo->hi, hi->lo
_MIXED_PAIR_STATES = 5  # none, lo->hi, hi->lo, undirected, bidirected


def _graph_from_states(n: int, pairs: list[tuple[int, int]], states: tuple[int, ...]) -> MixedGraph:
    edges = []
    for (a, b), s in zip(pairs, states):
        if s == 0:
            continue
        elif s == 1:
            edges.append((a, b, DIRECTED))
        elif s == 2:
            edges.append((b, a, DIRECTED))
        elif s == 3:
            edges.append((a, b, UNDIRECTED))
        else:
            edges.append((a, b, BIDIRECTED))
    return MixedGraph.build(n, edges)


def enumerate_graphs(n: int, cls: str, cap: int | None = None) -> Iterator[MixedGraph]:
    """Every graph of the class on nodes 1..n, exactly once, in a fixed order."""
    if cls == ANTERIAL:
        raise ValueError("anterial enumeration is not supported")
    if cls not in (DAG, ANCESTRAL, MAG):
        raise ValueError(f"unknown graph class {cls!r}")
    limit = cap if cap is not None else DEFAULT_ENUMERATION_CAPS[cls]
    if n > limit:
        raise EnumerationCapError(n, cls, limit)
    pairs = node_pairs(n)
    n_states = _DAG_PAIR_STATES if cls == DAG else _MIXED_PAIR_STATES
    for states in itertools.product(range(n_states), repeat=len(pairs)):
        g = _graph_from_states(n, pairs, states)
        if validate_class(g, cls):
            yield g


_CLASS_TABLE_CACHE: dict[tuple[int, str], list] = {}


def class_table(n: int, cls: str, cap: int | None = None) -> list[tuple[MixedGraph, frozenset[Triple]]]:
    """Cached list of (graph, separation set) for a whole class."""
    key = (n, cls)
    if key not in _CLASS_TABLE_CACHE:
        _CLASS_TABLE_CACHE[key] = [(g, separation_set(g)) for g in enumerate_graphs(n, cls, cap)]
    return _CLASS_TABLE_CACHE[key]


def mec_representatives(n: int, cls: str) -> dict[MecKey, tuple[MixedGraph, frozenset[Triple]]]:
    """One representative (first in enumeration order) per equivalence class."""
    reps: dict[MecKey, tuple[MixedGraph, frozenset[Triple]]] = {}
    for g, j in class_table(n, cls):
        key = mec_key(g)
        if key not in reps:
            reps[key] = (g, j)
    return reps
