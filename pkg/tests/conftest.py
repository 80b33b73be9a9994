import itertools
from collections import deque

import pytest

from causalprops.graphs import DIRECTED, MixedGraph, ancestors


def bayes_ball_reachable(g: MixedGraph, start: int, cond: set[int]) -> set[int]:
    """Reachability-style d-separation oracle for DAGs (independent of the
    path-enumeration implementation under test)."""
    an_cond = set()
    to_visit = set(cond)
    while to_visit:
        v = to_visit.pop()
        if v not in an_cond:
            an_cond.add(v)
            to_visit.update(g.parents(v))
    queue = deque([(start, "up")])
    visited = set()
    reachable = set()
    while queue:
        node, direction = queue.popleft()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if node not in cond:
            reachable.add(node)
        if direction == "up":
            if node not in cond:
                for p in g.parents(node):
                    queue.append((p, "up"))
                for c in g.children(node):
                    queue.append((c, "down"))
        else:
            if node not in cond:
                for c in g.children(node):
                    queue.append((c, "down"))
            if node in an_cond:
                for p in g.parents(node):
                    queue.append((p, "up"))
    return reachable


def d_separated_oracle(g: MixedGraph, i: int, j: int, cond: set[int]) -> bool:
    return j not in bayes_ball_reachable(g, i, cond)


def inducing_path_exists(g: MixedGraph, i: int, j: int) -> bool:
    """True iff some path between i and j has every interior node a
    collider on the path and an ancestor of an endpoint (the classical
    characterization of an inseparable non-adjacent pair)."""
    an_ij = ancestors(g, [i, j])
    stack = [(i, (i,))]
    while stack:
        node, path = stack.pop()
        for nb in g.neighbors(node):
            if nb == j:
                full = path + (j,)
                ok = True
                for m in range(1, len(full) - 1):
                    v = full[m]
                    if not (g.arrowhead_at(full[m - 1], v) and g.arrowhead_at(full[m + 1], v)):
                        ok = False
                        break
                    if v not in an_ij:
                        ok = False
                        break
                if ok:
                    return True
            elif nb not in path:
                stack.append((nb, path + (nb,)))
    return False


def all_subsets(items):
    items = sorted(items)
    for r in range(len(items) + 1):
        yield from (set(s) for s in itertools.combinations(items, r))


@pytest.fixture(scope="session")
def square():
    return MixedGraph.build(
        4, [(1, 3, DIRECTED), (2, 3, DIRECTED), (1, 4, DIRECTED), (2, 4, DIRECTED)]
    )


@pytest.fixture(scope="session")
def square_flipped():
    return MixedGraph.build(
        4, [(3, 1, DIRECTED), (4, 1, DIRECTED), (3, 2, DIRECTED), (4, 2, DIRECTED)]
    )


@pytest.fixture(scope="session")
def chain3():
    return MixedGraph.build(3, [(1, 2, DIRECTED), (2, 3, DIRECTED)])


@pytest.fixture(scope="session")
def collider3():
    return MixedGraph.build(3, [(1, 3, DIRECTED), (2, 3, DIRECTED)])
