"""The standard relation-set corpus.

Support comparisons and class-property verification quantify over
distributions; at desk scale that means a finite, versioned family of
relation sets: every separation set attainable in the class, a
deterministic selection of pairwise unions of those (unions are where
uniqueness breaks), and the named counterexample fixtures.  The corpus is
shipped as data and regenerated bit-for-bit by `generate`.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from importlib import resources

from .ci import CISet
from .graphs import DAG, mec_representatives

CORPUS_VERSION = "std-v1"

# every 137th union at n=4 keeps the corpus near three hundred members;
# smaller sizes take every union
_UNION_STRIDE = {3: 1, 4: 137}


def _canonical(p: CISet) -> tuple:
    return tuple(sorted((i, j, tuple(sorted(c))) for i, j, c in p.triples))


def _fixture_sets(n: int) -> list[CISet]:
    from . import fixtures

    return [f.relation for f in fixtures.all_fixtures().values() if f.n == n]


def generate(n: int, cls: str = DAG) -> list[CISet]:
    """Deterministically rebuild the corpus for one size and class."""
    reps = mec_representatives(n, cls)
    js = sorted({frozenset(j) for _, j in reps.values()}, key=lambda j: _canonical(CISet(n, frozenset(j))))
    members = [CISet(n, frozenset(j)) for j in js]
    stride = _UNION_STRIDE.get(n, 1)
    counter = 0
    for a, b in itertools.combinations(range(len(js)), 2):
        if counter % stride == 0:
            members.append(CISet(n, frozenset(js[a]) | frozenset(js[b])))
        counter += 1
    if cls == DAG:
        members.extend(_fixture_sets(n))
    seen = set()
    out = []
    for p in members:
        key = _canonical(p)
        if key not in seen:
            seen.add(key)
            out.append(p)
    out.sort(key=_canonical)
    return out


def corpus_hash(members: list[CISet]) -> str:
    payload = json.dumps([p.to_json() for p in members], sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()


def _data_name(n: int, cls: str) -> str:
    return f"{CORPUS_VERSION}-{cls}-n{n}.json"


def write_data(n: int, cls: str, directory) -> str:
    members = generate(n, cls)
    obj = {
        "version": CORPUS_VERSION,
        "class": cls,
        "n": n,
        "sha256": corpus_hash(members),
        "members": [p.to_json() for p in members],
    }
    path = directory / _data_name(n, cls)
    path.write_text(json.dumps(obj, sort_keys=True, indent=None))
    return obj["sha256"]


def standard_corpus(n: int, cls: str = DAG) -> list[CISet]:
    """The shipped corpus for one size and class."""
    ref = resources.files("causalprops.data.corpus") / _data_name(n, cls)
    obj = json.loads(ref.read_text())
    return [CISet.from_json(m) for m in obj["members"]]


def shipped_hash(n: int, cls: str = DAG) -> str:
    ref = resources.files("causalprops.data.corpus") / _data_name(n, cls)
    return json.loads(ref.read_text())["sha256"]
