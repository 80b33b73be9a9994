"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one summary line
per criterion.
"""

import time

import pytest

from causalprops import catalog
from causalprops import fixtures as fx
from causalprops.algorithms import pc_run, sp_run
from causalprops.ci import CISet, all_triples, closure, is_singleton_transitive
from causalprops.corpus import standard_corpus
from causalprops.framework import (
    WellDefinednessError,
    assignment_consistent_graphs,
    conjoin,
    corresponding_output,
    evaluate,
    make_property,
    orientation_assign,
    pc_pair,
    support_subset,
    uniqueness,
    vnc_property,
    vous_pair,
)
from causalprops.graphs import (
    DAG,
    MAG,
    class_table,
    mec_key,
    mec_representatives,
    v_configurations,
)
from causalprops.simulation import ExperimentConfig, table1_experiment


def report(line: str) -> None:
    print(f"\n[acceptance] {line}")


def test_criterion_01_recovery_rate_band():
    """200 batches x 10000 samples at alpha 0.01: variants 1 and 3 recover
    the true class in at least 85% of batches, in under two minutes."""
    start = time.perf_counter()
    cfg = ExperimentConfig(batches=200, samples=10000, alpha=0.01, seed=42, variants=(1, 3))
    rates = table1_experiment(cfg)
    elapsed = time.perf_counter() - start
    assert rates[1] >= 0.85
    assert rates[3] >= 0.85
    assert elapsed < 120
    report(
        f"criterion 1 PASS: rates variant1={rates[1]:.3f} variant3={rates[3]:.3f} "
        f"(band >= 0.85) in {elapsed:.1f}s"
    )


def test_criterion_02_exact_oracle_correctness():
    """The analytic population oracle drives variants 1 and 3 to exactly the
    true equivalence class (the harness model realizes the analyzed
    three-statement relation; unit noise everywhere would not)."""
    start = time.perf_counter()
    rates = table1_experiment(ExperimentConfig(variants=(1, 3)), exact_oracle=True)
    elapsed = time.perf_counter() - start
    assert rates == {1: 1.0, 3: 1.0}
    assert elapsed < 1.0
    report(f"criterion 2 PASS: exact-oracle rates {rates} in {elapsed * 1000:.0f}ms")


def test_criterion_03_example_matrix():
    """Every recorded fixture assertion holds bit-exactly."""
    rows = fx.assertion_rows()
    failures = []
    noted = 0
    for row in rows:
        got = fx.run_check(row)
        if got != row.expected:
            failures.append((row, got))
        if row.note:
            noted += 1
    assert not failures, failures
    report(
        f"criterion 3 PASS: {len(rows)} fixture assertions bit-exact "
        f"({noted} rows carry source-deviation notes; see ledger)"
    )


@pytest.mark.xfail(
    strict=True,
    reason="the source example asserts uniqueness of the conservative-rule "
    "property on this relation; exhaustive enumeration exhibits a second "
    "satisfying equivalence class (collider only at the 1~4~2 "
    "v-configuration), so the stored expectation is the corrected one",
)
def test_criterion_03_source_stated_uniqueness_for_v123ex():
    p = fx.fixture("v123ex").relation
    assert uniqueness(make_property("v3"), p, 4)


def test_criterion_04_equivalence_keys_match_separation_sets():
    """Key equality coincides with separation-set equality: all DAGs at n=4
    and all MAGs at n=3."""
    checked = {}
    for cls, n in ((DAG, 4), (MAG, 3)):
        by_key = {}
        for g, j in class_table(n, cls):
            by_key.setdefault(mec_key(g), set()).add(j)
        assert all(len(js) == 1 for js in by_key.values())
        js = [next(iter(v)) for v in by_key.values()]
        assert len(js) == len(set(js))
        checked[(cls, n)] = len(by_key)
    report(
        "criterion 4 PASS: key <-> separation-set equivalence over "
        f"{checked[(DAG, 4)]} DAG classes (n=4) and {checked[(MAG, 3)]} MAG classes (n=3)"
    )


def test_criterion_05_pc_exactness():
    """Variant-I correctness coincides with the rule-I property (plus
    uniqueness for the conservative rule), over skeleton-matched pairs."""
    pairs_checked = 0
    for n in (3, 4):
        for p in standard_corpus(n, DAG):
            outputs = {variant: pc_run(variant, p, n).meckeys() for variant in (1, 2, 3)}
            u3 = uniqueness(make_property("v3"), p, n)
            for key, (g0, _) in mec_representatives(n, DAG).items():
                if g0.skeleton_pairs() != p.skeleton_pairs():
                    continue
                pairs_checked += 1
                for variant in (1, 2):
                    correct = outputs[variant] == frozenset([key])
                    condition = evaluate(make_property(f"v{variant}"), p, g0)
                    assert condition == correct, (p, g0, variant)
                correct3 = outputs[3] == frozenset([key])
                condition3 = evaluate(make_property("v3"), p, g0) and u3
                assert condition3 == correct3, (p, g0)
    report(f"criterion 5 PASS: PC exactness on {pairs_checked} skeleton-matched pairs, zero violations")


def test_criterion_06_minimality_chain():
    """Each minimality notion implies the next, over corpus x whole class."""
    total = 0
    for cls, sizes in ((DAG, (3, 4)), (MAG, (2, 3))):
        for n in sizes:
            bad = fx.minimality_chain_violations(cls, n)
            assert bad == [], bad[:3]
            total += len(standard_corpus(n, cls)) * len(class_table(n, cls))
    report(f"criterion 6 PASS: minimality chain over {total} relation-graph pairs, zero violations")


def test_criterion_07_support_containments():
    """Weakest-condition containments among the minimality notions, plus the
    Markov-qualified conservative-rule condition implying the sparsest one."""
    containments = [("min-markov", "sparsest"), ("causal-min", "pearl-min"), ("pearl-min", "sparsest")]
    for cls, sizes in ((DAG, (3, 4)), (MAG, (2, 3))):
        for n in sizes:
            corpus = standard_corpus(n, cls)
            for a, b in containments:
                ok, witness = support_subset(
                    make_property(a, cls), make_property(b, cls), corpus, n
                )
                assert ok, (cls, n, a, b, witness)
    qualified = conjoin(make_property("v3"), make_property("markov"))
    for n in (3, 4):
        ok, witness = support_subset(qualified, make_property("sparsest"), standard_corpus(n, DAG), n)
        assert ok, (n, witness)
    report("criterion 7 PASS: support containments and qualified conservative-rule implication, zero violations")


def test_criterion_08_pearl_uniqueness_is_graphicality():
    """On realizable three-node relations, the Pearl-minimal satisfying set
    is a single class exactly when some graph is faithful; the full 64-set
    sweep is reported, not asserted."""
    graphical = fx.graphical_relations(3, DAG)
    pearl = make_property("pearl-min")
    triples = all_triples(3)
    asserted = 0
    discrepancies = []
    for bits in range(2 ** len(triples)):
        chosen = frozenset(t for idx, t in enumerate(triples) if bits >> idx & 1)
        p = CISet(3, chosen)
        unique = uniqueness(pearl, p, 3)
        is_graphical = chosen in graphical
        realizable = closure(p, "gaussian").triples == p.triples and is_singleton_transitive(p)
        if realizable:
            assert unique == is_graphical, p
            asserted += 1
        elif unique != is_graphical:
            discrepancies.append(p)
    report(
        f"criterion 8 PASS: uniqueness<->graphicality on {asserted} realizable relations; "
        f"full sweep found {len(discrepancies)} discrepancies outside them (reported, not asserted)"
    )


def test_criterion_09_sp_agrees_with_brute_force():
    """Permutation search and the brute-force sparsest output name the same
    equivalence classes wherever the permutation construction is sound.

    Soundness means every ordering's DAG is Markov to the relation; that is
    guaranteed for relations graphs can realize but can fail on raw unions,
    where an ordering may exploit a missing composition consequence and
    undercut the true minimum.  Equality is asserted under the (checked)
    soundness condition and exceptions are reported.
    """
    import itertools

    from causalprops.algorithms import permutation_dag

    sparsest = make_property("sparsest")
    asserted = 0
    exceptions = []
    for n in (3, 4):
        for p in standard_corpus(n, DAG):
            sound = all(
                catalog.is_markov(p, permutation_dag(p, order))
                for order in itertools.permutations(range(1, n + 1))
            )
            got = {mec_key(g) for g in sp_run(p, n)}
            want = {mec_key(g) for g in corresponding_output(sparsest, p, n)}
            if sound:
                assert got == want, p
                asserted += 1
            elif got != want:
                exceptions.append(p)
    report(
        f"criterion 9 PASS: permutation search matches brute force on {asserted} sound relation "
        f"sets; {len(exceptions)} unsound unions disagree (reported; see ledger)"
    )


def test_criterion_10_orientation_rule_structure():
    """Every local pair is well-defined on every corpus member, the
    assignment-consistent set equals the brute-force output set, and
    uniqueness follows whenever the local predicates never hold jointly."""
    from causalprops.graphs import UNDIRECTED, MixedGraph

    pairs = [pc_pair(1), pc_pair(2), pc_pair(3), vous_pair()]
    checked = 0
    for n in (3, 4):
        for p in standard_corpus(n, DAG):
            skeleton_graph = MixedGraph.build(
                n, [(i, j, UNDIRECTED) for i, j in sorted(p.skeleton_pairs())]
            )
            vconfigs = v_configurations(skeleton_graph)
            for pair in pairs:
                try:
                    assignment = orientation_assign(pair, p)
                except WellDefinednessError as err:
                    raise AssertionError(f"{pair.name} ill-defined on {p}: {err}") from err
                direct = assignment_consistent_graphs(assignment, p, n)
                prop = vnc_property(pair)
                brute = corresponding_output(prop, p, n)
                assert direct == brute, (pair.name, p)
                never_jointly = not any(
                    pair.non_collider(p, vc) and pair.collider(p, vc) for vc in vconfigs
                )
                if never_jointly and brute:
                    assert uniqueness(prop, p, n), (pair.name, p)
                checked += 1
    report(f"criterion 10 PASS: orientation-rule structure on {checked} pair-relation combinations")
