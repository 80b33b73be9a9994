import math

import numpy as np
import pytest

from causalprops.ci import (
    CISet,
    Dataset,
    ExplicitOracle,
    FisherZOracle,
    GaussianModel,
    GaussianOracle,
    all_triples,
    ci_holds,
    closure,
    from_graph,
    is_singleton_transitive,
    partial_correlation,
    relation_of,
    skeleton_of,
    union_of_markov,
)
from causalprops.graphs import DAG, DIRECTED, MixedGraph, enumerate_graphs
from causalprops.simulation import cancellation_scm, experiment_scm, population_covariance, sample


EQ4 = CISet.of(4, [(3, 4, []), (3, 4, [1, 2]), (1, 2, [])])


class TestCISet:
    def test_symmetric_membership(self):
        p = CISet.of(3, [(2, 1, [3])])
        assert p.holds(1, 2, {3}) and p.holds(2, 1, {3})

    def test_rejects_overlapping_conditioning(self):
        with pytest.raises(ValueError):
            CISet.of(3, [(1, 2, [1])])
        with pytest.raises(ValueError):
            CISet.of(3, [(1, 1, [])])

    def test_json_round_trip(self):
        assert CISet.from_json(EQ4.to_json()) == EQ4

    def test_seps(self):
        assert EQ4.seps(4, 3) == {frozenset(), frozenset({1, 2})}

    def test_skeleton_pairs(self):
        assert EQ4.skeleton_pairs() == {(1, 3), (1, 4), (2, 3), (2, 4)}

    def test_union_requires_same_n(self):
        with pytest.raises(ValueError):
            EQ4.union(CISet.of(3, []))


class TestFromGraph:
    def test_collider(self, collider3):
        assert from_graph(collider3).triples == {(1, 2, frozenset())}

    def test_square(self, square):
        assert from_graph(square).triples == {(1, 2, frozenset()), (3, 4, frozenset({1, 2}))}

    def test_complete_dag_has_no_independencies(self):
        g = MixedGraph.build(3, [(1, 2, DIRECTED), (1, 3, DIRECTED), (2, 3, DIRECTED)])
        assert len(from_graph(g)) == 0

    def test_rejects_non_mag(self):
        cyc = MixedGraph.build(3, [(1, 2, DIRECTED), (2, 3, DIRECTED), (3, 1, DIRECTED)])
        with pytest.raises(ValueError):
            from_graph(cyc)


class TestUnionOfMarkov:
    def test_two_chains(self):
        g1 = MixedGraph.build(3, [(1, 2, DIRECTED), (2, 3, DIRECTED)])
        g2 = MixedGraph.build(3, [(1, 2, DIRECTED), (3, 2, DIRECTED)])
        u = union_of_markov([g1, g2])
        assert u.triples == {(1, 3, frozenset({2})), (1, 3, frozenset())}

    def test_single_graph(self, square):
        assert union_of_markov([square]) == from_graph(square)

    def test_square_and_flipped_gives_four_statements(self, square, square_flipped):
        u = union_of_markov([square, square_flipped])
        assert u.triples == {
            (1, 2, frozenset()),
            (1, 2, frozenset({3, 4})),
            (3, 4, frozenset()),
            (3, 4, frozenset({1, 2})),
        }

    def test_mismatched_n(self, square, chain3):
        with pytest.raises(ValueError):
            union_of_markov([square, chain3])


class TestGaussianOracle:
    def test_model_validation(self):
        with pytest.raises(ValueError, match="symmetric"):
            GaussianModel(2, np.array([[1.0, 0.5], [0.2, 1.0]]))
        with pytest.raises(ValueError, match="positive definite"):
            GaussianModel(2, np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_cancellation_marginal(self):
        o = GaussianOracle(population_covariance(cancellation_scm()))
        assert o.independent(3, 4, set())

    def test_cancellation_breaks_under_conditioning(self):
        o = GaussianOracle(population_covariance(cancellation_scm()))
        assert not o.independent(3, 4, {1})
        assert not o.independent(3, 4, {2})

    def test_experiment_model_induces_three_statement_relation(self):
        o = GaussianOracle(population_covariance(experiment_scm()))
        assert relation_of(o, 4).triples == EQ4.triples

    def test_verbatim_model_induces_four_statement_relation(self, square, square_flipped):
        o = GaussianOracle(population_covariance(cancellation_scm()))
        assert relation_of(o, 4) == union_of_markov([square, square_flipped])

    def test_symmetry(self):
        o = GaussianOracle(population_covariance(experiment_scm()))
        for i, j, c in all_triples(4):
            assert o.independent(i, j, c) == o.independent(j, i, c)


class TestDataset:
    def test_rejects_constant_column(self):
        with pytest.raises(ValueError, match="constant"):
            Dataset(2, np.array([[1.0, 2.0], [1.0, 3.0], [1.0, 4.0]]))

    def test_rejects_single_row(self):
        with pytest.raises(ValueError):
            Dataset(2, np.array([[1.0, 2.0]]))

    def test_csv_round_trip(self, tmp_path):
        ds = sample(experiment_scm(), 50, 7)
        path = tmp_path / "rows.csv"
        ds.to_csv(str(path))
        back = Dataset.from_csv(str(path))
        assert back.n == 4 and back.m == 50
        assert np.allclose(back.rows, ds.rows)

    def test_csv_rejects_wrong_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n3,4\n")
        with pytest.raises(ValueError, match="header"):
            Dataset.from_csv(str(path))


class TestFisherZ:
    def test_recovers_population_relation_on_large_sample(self):
        data = sample(experiment_scm(), 10000, 3)
        oracle = FisherZOracle(data, alpha=0.01)
        assert relation_of(oracle, 4).triples == EQ4.triples

    def test_memoized_answers_are_stable(self):
        oracle = FisherZOracle(sample(experiment_scm(), 200, 0), alpha=0.01)
        first = oracle.independent(3, 4, {1, 2})
        assert all(oracle.independent(3, 4, {1, 2}) == first for _ in range(5))

    def test_error_rate_over_seeds(self):
        # per-query disagreement with the population relation, 100 seeds
        truth = EQ4
        errors = 0
        total = 0
        for seed in range(100):
            oracle = FisherZOracle(sample(experiment_scm(), 10000, seed), alpha=0.01)
            for i, j, c in all_triples(4):
                total += 1
                if oracle.independent(i, j, c) != truth.holds(i, j, c):
                    errors += 1
        assert errors / total <= 0.05

    def test_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            FisherZOracle(sample(experiment_scm(), 50, 0), alpha=1.5)


class TestSkeletonOf:
    def test_three_statement_relation(self):
        sk = skeleton_of(EQ4, 4)
        assert sk.skeleton_pairs() == {(1, 3), (1, 4), (2, 3), (2, 4)}

    def test_empty_relation_gives_complete_skeleton(self):
        sk = skeleton_of(CISet.of(3, []), 3)
        assert sk.skeleton_pairs() == {(1, 2), (1, 3), (2, 3)}

    def test_faithful_case_recovers_graph_skeleton(self):
        for g in enumerate_graphs(4, DAG):
            assert skeleton_of(from_graph(g), 4).skeleton_pairs() == g.skeleton_pairs()

    def test_oracle_dispatch(self, collider3):
        assert ci_holds(ExplicitOracle(from_graph(collider3)), 1, 2, set())
        assert ci_holds(from_graph(collider3), 1, 2, set())


class TestClosureAndAxioms:
    def test_closure_is_extensive_and_idempotent(self):
        p = CISet.of(3, [(1, 2, [3]), (1, 3, [])])
        closed = closure(p, "semigraphoid")
        assert p.triples <= closed.triples
        assert closure(closed, "semigraphoid") == closed

    def test_contraction_projection(self):
        # i _||_ j | k together with i _||_ k gives i _||_ j
        p = CISet.of(3, [(1, 2, [3]), (1, 3, [])])
        closed = closure(p, "semigraphoid")
        assert closed.holds(1, 2, set())
        assert closed.holds(1, 3, {2})

    def test_gaussian_level_composition(self):
        p = CISet.of(3, [(1, 2, []), (1, 3, [])])
        closed = closure(p, "gaussian")
        assert closed.holds(1, 2, {3})
        assert closed.holds(1, 3, {2})
        assert not closure(p, "semigraphoid").holds(1, 2, {3})

    def test_counterexample_sets_are_not_closed(self):
        # the property calculus takes these literally; closure is opt-in
        v123 = CISet.of(4, [(1, 2, [3]), (3, 4, [1, 2]), (1, 2, [])])
        assert not is_singleton_transitive(v123)

    def test_singleton_transitive_faithful_sets(self):
        for g in enumerate_graphs(3, DAG):
            assert is_singleton_transitive(from_graph(g))

    def test_unknown_level(self):
        with pytest.raises(ValueError):
            closure(EQ4, "magic")


class TestPartialCorrelation:
    def test_matches_two_variable_correlation(self):
        cov = np.array([[2.0, 0.8], [0.8, 1.0]])
        rho = partial_correlation(cov, 1, 2, set())
        assert math.isclose(rho, 0.8 / math.sqrt(2.0), rel_tol=1e-12)

    def test_conditioning_removes_common_cause(self):
        g = population_covariance(
            cancellation_scm()
        ).covariance
        # conditioning on both sources restores the structural zero
        assert abs(partial_correlation(g, 3, 4, {1, 2})) < 1e-9
