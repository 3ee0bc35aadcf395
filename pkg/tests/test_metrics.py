import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import igd_double_loop
from rmf.clustering import build_clusters
from rmf.errors import DomainError
from rmf.geometry import ReferenceSet
from rmf.metrics import (
    cluster_means,
    combined_score,
    convergence,
    diversity,
    evaluate,
    igd,
    local_report,
)
from rmf.regions import GradedPopulation, grade_population


def graded_from(values, clusters, n_clusters):
    values = np.asarray(values, dtype=float)
    n = len(values)
    return GradedPopulation(
        points=np.zeros((n, 2)),
        values=values,
        raw=values.copy(),
        region_codes=np.zeros(n, dtype=int),
        cluster_index=np.asarray(clusters, dtype=int),
        degenerate=np.zeros(n, dtype=bool),
        n_clusters=n_clusters,
    )


def partition_with(n_clusters):
    x = np.linspace(0, 1, 2 * n_clusters + 1)
    ref = ReferenceSet(np.column_stack([x, 1 - x]))
    return build_clusters(np.empty((0, 2)), ref)


class TestConvergence:
    def test_sum(self):
        assert convergence(graded_from([3, 3, 3], [0, 0, 0], 1)) == 9.0

    def test_empty(self):
        assert convergence(graded_from([], [], 1)) == 0.0

    def test_all_on_front(self, convex_ref, rng):
        idx = rng.integers(0, len(convex_ref), 200)
        report = evaluate(convex_ref.points[idx], convex_ref)
        assert report.convergence == 600.0

    @given(st.lists(st.floats(0, 3), max_size=30), st.lists(st.floats(0, 3), max_size=30))
    def test_additive_and_monotone(self, a, b):
        ga, gb = graded_from(a, [-1] * len(a), 1), graded_from(b, [-1] * len(b), 1)
        both = graded_from(a + b, [-1] * (len(a) + len(b)), 1)
        assert convergence(both) == pytest.approx(convergence(ga) + convergence(gb), abs=1e-12)
        assert convergence(both) >= convergence(ga)


class TestDiversity:
    def test_all_means_three(self):
        part = partition_with(3)
        assert diversity(graded_from([3, 3, 3, 3], [0, 1, 2, 2], 3), part) == 0.0

    def test_empty_cluster_counts_as_zero(self):
        part = partition_with(2)
        assert diversity(graded_from([3, 3], [0, 0], 2), part) == 4.5

    def test_four_clusters(self):
        part = partition_with(4)
        g = graded_from([3, 2.5, 2.0, 1.0, 3], [0, 1, 2, 2, 3], 4)
        assert cluster_means(g) == [3.0, 2.5, 1.5, 3.0]
        assert diversity(g, part) == 0.625

    def test_no_clusters(self):
        part = partition_with(1)
        part.clusters = []
        with pytest.raises(DomainError):
            diversity(graded_from([], [], 0), part)

    @given(st.lists(st.floats(0, 3), min_size=1, max_size=10))
    def test_zero_iff_all_means_ideal(self, means):
        part = partition_with(len(means))
        g = graded_from(means, list(range(len(means))), len(means))
        div = diversity(g, part)
        assert div >= 0
        assert (div == 0) == all(m == 3.0 for m in means)


class TestCombinedScore:
    def test_single_algorithm_is_neutral(self):
        r = combined_score([("only", 10.0, 2.0)])
        e = r.entries[0]
        assert (e.s1, e.s2, e.score) == (0.5, 0.5, 0.5)

    def test_two_algorithms(self):
        r = combined_score([("MMODE_ICD", 482.31, 3.22), ("MMOEAC/DC", 373.83, 3.38)])
        assert [e.score for e in r.entries] == [1.0, 0.0]
        assert r.ranking == ["MMODE_ICD", "MMOEAC/DC"]

    def test_mixed_degenerate(self):
        r = combined_score([("a", 10, 4), ("b", 20, 4), ("c", 30, 4)])
        assert [e.s1 for e in r.entries] == [0.0, 0.5, 1.0]
        assert [e.s2 for e in r.entries] == [0.5, 0.5, 0.5]
        assert [e.score for e in r.entries] == [0.25, 0.5, 0.75]
        assert r.ranking == ["c", "b", "a"]

    def test_ties_keep_input_order(self):
        r = combined_score([("x", 5, 1), ("y", 5, 1)])
        assert r.ranking == ["x", "y"]

    def test_tie_broken_by_convergence(self):
        # a: S1=1, S2=0; b: S1=0, S2=1; equal score at alpha = beta.
        r = combined_score([("b", 1, 1), ("a", 2, 2)])
        assert r.entries[0].score == r.entries[1].score
        assert r.ranking == ["a", "b"]

    def test_weights(self):
        r = combined_score([("a", 1, 0), ("b", 2, 5)], alpha=1.0, beta=0.0)
        assert r.ranking == ["b", "a"]

    def test_errors(self):
        with pytest.raises(DomainError):
            combined_score([])
        with pytest.raises(DomainError):
            combined_score([("a", 1, 1)], alpha=-0.1)

    @settings(max_examples=50)
    @given(
        st.lists(st.tuples(st.floats(0, 1000), st.floats(0, 10)), min_size=2, max_size=8),
        st.floats(0.1, 100),
        st.floats(-100, 100),
    )
    def test_ranking_invariant_under_affine_rescale(self, rows, scale, shift):
        conv = [c for c, _ in rows]
        # A spread far below the shift's ulp collapses under rounding.
        assume(max(conv) - min(conv) > 1e-6 or max(conv) == min(conv))
        named = [(f"alg{i}", c, d) for i, (c, d) in enumerate(rows)]
        scaled = [(n, scale * c + shift, d) for n, c, d in named]
        base = combined_score(named)
        moved = combined_score(scaled)
        for e, f in zip(base.entries, moved.entries):
            assert f.s1 == pytest.approx(e.s1, abs=1e-9)
            assert f.score == pytest.approx(e.score, abs=1e-9)


class TestLocalReport:
    @pytest.fixture
    def setup(self, convex_ref, rng):
        idx = rng.integers(0, len(convex_ref), 120)
        pop = convex_ref.points[idx] + rng.normal(0, 0.002, (120, 2))
        part = build_clusters(pop, convex_ref)
        g = grade_population(part, convex_ref, 2)
        g_clustered = g.cluster_index >= 0
        return part, g, g_clustered

    def test_single_window_equals_global(self, setup):
        part, g, clustered = setup
        [w] = local_report(g, part, [((0, 1), (1, 0))])
        assert w.convergence == pytest.approx(float(g.values[clustered].sum()), abs=1e-9)
        assert w.diversity == diversity(g, part)
        assert w.clusters == list(range(len(part.clusters)))

    def test_empty_window(self, setup):
        part, g, _ = setup
        out = local_report(g, part, [(2.0, 3.0)])
        assert out[0].convergence == 0.0 and out[0].diversity is None
        assert out[-1].window is None  # catch-all holds every cluster

    def test_split_windows_are_additive(self, setup):
        part, g, clustered = setup
        out = local_report(g, part, [(0.0, 0.5), (0.5000001, 1.0)])
        assert len(out) == 2
        total = sum(float(g.values[g.cluster_index == k].sum()) for k in range(len(part.clusters)))
        assert out[0].convergence + out[1].convergence == pytest.approx(total, abs=1e-9)

    def test_catch_all(self, setup):
        part, g, _ = setup
        out = local_report(g, part, [(0.0, 0.3)])
        assert out[-1].window is None
        assert sorted(out[0].clusters + out[-1].clusters) == list(range(len(part.clusters)))

    def test_reversed_window(self, setup):
        part, g, _ = setup
        with pytest.raises(DomainError):
            local_report(g, part, [(0.6, 0.2)])


class TestIGD:
    def test_identity(self, convex_ref):
        assert igd(convex_ref.points, convex_ref) == 0.0

    def test_three_four_five(self):
        assert igd([(3, 4)], [(0, 0)]) == 5.0

    def test_matches_double_loop(self, rng):
        for _ in range(20):
            P = rng.uniform(0, 1, (rng.integers(1, 51), 2))
            S = rng.uniform(0, 1, (rng.integers(1, 51), 2))
            assert igd(P, S) == igd_double_loop(P.tolist(), S.tolist())

    def test_decision_space_dimensions(self, rng):
        P = rng.uniform(0, 1, (10, 5))
        S = rng.uniform(0, 1, (7, 5))
        assert igd(P, S) == igd_double_loop(P.tolist(), S.tolist())

    def test_zero_iff_covered(self):
        ref = [(0, 1), (1, 0)]
        assert igd([(0, 1), (1, 0), (5, 5)], ref) == 0.0
        assert igd([(0, 1)], ref) > 0.0

    def test_errors(self):
        with pytest.raises(DomainError):
            igd([], [(0, 0)])
        with pytest.raises(DomainError):
            igd([(0, 0)], [])
        with pytest.raises(DomainError):
            igd([(0, 0)], [(0, 0, 0)])


def test_evaluate_perfect_population(convex_ref):
    report = evaluate(convex_ref.points, convex_ref)
    assert report.convergence == 303.0
    assert report.diversity == 0.0
    assert report.region_histogram["OnFront"] == 101
