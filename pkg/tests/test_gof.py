"""Binning, the chi-square statistic, both homogeneity tests, and the
exact enumeration oracle."""

import itertools
import json
import math

import numpy as np
import pytest
from scipy import stats

from netgof import (BinnedCounts, EnumerationGuardError, Graph,
                    HypergeomNull, ParameterError, approximation_test,
                    build_bins, chi_square_statistic, empirical_test,
                    exact_edge_count_distribution, generate_gnm,
                    induced_edge_count, optimal_subgraph_size)
from netgof.graph import draw_edge_counts


class TestBuildBins:
    def test_hand_trace_n100(self):
        # c = 0.05 walk on Hypergeometric(6,2,3): quantile(0.05)=0 closes a
        # 0.2 bin, quantile(0.25)=1 closes a 0.6 bin, the candidate cut at
        # the support maximum is discarded because its CDF is already 1
        spec = build_bins(HypergeomNull(6, 2, 3), 100)
        assert spec.cuts == (0, 1)
        assert spec.probs == pytest.approx((0.2, 0.6, 0.2), abs=1e-12)

    def test_point_mass_single_bin(self):
        spec = build_bins(HypergeomNull(6, 6, 3), 100)
        assert spec.cuts == ()
        assert spec.probs == (1.0,)

    def test_complete_graph_null_single_bin(self):
        pairs = 100 * 99 // 2
        spec = build_bins(HypergeomNull(pairs, pairs, 45), 1000)
        assert spec.bin_count == 1

    def test_too_few_observations_rejected(self):
        with pytest.raises(ParameterError):
            build_bins(HypergeomNull(6, 2, 3), 9)

    def test_randomized_sweep_respects_minimum_mass(self):
        rng = np.random.default_rng(5150)
        for _ in range(60):
            n = int(rng.integers(10, 200))
            population = n * (n - 1) // 2
            successes = int(rng.integers(1, population + 1))
            k = int(rng.integers(2, n + 1))
            n_obs = int(rng.choice([10, 50, 137, 1000, 5000]))
            null = HypergeomNull(population, successes, k * (k - 1) // 2)
            spec = build_bins(null, n_obs)
            c = 5.0 / n_obs
            assert spec.bin_count >= 1
            assert min(spec.probs) >= c - 1e-12
            assert sum(spec.probs) == pytest.approx(1.0, abs=1e-12)
            assert list(spec.cuts) == sorted(set(spec.cuts))
            if spec.cuts:
                assert spec.cuts[0] >= null.support_min
                assert spec.cuts[-1] < null.support_max
            expected = np.asarray(spec.probs) * n_obs
            assert expected.min() >= 5.0 - 1e-9

    def test_assign_uses_inclusive_upper_edges(self):
        spec = build_bins(HypergeomNull(6, 2, 3), 100)
        assert spec.assign(np.array([0, 1, 2])).tolist() == [0, 1, 2]


class TestChiSquareStatistic:
    def test_identity_is_zero(self):
        counts = BinnedCounts(observed=(20, 60, 20), expected=(20.0, 60.0, 20.0))
        assert chi_square_statistic(counts) == 0.0

    def test_two_bin_example(self):
        counts = BinnedCounts(observed=(10, 20), expected=(15.0, 15.0))
        assert chi_square_statistic(counts) == pytest.approx(50.0 / 15.0)

    def test_extreme_example(self):
        counts = BinnedCounts(observed=(0, 100), expected=(50.0, 50.0))
        assert chi_square_statistic(counts) == pytest.approx(100.0)

    def test_nonpositive_expected_rejected(self):
        with pytest.raises(ParameterError):
            chi_square_statistic(BinnedCounts(observed=(1,), expected=(0.0,)))


class TestApproximationTest:
    def test_complete_graph_degenerate(self):
        g = generate_gnm(100, 4950, 1)
        res = approximation_test(g, seed=7)
        assert res.degenerate
        assert res.statistic == 0.0
        assert res.p_value == 1.0
        assert res.df == 0

    def test_empty_graph_degenerate(self):
        g = Graph.from_edges(50, [])
        res = approximation_test(g, seed=3)
        assert res.degenerate and res.p_value == 1.0

    def test_defaults(self, medium_gnm):
        res = approximation_test(medium_gnm, seed=11)
        assert res.method == "approximation"
        assert res.subgraph_size == optimal_subgraph_size(300)
        assert res.n_subgraphs == 1000
        assert res.df == res.bin_count - 1
        assert 0.0 <= res.p_value <= 1.0
        assert sum(res.observed) == 1000
        assert sum(res.expected) == pytest.approx(1000.0, abs=1e-9)
        assert min(res.expected) >= 5.0 - 1e-9

    def test_determinism(self, medium_gnm):
        a = approximation_test(medium_gnm, seed=99)
        b = approximation_test(medium_gnm, seed=99)
        assert a.to_dict() == b.to_dict()

    def test_recorded_seed_reproduces_auto_seeded_run(self, medium_gnm):
        first = approximation_test(medium_gnm)
        again = approximation_test(medium_gnm, seed=first.seed)
        assert first.to_dict() == again.to_dict()

    def test_parameter_validation(self, medium_gnm):
        with pytest.raises(ParameterError):
            approximation_test(medium_gnm, k=1)
        with pytest.raises(ParameterError):
            approximation_test(medium_gnm, k=301)
        with pytest.raises(ParameterError):
            approximation_test(medium_gnm, n_subgraphs=5)

    def test_statistic_matches_manual_tabulation(self, medium_gnm):
        res = approximation_test(medium_gnm, k=40, n_subgraphs=500, seed=17)
        null = HypergeomNull(300 * 299 // 2, medium_gnm.edge_count,
                             40 * 39 // 2)
        spec = build_bins(null, 500)
        rng = np.random.default_rng(np.random.SeedSequence(17))
        values = draw_edge_counts(medium_gnm, 40, 500, rng)
        observed = np.bincount(spec.assign(values), minlength=spec.bin_count)
        expected = np.asarray(spec.probs) * 500
        manual = float(np.sum((observed - expected) ** 2 / expected))
        assert res.statistic == pytest.approx(manual, rel=1e-12)
        assert res.cuts == spec.cuts

    def test_json_serializable_result(self, medium_gnm):
        res = approximation_test(medium_gnm, seed=2)
        payload = json.loads(json.dumps(res.to_dict()))
        assert payload["method"] == "approximation"
        assert payload["bins"][0]["lo"] is None
        assert payload["bins"][-1]["hi"] is None
        assert len(payload["bins"]) == res.bin_count
        assert payload["degenerate"] is False

    @pytest.mark.slow
    def test_pvalues_uniform_on_large_homogeneous_inputs(self):
        # on honestly homogeneous G(2000, 5000) graphs the analytic p-value
        # should be close to U(0,1); KS distance over 500 seeds stays small
        pvals = []
        for seed in range(500):
            g = generate_gnm(2000, 5000, seed)
            pvals.append(approximation_test(g, seed=seed + 10_000).p_value)
        ks = stats.kstest(pvals, "uniform").statistic
        assert ks < 0.08


class TestEmpiricalTest:
    def test_degenerate_input(self):
        g = generate_gnm(30, 435, 4)
        res = empirical_test(g, replicates=5, seed=6)
        assert res.degenerate and res.p_value == 1.0

    def test_single_replicate_indicator(self, medium_gnm):
        res = empirical_test(medium_gnm, replicates=1, seed=13)
        assert res.p_value in (0.0, 1.0)

    def test_statistic_matches_approximation_stream(self, medium_gnm):
        emp = empirical_test(medium_gnm, replicates=3, seed=21)
        app = approximation_test(medium_gnm, seed=21)
        assert emp.statistic == pytest.approx(app.statistic, rel=1e-12)
        assert emp.cuts == app.cuts

    def test_pvalue_recomputable_from_null_stats(self, medium_gnm):
        res = empirical_test(medium_gnm, replicates=40, seed=8)
        assert res.replicates == 40
        assert len(res.null_stats) == 40
        want = float(np.mean(np.asarray(res.null_stats) >= res.statistic))
        assert res.p_value == want

    def test_determinism(self, medium_gnm):
        a = empirical_test(medium_gnm, replicates=10, seed=31)
        b = empirical_test(medium_gnm, replicates=10, seed=31)
        assert a.to_dict() == b.to_dict()

    def test_validation(self, medium_gnm):
        with pytest.raises(ParameterError):
            empirical_test(medium_gnm, replicates=0, seed=1)

    def test_json_includes_replicate_fields(self, medium_gnm):
        res = empirical_test(medium_gnm, replicates=4, seed=2)
        payload = res.to_dict()
        assert payload["replicates"] == 4
        assert len(payload["null_stats"]) == 4


class TestExactDistribution:
    def test_network_a(self, net_a):
        dist = exact_edge_count_distribution(net_a, 3)
        assert dist == pytest.approx({0: 0.25, 1: 0.5, 2: 0.25}, abs=1e-12)

    def test_network_b(self, net_b):
        assert exact_edge_count_distribution(net_b, 3) == {1: 1.0}

    def test_complete_graph(self, k4):
        assert exact_edge_count_distribution(k4, 3) == {3: 1.0}

    def test_single_node(self, net_a):
        assert exact_edge_count_distribution(net_a, 1) == {0: 1.0}

    def test_full_graph_sample(self, net_a):
        assert exact_edge_count_distribution(net_a, 4) == {2: 1.0}

    def test_matches_brute_force_counter(self):
        g = generate_gnm(9, 14, 77)
        dist = exact_edge_count_distribution(g, 4)
        tally = {}
        for subset in itertools.combinations(range(9), 4):
            y = induced_edge_count(g, subset)
            tally[y] = tally.get(y, 0) + 1
        total = math.comb(9, 4)
        assert dist == pytest.approx({y: c / total for y, c in tally.items()},
                                     abs=1e-15)

    def test_probabilities_sum_to_one(self, medium_gnm):
        g = generate_gnm(18, 60, 5)
        dist = exact_edge_count_distribution(g, 5)
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-12)

    def test_enumeration_guard(self):
        g = generate_gnm(40, 100, 2)
        with pytest.raises(EnumerationGuardError, match="Monte-Carlo"):
            exact_edge_count_distribution(g, 20)

    def test_k_validation(self, net_a):
        with pytest.raises(ParameterError):
            exact_edge_count_distribution(net_a, 0)
        with pytest.raises(ParameterError):
            exact_edge_count_distribution(net_a, 5)

    def test_ensemble_identity_over_two_edge_graphs(self):
        # average the exact distributions over all 15 graphs with 4 nodes
        # and 2 edges: the mixture is exactly Hypergeometric(6,2,3)
        all_pairs = list(itertools.combinations(range(4), 2))
        mixture = {0: 0.0, 1: 0.0, 2: 0.0}
        n_graphs = 0
        for edges in itertools.combinations(all_pairs, 2):
            g = Graph.from_edges(4, edges)
            for y, p in exact_edge_count_distribution(g, 3).items():
                mixture[y] += p
            n_graphs += 1
        assert n_graphs == 15
        null = HypergeomNull(6, 2, 3)
        for y in (0, 1, 2):
            assert mixture[y] / 15 == pytest.approx(null.pmf(y), abs=1e-12)

    def test_monte_carlo_total_variation(self, net_a):
        # 100k sampled subgraphs against the enumerated law
        exact = exact_edge_count_distribution(net_a, 3)
        rng = np.random.default_rng(2718281828)
        counts = draw_edge_counts(net_a, 3, 100_000, rng)
        freq = np.bincount(counts, minlength=3) / 100_000
        tv = 0.5 * sum(abs(freq[y] - exact.get(y, 0.0)) for y in range(3))
        assert tv < 0.01
