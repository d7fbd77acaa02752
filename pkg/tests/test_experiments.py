"""Calibration, Wilson intervals, and the three study runners."""

import csv
import json
import math

import numpy as np
import pytest
from statsmodels.stats.proportion import proportion_confint

from netgof import (CalibrationError, ExperimentConfig, ParameterError,
                    calibrate_two_colour, generate_two_colour, run_power,
                    run_significance, run_timing, wilson_interval)
from netgof.experiments import (CSV_FIELDS, DESK_SIZES, PAPER_DEGREES,
                                PAPER_RATIOS, PAPER_SIZES,
                                default_replications, rows_to_csv,
                                rows_to_dicts, rows_to_json)


class TestWilsonInterval:
    @pytest.mark.parametrize("successes,trials",
                             [(0, 10), (10, 10), (1, 30), (10, 200),
                              (25, 500), (97, 100), (250, 500)])
    def test_matches_statsmodels(self, successes, trials):
        lo, hi = wilson_interval(successes, trials)
        ref_lo, ref_hi = proportion_confint(successes, trials, alpha=0.05,
                                            method="wilson")
        assert lo == pytest.approx(ref_lo, abs=1e-12)
        assert hi == pytest.approx(ref_hi, abs=1e-12)

    def test_contains_the_point_estimate(self):
        for successes, trials in ((0, 7), (3, 9), (9, 9), (41, 123)):
            lo, hi = wilson_interval(successes, trials)
            assert lo <= successes / trials <= hi
            assert 0.0 <= lo <= hi <= 1.0

    def test_validation(self):
        with pytest.raises(ParameterError):
            wilson_interval(1, 0)
        with pytest.raises(ParameterError):
            wilson_interval(5, 3)
        with pytest.raises(ParameterError):
            wilson_interval(1, 10, confidence=1.0)


class TestCalibration:
    def test_zero_ratio_recovers_homogeneous_rate(self):
        params = calibrate_two_colour(1000, 5.0, 0.0)
        assert params.p == pytest.approx(5.0 / 999, rel=1e-12)
        assert params.q == pytest.approx(5.0 / 999, rel=1e-12)

    def test_reference_point(self):
        params = calibrate_two_colour(1000, 5.0, 0.5)
        assert params.q - params.p == pytest.approx(0.005364, abs=1e-5)
        assert params.expected_mean_degree() == pytest.approx(5.0, abs=1e-9)

    def test_extreme_ratio(self):
        params = calibrate_two_colour(1000, 5.0, 1.0)
        assert params.p == 0.0
        assert params.q == pytest.approx(2 * 5.0 / 499, rel=1e-12)

    def test_ratio_round_trip(self):
        for ratio in (0.01, 0.1, 0.2, 0.5, 0.75, 0.99):
            params = calibrate_two_colour(500, 3.0, ratio)
            back = (params.q - params.p) / (params.p + params.q)
            assert back == pytest.approx(ratio, abs=1e-12)
            assert params.expected_mean_degree() == pytest.approx(3.0,
                                                                  abs=1e-9)

    def test_generated_graphs_hit_the_target_degree(self):
        # Monte-Carlo check of the calibration identity
        params = calibrate_two_colour(1000, 5.0, 0.5)
        reps = 500
        means = np.empty(reps)
        for seed in range(reps):
            g = generate_two_colour(params, seed)
            means[seed] = 2.0 * g.edge_count / g.node_count
        se = means.std(ddof=1) / math.sqrt(reps)
        assert abs(means.mean() - 5.0) < 3 * se + 1e-9

    def test_odd_node_count_rejected(self):
        with pytest.raises(ParameterError):
            calibrate_two_colour(999, 5.0, 0.5)

    def test_infeasible_degree_raises_calibration_error(self):
        with pytest.raises(CalibrationError):
            calibrate_two_colour(100, 60.0, 1.0)

    def test_two_nodes_full_heterogeneity_infeasible(self):
        with pytest.raises(CalibrationError):
            calibrate_two_colour(2, 1.0, 1.0)


class TestConfig:
    def test_validation(self):
        good = dict(sizes=(100,), mean_degrees=(5.0,))
        ExperimentConfig(**good)
        with pytest.raises(ParameterError):
            ExperimentConfig(sizes=(), mean_degrees=(5.0,))
        with pytest.raises(ParameterError):
            ExperimentConfig(sizes=(1,), mean_degrees=(5.0,))
        with pytest.raises(ParameterError):
            ExperimentConfig(**good, ratios=(1.5,))
        with pytest.raises(ParameterError):
            ExperimentConfig(**good, alpha=0.0)
        with pytest.raises(ParameterError):
            ExperimentConfig(**good, method="wrong")
        with pytest.raises(ParameterError):
            ExperimentConfig(**good, replications=0)
        with pytest.raises(ParameterError):
            ExperimentConfig(**good, threads=0)

    def test_paper_grids(self):
        assert PAPER_SIZES == (100, 178, 316, 562, 1000, 1778, 3162,
                               5623, 10000)
        assert PAPER_DEGREES == (1.0, 3.0, 5.0, 10.0)
        assert len(PAPER_RATIOS) == 6
        assert DESK_SIZES == (100, 316, 1000, 3162)

    def test_default_replications(self):
        assert default_replications("significance", "approximation", True) == 500
        assert default_replications("significance", "empirical", True) == 200
        assert default_replications("power", "approximation", False) == 100
        assert default_replications("timing", "approximation", False) == 5


def _tiny_config(**overrides):
    base = dict(sizes=(60,), mean_degrees=(4.0,), replications=12,
                n_subgraphs=200, base_seed=5)
    base.update(overrides)
    return ExperimentConfig(**base)


class TestRunSignificance:
    def test_row_shape_and_reproducibility(self):
        rows = run_significance(_tiny_config())
        assert len(rows) == 1
        row = rows[0]
        assert row.kind == "significance"
        assert (row.size, row.mean_degree) == (60, 4.0)
        assert row.replications == 12
        assert 0.0 <= row.rejection_rate <= 1.0
        assert row.ci_lo <= row.rejection_rate <= row.ci_hi
        assert row.mean_runtime > 0
        assert row.mean_occupied_bins >= 1
        again = run_significance(_tiny_config())
        assert again[0].rejection_rate == row.rejection_rate
        assert again[0].rejections == row.rejections

    def test_wilson_ci_consistent_with_counts(self):
        row = run_significance(_tiny_config())[0]
        lo, hi = wilson_interval(row.rejections, row.replications)
        assert (row.ci_lo, row.ci_hi) == (lo, hi)

    def test_threads_do_not_change_rates(self):
        serial = run_significance(_tiny_config())
        parallel = run_significance(_tiny_config(threads=3))
        assert serial[0].rejection_rate == parallel[0].rejection_rate
        assert serial[0].rejections == parallel[0].rejections

    def test_infeasible_cell_is_skipped_with_note(self):
        rows = run_significance(_tiny_config(sizes=(50,),
                                             mean_degrees=(200.0,)))
        assert rows[0].rejection_rate is None
        assert "skipped" in rows[0].note
        assert rows[0].replications == 0

    def test_empirical_method_runs(self):
        rows = run_significance(_tiny_config(method="empirical",
                                             replications=4, replicates=10))
        assert rows[0].method == "empirical"
        assert rows[0].replications == 4

    def test_grid_ordering(self):
        config = _tiny_config(sizes=(30, 60), mean_degrees=(2.0, 4.0),
                              replications=3, n_subgraphs=50)
        rows = run_significance(config)
        assert [(r.size, r.mean_degree) for r in rows] == [
            (30, 2.0), (30, 4.0), (60, 2.0), (60, 4.0)]


class TestRunPower:
    def test_rows_and_determinism(self):
        config = _tiny_config(sizes=(200,), mean_degrees=(5.0,),
                              ratios=(0.2, 1.0), replications=10)
        rows = run_power(config)
        assert [r.ratio for r in rows] == [0.2, 1.0]
        assert all(r.kind == "power" for r in rows)
        again = run_power(config)
        assert [r.rejection_rate for r in rows] == \
            [r.rejection_rate for r in again]

    def test_requires_approximation_method(self):
        with pytest.raises(ParameterError):
            run_power(_tiny_config(method="empirical", ratios=(0.5,)))

    def test_requires_ratios(self):
        with pytest.raises(ParameterError):
            run_power(_tiny_config())

    def test_infeasible_calibration_skipped(self):
        config = _tiny_config(sizes=(100,), mean_degrees=(60.0,),
                              ratios=(1.0,), replications=3)
        rows = run_power(config)
        assert rows[0].rejection_rate is None
        assert "skipped" in rows[0].note

    def test_extreme_ratio_rejects_often(self):
        config = _tiny_config(sizes=(500,), mean_degrees=(5.0,),
                              ratios=(1.0,), replications=20,
                              n_subgraphs=500)
        rows = run_power(config)
        assert rows[0].rejection_rate >= 0.9


class TestRunTiming:
    def test_rows_have_positive_runtimes(self):
        config = _tiny_config(sizes=(50, 100), replications=2,
                              n_subgraphs=100)
        rows = run_timing(config)
        assert len(rows) == 2
        assert all(r.kind == "timing" for r in rows)
        assert all(r.mean_runtime > 0 for r in rows)
        assert all(r.rejection_rate is None for r in rows)


class TestWriters:
    def test_csv_and_json_round_trip(self, tmp_path):
        rows = run_significance(_tiny_config(replications=3,
                                             n_subgraphs=60))
        rows += run_significance(_tiny_config(sizes=(40,),
                                              mean_degrees=(100.0,),
                                              replications=3,
                                              n_subgraphs=60))
        csv_path = tmp_path / "rows.csv"
        json_path = tmp_path / "rows.json"
        rows_to_csv(rows, csv_path)
        rows_to_json(rows, json_path)
        with open(csv_path, newline="") as fh:
            records = list(csv.DictReader(fh))
        assert len(records) == 2
        assert tuple(records[0].keys()) == CSV_FIELDS
        assert float(records[0]["rejection_rate"]) == rows[0].rejection_rate
        assert records[1]["rejection_rate"] == ""
        assert "skipped" in records[1]["note"]
        payload = json.loads(json_path.read_text())
        assert payload == rows_to_dicts(rows)
        assert payload[1]["rejection_rate"] is None
