"""Replication studies: significance, power, and timing sweeps.

Each study walks a grid of network sizes and mean degrees (plus
heterogeneity ratios for the power study), generates ``replications``
random graphs per grid cell, applies the chosen homogeneity test, and
reports rejection rates with Wilson 95% confidence intervals.

Per-job seeds derive from ``(base_seed, cell index, replication
index)``, so every rate is reproducible for a fixed base seed no matter
how many worker processes run the jobs.  Wall-clock columns are
measurements of the host machine and are excluded from that guarantee.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import norm

from .errors import CalibrationError, ParameterError
from .gof import approximation_test, empirical_test
from .graph import (TwoColourParams, _pairs_possible, generate_gnm,
                    generate_two_colour)

log = logging.getLogger(__name__)

PAPER_SIZES = tuple(round(10 ** (2 + 0.25 * i)) for i in range(9))
PAPER_DEGREES = (1.0, 3.0, 5.0, 10.0)
PAPER_RATIOS = (0.01, 0.1, 0.2, 0.5, 0.75, 1.0)

DESK_SIZES = (100, 316, 1000, 3162)
DESK_DEGREES = (1.0, 3.0, 5.0, 10.0)
DESK_RATIOS = (0.1, 0.5, 1.0)
DESK_POWER_SIZES = (1000,)
DESK_POWER_DEGREES = (5.0,)

_METHODS = ("approximation", "empirical")


def default_sizes(kind: str, paper_scale: bool) -> tuple[int, ...]:
    if paper_scale:
        return PAPER_SIZES
    return DESK_POWER_SIZES if kind == "power" else DESK_SIZES


def default_degrees(kind: str, paper_scale: bool) -> tuple[float, ...]:
    if paper_scale:
        return PAPER_DEGREES
    return DESK_POWER_DEGREES if kind == "power" else DESK_DEGREES


def default_ratios(paper_scale: bool) -> tuple[float, ...]:
    return PAPER_RATIOS if paper_scale else DESK_RATIOS


def default_replications(kind: str, method: str, paper_scale: bool) -> int:
    if kind == "timing":
        return 10 if paper_scale else 5
    if paper_scale:
        return 200 if method == "empirical" else 500
    if kind == "power":
        return 100
    return 100 if method == "empirical" else 200


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid and budget for one study run."""

    sizes: tuple[int, ...]
    mean_degrees: tuple[float, ...]
    ratios: tuple[float, ...] = ()
    replications: int = 200
    n_subgraphs: int = 1000
    subgraph_size: int | None = None
    replicates: int = 200
    alpha: float = 0.05
    method: str = "approximation"
    base_seed: int = 0
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "mean_degrees",
                           tuple(float(d) for d in self.mean_degrees))
        object.__setattr__(self, "ratios", tuple(float(r) for r in self.ratios))
        if not self.sizes:
            raise ParameterError("size grid is empty")
        if any(s < 2 for s in self.sizes):
            raise ParameterError("every network size must be at least 2")
        if not self.mean_degrees:
            raise ParameterError("mean-degree grid is empty")
        if any(d < 0 for d in self.mean_degrees):
            raise ParameterError("mean degrees must be nonnegative")
        if any(not 0.0 <= r <= 1.0 for r in self.ratios):
            raise ParameterError("ratios must lie in [0, 1]")
        if self.replications < 1:
            raise ParameterError("need at least one replication per cell")
        if self.n_subgraphs < 10:
            raise ParameterError("need at least 10 subgraphs per test")
        if self.subgraph_size is not None and self.subgraph_size < 2:
            raise ParameterError("subgraph size must be at least 2")
        if self.replicates < 1:
            raise ParameterError("need at least one null replicate")
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError("alpha must lie strictly between 0 and 1")
        if self.method not in _METHODS:
            raise ParameterError(f"unknown method {self.method!r}")
        if self.base_seed < 0:
            raise ParameterError("base seed must be nonnegative")
        if self.threads < 1:
            raise ParameterError("thread count must be at least 1")


@dataclass(frozen=True)
class ExperimentRow:
    """One grid cell of study output; None fields do not apply to the row."""

    kind: str
    method: str
    size: int
    mean_degree: float
    ratio: float | None
    replications: int
    rejections: int | None
    rejection_rate: float | None
    ci_lo: float | None
    ci_hi: float | None
    mean_runtime: float | None
    mean_occupied_bins: float | None
    note: str = ""


CSV_FIELDS = tuple(f.name for f in ExperimentRow.__dataclass_fields__.values())


def wilson_interval(successes: int, trials: int,
                    confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ParameterError("need at least one trial")
    if not 0 <= successes <= trials:
        raise ParameterError("successes must lie in [0, trials]")
    if not 0.0 < confidence < 1.0:
        raise ParameterError("confidence must lie strictly between 0 and 1")
    z = float(norm.ppf(0.5 + confidence / 2.0))
    phat = successes / trials
    denom = 1.0 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / trials
                                   + z * z / (4 * trials * trials))
    # clamp to [0,1] and force containment of the point estimate, which
    # roundoff can otherwise break by one ulp at the boundaries
    lo = min(max(0.0, centre - half), phat)
    hi = max(min(1.0, centre + half), phat)
    return lo, hi


def calibrate_two_colour(n: int, mean_degree: float,
                         ratio: float) -> TwoColourParams:
    """Two-class probabilities hitting a target mean degree and ratio.

    The ratio is (q - p)/(p + q).  With equal class sizes n/2 and
    cross-class probability sqrt(pq), the expected average degree is
    (s/2) * [(n/2 - 1) + (n/2) * sqrt(1 - ratio^2)] where s = p + q;
    solving for s and splitting it as p = s(1-r)/2, q = s(1+r)/2 gives
    the unique calibration.  At ratio 0 this collapses to the
    homogeneous rate p = q = mean_degree/(n - 1).
    """
    if n < 2 or n % 2:
        raise ParameterError(f"node count must be even and >= 2, got {n}")
    if mean_degree < 0:
        raise ParameterError("mean degree must be nonnegative")
    if not 0.0 <= ratio <= 1.0:
        raise ParameterError("ratio must lie in [0, 1]")
    half = n // 2
    denom = (half - 1) + half * math.sqrt(1.0 - ratio * ratio)
    if denom <= 0:
        raise CalibrationError(
            f"no within-class pairs at n={n}, ratio={ratio}; cannot hit a "
            "positive mean degree")
    s = 2.0 * mean_degree / denom
    p = s * (1.0 - ratio) / 2.0
    q = s * (1.0 + ratio) / 2.0
    if q > 1.0 or p > 1.0:
        raise CalibrationError(
            f"mean degree {mean_degree} with ratio {ratio} at n={n} needs "
            f"p={p:.6g}, q={q:.6g} outside [0, 1]")
    return TwoColourParams(n1=half, n2=half, p=p, q=q)


def _round_half_away(x: float) -> int:
    return math.floor(x + 0.5)


def _cell_edge_count(size: int, mean_degree: float) -> int:
    return _round_half_away(mean_degree * size / 2.0)


def _job_seeds(base_seed: int, cell: int, rep: int) -> tuple[int, int]:
    ss = np.random.SeedSequence((base_seed, cell, rep))
    graph_seed, test_seed = ss.generate_state(2, np.uint64)
    return int(graph_seed), int(test_seed)


def _run_test(g, config_tuple, test_seed):
    method, k, n_subgraphs, replicates = config_tuple
    if method == "empirical":
        return empirical_test(g, k=k, n_subgraphs=n_subgraphs,
                              replicates=replicates, seed=test_seed)
    return approximation_test(g, k=k, n_subgraphs=n_subgraphs, seed=test_seed)


def _significance_job(args):
    size, m, config_tuple, base_seed, cell, rep = args
    graph_seed, test_seed = _job_seeds(base_seed, cell, rep)
    g = generate_gnm(size, m, graph_seed)
    t0 = time.perf_counter()
    result = _run_test(g, config_tuple, test_seed)
    elapsed = time.perf_counter() - t0
    occupied = int(np.count_nonzero(result.observed))
    return result.p_value, elapsed, occupied


def _power_job(args):
    n1, n2, p, q, config_tuple, base_seed, cell, rep = args
    graph_seed, test_seed = _job_seeds(base_seed, cell, rep)
    g = generate_two_colour(TwoColourParams(n1=n1, n2=n2, p=p, q=q), graph_seed)
    t0 = time.perf_counter()
    result = _run_test(g, config_tuple, test_seed)
    elapsed = time.perf_counter() - t0
    occupied = int(np.count_nonzero(result.observed))
    return result.p_value, elapsed, occupied


def _map_jobs(worker, jobs, threads):
    if threads <= 1 or len(jobs) <= 1:
        return [worker(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        chunk = max(1, len(jobs) // (threads * 4))
        return list(pool.map(worker, jobs, chunksize=chunk))


def _skip_row(kind, config, size, degree, ratio, reason):
    return ExperimentRow(kind=kind, method=config.method, size=size,
                         mean_degree=degree, ratio=ratio, replications=0,
                         rejections=None, rejection_rate=None, ci_lo=None,
                         ci_hi=None, mean_runtime=None,
                         mean_occupied_bins=None, note=reason)


def _rate_row(kind, config, size, degree, ratio, results):
    pvals = np.array([r[0] for r in results])
    times = np.array([r[1] for r in results])
    occupied = np.array([r[2] for r in results])
    rejections = int(np.sum(pvals <= config.alpha))
    rate = rejections / len(results)
    ci_lo, ci_hi = wilson_interval(rejections, len(results))
    return ExperimentRow(kind=kind, method=config.method, size=size,
                         mean_degree=degree, ratio=ratio,
                         replications=len(results), rejections=rejections,
                         rejection_rate=rate, ci_lo=ci_lo, ci_hi=ci_hi,
                         mean_runtime=float(times.mean()),
                         mean_occupied_bins=float(occupied.mean()))


def _config_tuple(config: ExperimentConfig) -> tuple:
    return (config.method, config.subgraph_size, config.n_subgraphs,
            config.replicates)


def run_significance(config: ExperimentConfig) -> list[ExperimentRow]:
    """Rejection rate of the chosen test on homogeneous fixed-edge graphs.

    Each cell draws ``replications`` G(n, m) graphs with m = round(d*n/2)
    and reports the fraction of tests rejecting at ``alpha``.  On a truly
    homogeneous input that fraction estimates the achieved significance
    level, so it should hover near ``alpha`` when the test is honest.
    """
    cells = [(s, d) for s in config.sizes for d in config.mean_degrees]
    ct = _config_tuple(config)
    cell_jobs, notes = [], []
    for idx, (size, degree) in enumerate(cells):
        m = _cell_edge_count(size, degree)
        if m > _pairs_possible(size):
            notes.append(f"skipped: m={m} exceeds C({size},2)="
                         f"{_pairs_possible(size)}")
            cell_jobs.append([])
            continue
        notes.append("")
        cell_jobs.append([(size, m, ct, config.base_seed, idx, rep)
                          for rep in range(config.replications)])
    flat = [job for jobs in cell_jobs for job in jobs]
    results = _map_jobs(_significance_job, flat, config.threads)
    rows, pos = [], 0
    for idx, (size, degree) in enumerate(cells):
        jobs = cell_jobs[idx]
        if not jobs:
            rows.append(_skip_row("significance", config, size, degree,
                                  None, notes[idx]))
            log.info("significance cell %d/%d (n=%d, d=%g): %s",
                     idx + 1, len(cells), size, degree, notes[idx])
            continue
        row = _rate_row("significance", config, size, degree, None,
                        results[pos:pos + len(jobs)])
        pos += len(jobs)
        rows.append(row)
        log.info("significance cell %d/%d (n=%d, d=%g): rate %.4f "
                 "[%.4f, %.4f] over %d reps", idx + 1, len(cells), size,
                 degree, row.rejection_rate, row.ci_lo, row.ci_hi,
                 row.replications)
    return rows


def run_power(config: ExperimentConfig) -> list[ExperimentRow]:
    """Rejection rate on two-class heterogeneous graphs, per ratio.

    Only the analytic test is supported here; the simulated-null variant
    is orders of magnitude slower and its power is out of scope.
    """
    if config.method != "approximation":
        raise ParameterError("power study supports the approximation "
                             "method only")
    if not config.ratios:
        raise ParameterError("power study needs a nonempty ratio grid")
    cells = [(s, d, r) for s in config.sizes for d in config.mean_degrees
             for r in config.ratios]
    ct = _config_tuple(config)
    cell_jobs, notes = [], []
    for idx, (size, degree, ratio) in enumerate(cells):
        try:
            params = calibrate_two_colour(size, degree, ratio)
        except (ParameterError, CalibrationError) as exc:
            notes.append(f"skipped: {exc}")
            cell_jobs.append([])
            continue
        notes.append("")
        cell_jobs.append([(params.n1, params.n2, params.p, params.q, ct,
                           config.base_seed, idx, rep)
                          for rep in range(config.replications)])
    flat = [job for jobs in cell_jobs for job in jobs]
    results = _map_jobs(_power_job, flat, config.threads)
    rows, pos = [], 0
    for idx, (size, degree, ratio) in enumerate(cells):
        jobs = cell_jobs[idx]
        if not jobs:
            rows.append(_skip_row("power", config, size, degree, ratio,
                                  notes[idx]))
            log.info("power cell %d/%d (n=%d, d=%g, r=%g): %s",
                     idx + 1, len(cells), size, degree, ratio, notes[idx])
            continue
        row = _rate_row("power", config, size, degree, ratio,
                        results[pos:pos + len(jobs)])
        pos += len(jobs)
        rows.append(row)
        log.info("power cell %d/%d (n=%d, d=%g, r=%g): rate %.4f "
                 "[%.4f, %.4f] over %d reps", idx + 1, len(cells), size,
                 degree, ratio, row.rejection_rate, row.ci_lo, row.ci_hi,
                 row.replications)
    return rows


def run_timing(config: ExperimentConfig) -> list[ExperimentRow]:
    """Mean wall time of the chosen test across the size/degree grid.

    Runs serially regardless of ``config.threads`` so the measurements
    are not skewed by contention.  Each replication generates a fresh
    homogeneous graph; only the test call itself is timed.
    """
    cells = [(s, d) for s in config.sizes for d in config.mean_degrees]
    ct = _config_tuple(config)
    rows = []
    for idx, (size, degree) in enumerate(cells):
        m = _cell_edge_count(size, degree)
        if m > _pairs_possible(size):
            reason = (f"skipped: m={m} exceeds C({size},2)="
                      f"{_pairs_possible(size)}")
            rows.append(_skip_row("timing", config, size, degree, None,
                                  reason))
            log.info("timing cell %d/%d (n=%d, d=%g): %s",
                     idx + 1, len(cells), size, degree, reason)
            continue
        times, occupied = [], []
        for rep in range(config.replications):
            graph_seed, test_seed = _job_seeds(config.base_seed, idx, rep)
            g = generate_gnm(size, m, graph_seed)
            t0 = time.perf_counter()
            result = _run_test(g, ct, test_seed)
            times.append(time.perf_counter() - t0)
            occupied.append(int(np.count_nonzero(result.observed)))
        rows.append(ExperimentRow(
            kind="timing", method=config.method, size=size,
            mean_degree=degree, ratio=None,
            replications=config.replications, rejections=None,
            rejection_rate=None, ci_lo=None, ci_hi=None,
            mean_runtime=float(np.mean(times)),
            mean_occupied_bins=float(np.mean(occupied))))
        log.info("timing cell %d/%d (n=%d, d=%g): mean %.6f s over %d runs",
                 idx + 1, len(cells), size, degree, float(np.mean(times)),
                 config.replications)
    return rows


def rows_to_dicts(rows: list[ExperimentRow]) -> list[dict]:
    return [asdict(row) for row in rows]


def rows_to_csv(rows: list[ExperimentRow], path) -> None:
    """RFC-4180-style CSV with a header row; None renders as empty."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_FIELDS)
        for row in rows:
            record = asdict(row)
            writer.writerow(["" if record[f] is None else record[f]
                             for f in CSV_FIELDS])


def rows_to_json(rows: list[ExperimentRow], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rows_to_dicts(rows), fh, indent=2)
        fh.write("\n")
