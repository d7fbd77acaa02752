"""Homogeneity tests for a single observed network.

Both tests share the same machinery: sample ``N`` induced subgraphs of
``k`` nodes, tabulate their edge counts into bins whose expected count
under the hypergeometric null is at least 5, and form the chi-square
statistic.  The approximation test reads the p-value off the chi-square
distribution with ``M - 1`` degrees of freedom; the empirical test
simulates homogeneous same-size networks to build a reference
distribution for the statistic instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .dist import HypergeomNull, chi_square_sf, optimal_subgraph_size
from .errors import EnumerationGuardError, ParameterError
from .graph import Graph, draw_edge_counts, generate_gnm, _pairs_possible

DEFAULT_SUBGRAPHS = 1000
DEFAULT_REPLICATES = 200

ENUMERATION_GUARD = 10_000_000


@dataclass(frozen=True)
class BinSpec:
    """Integer cut points and per-bin null probabilities.

    ``cuts`` of length M-1 define M bins ``(-inf, c0], (c0, c1], ...,
    (c_last, +inf)``.  Every bin probability is at least ``5 / N`` so the
    expected count in each bin is at least 5.
    """

    cuts: tuple[int, ...]
    probs: tuple[float, ...]

    @property
    def bin_count(self) -> int:
        return len(self.cuts) + 1

    def assign(self, values: np.ndarray) -> np.ndarray:
        """Bin index for each value (upper edges inclusive)."""
        return np.searchsorted(np.asarray(self.cuts), values, side="left")


@dataclass(frozen=True)
class BinnedCounts:
    observed: tuple[int, ...]
    expected: tuple[float, ...]

    @property
    def bin_count(self) -> int:
        return len(self.observed)


@dataclass(frozen=True)
class TestResult:
    """Outcome of one homogeneity test, JSON-serialisable via ``to_dict``."""

    method: str
    statistic: float
    bin_count: int
    df: int
    p_value: float
    n_subgraphs: int
    subgraph_size: int
    seed: int
    cuts: tuple[int, ...]
    observed: tuple[int, ...]
    expected: tuple[float, ...]
    degenerate: bool = False
    replicates: int | None = None
    null_stats: tuple[float, ...] | None = None

    def to_dict(self) -> dict:
        bins = []
        edges = [None, *self.cuts, None]
        for i in range(self.bin_count):
            bins.append({
                "lo": edges[i],        # exclusive; null means unbounded
                "hi": edges[i + 1],    # inclusive; null means unbounded
                "observed": self.observed[i],
                "expected": self.expected[i],
            })
        out = {
            "method": self.method,
            "statistic": self.statistic,
            "df": self.df,
            "p_value": self.p_value,
            "n_subgraphs": self.n_subgraphs,
            "subgraph_size": self.subgraph_size,
            "bins": bins,
            "seed": self.seed,
            "degenerate": self.degenerate,
        }
        if self.replicates is not None:
            out["replicates"] = self.replicates
            out["null_stats"] = list(self.null_stats or ())
        return out


def build_bins(null: HypergeomNull, n_obs: int) -> BinSpec:
    """Cut points giving every bin an expected count of at least 5.

    Walks the null quantile function in probability steps of ``c = 5/N``:
    each accepted cut closes a bin of probability at least ``c``.  A
    candidate cut whose CDF already reaches ``1 - c`` is discarded so the
    final open bin keeps probability above ``c`` too.
    """
    if n_obs < 10:
        raise ParameterError("need at least 10 observations to form bins")
    if null.support_min == null.support_max:
        return BinSpec(cuts=(), probs=(1.0,))
    c = 5.0 / n_obs
    cuts: list[int] = []
    cdf_at_cuts: list[float] = []
    p = c
    while p + c < 1.0 - c:
        x = null.quantile(p)
        f = null.cdf(x)
        if f >= 1.0 - c:
            break
        cuts.append(x)
        cdf_at_cuts.append(f)
        p = f + c
    probs = np.diff([0.0, *cdf_at_cuts, 1.0])
    return BinSpec(cuts=tuple(cuts), probs=tuple(float(v) for v in probs))


def chi_square_statistic(counts: BinnedCounts) -> float:
    """``sum((observed - expected)^2 / expected)`` over the bins."""
    f = np.asarray(counts.observed, dtype=np.float64)
    e = np.asarray(counts.expected, dtype=np.float64)
    if (e <= 0).any():
        raise ParameterError("expected counts must be positive")
    return float(np.sum((f - e) ** 2 / e))


def _tabulate(bins: BinSpec, values: np.ndarray) -> np.ndarray:
    idx = bins.assign(values)
    return np.bincount(idx, minlength=bins.bin_count)


def _statistic_from_counts(bins: BinSpec, values: np.ndarray, n_obs: int) -> tuple[float, np.ndarray, np.ndarray]:
    observed = _tabulate(bins, values)
    expected = np.asarray(bins.probs) * n_obs
    stat = float(np.sum((observed - expected) ** 2 / expected))
    return stat, observed, expected


def _resolve_seed(seed) -> int:
    if seed is None:
        return int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
    return int(seed)


def _prepare(g: Graph, k: int | None, n_subgraphs: int) -> tuple[int, HypergeomNull, BinSpec]:
    if k is None:
        k = optimal_subgraph_size(g.node_count)
    if not 2 <= k <= g.node_count:
        raise ParameterError(f"subgraph size {k} outside [2, {g.node_count}]")
    if n_subgraphs < 10:
        raise ParameterError("need at least 10 subgraphs")
    null = HypergeomNull(population=_pairs_possible(g.node_count),
                         successes=g.edge_count,
                         draws=k * (k - 1) // 2)
    bins = build_bins(null, n_subgraphs)
    return k, null, bins


def approximation_test(g: Graph, k: int | None = None,
                       n_subgraphs: int = DEFAULT_SUBGRAPHS,
                       seed=None) -> TestResult:
    """Chi-square test of edge homogeneity with an analytic p-value.

    Defaults: ``k`` from :func:`optimal_subgraph_size` and ``N = 1000``
    subgraphs.  With a single bin (empty, complete, or near-degenerate
    networks) the statistic carries no information: the result has
    statistic 0, p-value 1, and the ``degenerate`` flag set.
    """
    seed = _resolve_seed(seed)
    k, null, bins = _prepare(g, k, n_subgraphs)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    values = draw_edge_counts(g, k, n_subgraphs, rng)
    stat, observed, expected = _statistic_from_counts(bins, values, n_subgraphs)
    if bins.bin_count == 1:
        return TestResult(method="approximation", statistic=0.0,
                          bin_count=1, df=0, p_value=1.0,
                          n_subgraphs=n_subgraphs, subgraph_size=k, seed=seed,
                          cuts=bins.cuts, observed=tuple(int(v) for v in observed),
                          expected=tuple(float(v) for v in expected),
                          degenerate=True)
    p_value = chi_square_sf(stat, bins.bin_count - 1)
    return TestResult(method="approximation", statistic=stat,
                      bin_count=bins.bin_count, df=bins.bin_count - 1,
                      p_value=p_value, n_subgraphs=n_subgraphs,
                      subgraph_size=k, seed=seed, cuts=bins.cuts,
                      observed=tuple(int(v) for v in observed),
                      expected=tuple(float(v) for v in expected))


def empirical_test(g: Graph, k: int | None = None,
                   n_subgraphs: int = DEFAULT_SUBGRAPHS,
                   replicates: int = DEFAULT_REPLICATES,
                   seed=None) -> TestResult:
    """Homogeneity test with a simulated reference distribution.

    The observed statistic is computed exactly as in
    :func:`approximation_test`; the p-value is the fraction of
    ``replicates`` simulated homogeneous networks (same node and edge
    totals) whose statistic is at least the observed one.  Bins depend
    only on the null, so all replicates share the observed network's bins.
    """
    if replicates < 1:
        raise ParameterError("need at least one replicate")
    seed = _resolve_seed(seed)
    k, null, bins = _prepare(g, k, n_subgraphs)
    root = np.random.SeedSequence(seed)
    obs_rng = np.random.default_rng(root)
    values = draw_edge_counts(g, k, n_subgraphs, obs_rng)
    stat, observed, expected = _statistic_from_counts(bins, values, n_subgraphs)

    null_stats = np.empty(replicates)
    for r, child in enumerate(root.spawn(replicates)):
        rng = np.random.default_rng(child)
        g_r = generate_gnm(g.node_count, g.edge_count, rng)
        vals_r = draw_edge_counts(g_r, k, n_subgraphs, rng)
        null_stats[r] = _statistic_from_counts(bins, vals_r, n_subgraphs)[0]
    p_value = float(np.mean(null_stats >= stat))

    degenerate = bins.bin_count == 1
    if degenerate:
        stat, p_value = 0.0, 1.0
    return TestResult(method="empirical", statistic=stat,
                      bin_count=bins.bin_count,
                      df=max(bins.bin_count - 1, 0),
                      p_value=p_value, n_subgraphs=n_subgraphs,
                      subgraph_size=k, seed=seed, cuts=bins.cuts,
                      observed=tuple(int(v) for v in observed),
                      expected=tuple(float(v) for v in expected),
                      degenerate=degenerate,
                      replicates=replicates,
                      null_stats=tuple(float(v) for v in null_stats))


def exact_edge_count_distribution(g: Graph, k: int) -> dict[int, float]:
    """Exact distribution of the sampled edge count, by full enumeration.

    Walks every k-node subset (bitset adjacency, so counting a subset is
    O(k) word operations for graphs up to a few hundred nodes) and returns
    ``{edge count: probability}``.  Refuses when ``C(|V|, k)`` exceeds
    ``ENUMERATION_GUARD``.
    """
    n = g.node_count
    if not 1 <= k <= n:
        raise ParameterError(f"subgraph size {k} outside [1, {n}]")
    total = math.comb(n, k)
    if total > ENUMERATION_GUARD:
        raise EnumerationGuardError(
            f"C({n}, {k}) = {total} subsets exceeds the enumeration guard "
            f"({ENUMERATION_GUARD}); use the Monte-Carlo tests instead")
    nbr = [0] * n
    for a, b in zip(g.edge_u.tolist(), g.edge_v.tolist()):
        nbr[a] |= 1 << b
        nbr[b] |= 1 << a
    tally: dict[int, int] = {}
    for subset in combinations(range(n), k):
        mask = 0
        edges = 0
        for v in subset:
            edges += (nbr[v] & mask).bit_count()
            mask |= 1 << v
        tally[edges] = tally.get(edges, 0) + 1
    return {y: cnt / total for y, cnt in sorted(tally.items())}
