"""Graph representation, edge-list ingestion, random generators, and node sampling.

Graphs are undirected and loop-free.  Nodes are dense 0-based integers;
``parse_edge_list`` keeps the original string labels for reporting.  Edges
are stored twice: as sorted ``(u, v)`` arrays with ``u < v`` and as a CSR
adjacency (``indptr``/``indices``) used by the sampling kernel.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _kernel
from .errors import ParameterError, ParseError

log = logging.getLogger(__name__)

# Uniform blocks handed to the kernel are chunked to bound peak memory.
# Chunk layout never changes results (draws are consumed in row order),
# but keep the policy fixed so runs are easy to reason about.
_CHUNK_BUDGET = 4_000_000


def _pairs_possible(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected graph over nodes ``0 .. node_count - 1``."""

    node_count: int
    edge_u: np.ndarray
    edge_v: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    labels: tuple[str, ...] | None = None

    @property
    def edge_count(self) -> int:
        return int(self.edge_u.shape[0])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, a: int, b: int) -> bool:
        if a == b:
            return False
        lo, hi = self.indptr[a], self.indptr[a + 1]
        pos = np.searchsorted(self.indices[lo:hi], b)
        return pos < hi - lo and self.indices[lo + pos] == b

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[tuple[int, int]] | np.ndarray,
                   labels: tuple[str, ...] | None = None) -> "Graph":
        """Build a graph from unordered node-id pairs.

        Pairs are canonicalised to ``u < v`` and de-duplicated.  Self loops
        and out-of-range endpoints are rejected here; ``parse_edge_list``
        is the lenient entry point for raw text.
        """
        if node_count < 1:
            raise ParameterError("node_count must be positive")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ParameterError("edges must be pairs")
        if arr.size and (arr.min() < 0 or arr.max() >= node_count):
            raise ParameterError("edge endpoint out of range")
        if arr.size and (arr[:, 0] == arr[:, 1]).any():
            raise ParameterError("self-loops are not allowed")
        u = np.minimum(arr[:, 0], arr[:, 1])
        v = np.maximum(arr[:, 0], arr[:, 1])
        key = u * node_count + v
        key = np.unique(key)
        u = (key // node_count).astype(np.int32)
        v = (key % node_count).astype(np.int32)

        # CSR over both directions, neighbours sorted ascending
        both_src = np.concatenate([u, v])
        both_dst = np.concatenate([v, u])
        order = np.lexsort((both_dst, both_src))
        both_src = both_src[order]
        both_dst = both_dst[order]
        counts = np.bincount(both_src, minlength=node_count)
        indptr = np.zeros(node_count + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        g = cls(node_count=node_count, edge_u=u, edge_v=v,
                indptr=indptr, indices=both_dst.astype(np.int32), labels=labels)
        for a in (g.edge_u, g.edge_v, g.indptr, g.indices):
            a.setflags(write=False)
        return g


def parse_edge_list(source: str | Iterable[str], node_count: int | None = None) -> Graph:
    """Parse whitespace-separated edge-list text into a :class:`Graph`.

    Each non-empty, non-``#`` line must hold exactly two node tokens.
    Tokens are arbitrary strings, mapped to dense ids in first-appearance
    order.  Duplicate and reversed-duplicate edges collapse; self-loops
    are dropped (logged with a count).  ``node_count`` overrides the node
    total so trailing isolated nodes can be represented; it must not be
    smaller than the number of distinct tokens seen.
    """
    lines = source.splitlines() if isinstance(source, str) else source
    ids: dict[str, int] = {}
    pairs: list[tuple[int, int]] = []
    loops = 0
    saw_line = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        saw_line = True
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 2 node tokens, got {len(tokens)}", line=lineno)
        a = ids.setdefault(tokens[0], len(ids))
        b = ids.setdefault(tokens[1], len(ids))
        if a == b:
            loops += 1
            continue
        pairs.append((a, b))
    if not saw_line and node_count is None:
        raise ParseError("empty input: no edge lines found")
    n_seen = len(ids)
    if node_count is None:
        n = n_seen
    else:
        if node_count < n_seen:
            raise ParseError(
                f"node count override {node_count} is smaller than the "
                f"{n_seen} distinct nodes observed")
        n = node_count
    if n < 1:
        raise ParseError("graph has no nodes")
    if loops:
        log.warning("dropped %d self-loop%s", loops, "" if loops == 1 else "s")
    before = len(pairs)
    g = Graph.from_edges(n, pairs, labels=tuple(ids))
    dupes = before - g.edge_count
    if dupes:
        log.warning("collapsed %d duplicate edge%s", dupes, "" if dupes == 1 else "s")
    return g


def write_edge_list(g: Graph, destination) -> None:
    """Write the canonical sorted edge list (0-based ids, one pair per line).

    ``destination`` is a writable text stream or a file path.  Isolated
    trailing nodes are not representable in this format; pass the node
    count separately when re-reading such a graph.
    """
    if hasattr(destination, "write"):
        for a, b in zip(g.edge_u.tolist(), g.edge_v.tolist()):
            destination.write(f"{a} {b}\n")
        return
    with open(destination, "w", encoding="utf-8") as fh:
        write_edge_list(g, fh)


# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoColourParams:
    """Two-class edge-probability model.

    Within-class probabilities are ``p`` (first class, nodes
    ``0 .. n1 - 1``) and ``q`` (second class); cross-class pairs connect
    with probability ``sqrt(p * q)``.
    """

    n1: int
    n2: int
    p: float
    q: float

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0 or self.n1 + self.n2 < 1:
            raise ParameterError("class sizes must be nonnegative with at least one node")
        if not (0.0 <= self.p <= 1.0 and 0.0 <= self.q <= 1.0):
            raise ParameterError("edge probabilities must lie in [0, 1]")

    @property
    def node_count(self) -> int:
        return self.n1 + self.n2

    @property
    def cross(self) -> float:
        return math.sqrt(self.p * self.q)

    def expected_mean_degree(self) -> float:
        """Analytic average node degree of the model."""
        n = self.node_count
        d1 = self.p * (self.n1 - 1) + self.cross * self.n2
        d2 = self.q * (self.n2 - 1) + self.cross * self.n1
        return (self.n1 * d1 + self.n2 * d2) / n


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _sample_pair_keys(rng: np.random.Generator, n_keys: int, m: int,
                      draw) -> np.ndarray:
    """First ``m`` distinct keys from a stream of uniform draws.

    ``draw(rng, size)`` yields candidate keys (with rejection handled by
    the caller's encoding).  Used by every generator so they share one
    de-duplication discipline.
    """
    chosen: set[int] = set()
    out = []
    while len(out) < m:
        need = m - len(out)
        batch = draw(rng, need + need // 2 + 16).tolist()
        for key in batch:
            if key < 0 or key in chosen:
                continue
            chosen.add(key)
            out.append(key)
            if len(out) == m:
                break
    return np.array(out, dtype=np.int64)


def _draw_within(n: int):
    def draw(rng, size):
        ab = rng.integers(0, n, size=(size, 2))
        a = np.minimum(ab[:, 0], ab[:, 1])
        b = np.maximum(ab[:, 0], ab[:, 1])
        key = np.where(a == b, -1, a * n + b)  # -1 marks rejected loops
        return key
    return draw


def _sample_pairs(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """Uniform m-subset of the C(n,2) unordered pairs, as (m, 2) ids.

    Rejection sampling while ``m`` is at most half the pair count, else
    sample the complement and invert.
    """
    total = _pairs_possible(n)
    if m < 0 or m > total:
        raise ParameterError(f"edge count {m} outside [0, {total}]")
    if m == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if m <= total // 2:
        keys = _sample_pair_keys(rng, total, m, _draw_within(n))
    else:
        anti = _sample_pair_keys(rng, total, total - m, _draw_within(n))
        iu = np.triu_indices(n, 1)
        all_keys = iu[0] * n + iu[1]
        keys = np.setdiff1d(all_keys, anti, assume_unique=False)
    return np.column_stack([keys // n, keys % n])


def _sample_cross_pairs(rng: np.random.Generator, n1: int, n2: int, m: int) -> np.ndarray:
    """Uniform m-subset of the n1*n2 cross pairs, as (m, 2) local ids."""
    total = n1 * n2
    if m < 0 or m > total:
        raise ParameterError(f"cross edge count {m} outside [0, {total}]")
    if m == 0:
        return np.zeros((0, 2), dtype=np.int64)

    def draw(rng, size):
        a = rng.integers(0, n1, size=size)
        b = rng.integers(0, n2, size=size)
        return a * n2 + b

    if m <= total // 2:
        keys = _sample_pair_keys(rng, total, m, draw)
    else:
        anti = _sample_pair_keys(rng, total, total - m, draw)
        keys = np.setdiff1d(np.arange(total, dtype=np.int64), anti)
    return np.column_stack([keys // n2, keys % n2])


def generate_gnm(n: int, m: int, seed) -> Graph:
    """Uniform random graph with exactly ``m`` edges on ``n`` nodes."""
    if n < 1:
        raise ParameterError("need at least one node")
    total = _pairs_possible(n)
    if not 0 <= m <= total:
        raise ParameterError(f"edge count {m} outside [0, {total}] for n={n}")
    rng = _rng(seed)
    return Graph.from_edges(n, _sample_pairs(rng, n, m))


def generate_gnp(n: int, p: float, seed) -> Graph:
    """Random graph with each pair present independently with probability ``p``.

    Drawn as a binomial edge total followed by a uniform subset of pairs,
    which is distribution-identical to per-pair coin flips.
    """
    if n < 1:
        raise ParameterError("need at least one node")
    if not 0.0 <= p <= 1.0:
        raise ParameterError("p must lie in [0, 1]")
    rng = _rng(seed)
    m = int(rng.binomial(_pairs_possible(n), p))
    return Graph.from_edges(n, _sample_pairs(rng, n, m))


def generate_two_colour(params: TwoColourParams, seed) -> Graph:
    """Random graph from the two-class model.

    Nodes ``0 .. n1 - 1`` form the first class, the rest the second.
    Block order (within-1, within-2, cross) is fixed so a seed pins the
    output exactly.
    """
    rng = _rng(seed)
    n1, n2 = params.n1, params.n2
    parts = []
    m1 = int(rng.binomial(_pairs_possible(n1), params.p))
    parts.append(_sample_pairs(rng, n1, m1))
    m2 = int(rng.binomial(_pairs_possible(n2), params.q))
    parts.append(_sample_pairs(rng, n2, m2) + n1)
    mc = int(rng.binomial(n1 * n2, params.cross))
    cross = _sample_cross_pairs(rng, n1, n2, mc)
    if cross.size:
        cross = np.column_stack([cross[:, 0], cross[:, 1] + n1])
    parts.append(cross)
    edges = np.vstack([p.reshape(-1, 2) for p in parts])
    return Graph.from_edges(params.node_count, edges)


# ---------------------------------------------------------------------------
# node sampling
# ---------------------------------------------------------------------------

def induced_edge_count(g: Graph, nodes: Iterable[int]) -> int:
    """Number of edges of ``g`` with both endpoints in ``nodes``."""
    idx = np.asarray(list(nodes) if not isinstance(nodes, np.ndarray) else nodes,
                     dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= g.node_count):
        raise ParameterError("node id out of range")
    if np.unique(idx).size != idx.size:
        raise ParameterError("sampled nodes must be distinct")
    mask = np.zeros(g.node_count, dtype=bool)
    mask[idx] = True
    if g.edge_count == 0:
        return 0
    return int(np.count_nonzero(mask[g.edge_u] & mask[g.edge_v]))


def draw_edge_counts(g: Graph, k: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Edge counts of ``size`` independent uniform k-node samples.

    Each sample picks ``k`` distinct nodes via a partial shuffle and counts
    the induced edges.  Consumes ``size * k`` uniforms from ``rng`` in row
    order, so results depend only on ``(g, k, size, rng state)`` and not on
    the kernel backend.
    """
    if not 1 <= k <= g.node_count:
        raise ParameterError(f"sample size {k} outside [1, {g.node_count}]")
    out = np.empty(size, dtype=np.int64)
    per_row = max(g.node_count + g.edge_count, k, 1)
    chunk = max(1, min(size, _CHUNK_BUDGET // per_row))
    done = 0
    while done < size:
        rows = min(chunk, size - done)
        u = rng.random((rows, k))
        out[done:done + rows] = _kernel.edge_counts(
            g.indptr, g.indices, g.edge_u, g.edge_v, k, u)
        done += rows
    return out


def sample_subgraph_edge_count(g: Graph, k: int, seed) -> int:
    """Edge count of a single uniform k-node induced subgraph."""
    rng = _rng(seed)
    return int(draw_edge_counts(g, k, 1, rng)[0])
