"""Benchmark the compiled sampling kernel against the pure-numpy fallback.

Both backends consume the same pre-drawn uniform block and must return
identical counts, so this script checks agreement and then reports the
wall-time of each implementation plus the speedup ratio.

Run from a checkout with the extension built::

    python3 benchmarks/bench_kernel.py
    python3 benchmarks/bench_kernel.py --sizes 1000 10000 --subgraphs 2000
"""

import argparse
import time

import numpy as np

from netgof import generate_gnm, optimal_subgraph_size
from netgof._kernel import HAVE_COMPILED, pure

if HAVE_COMPILED:
    from netgof._kernel import _sampler as compiled
else:  # pragma: no cover - benchmark guard, not library code
    compiled = None


def _time_call(fn, args, repeats):
    # best-of timing: robust against scheduler noise for short calls
    best = float("inf")
    out = None
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, out


def run(sizes, mean_degree, n_subgraphs, repeats, seed):
    rng = np.random.default_rng(seed)
    header = (
        f"{'n':>7} {'m':>8} {'k':>6} {'pure (s)':>10} "
        f"{'compiled (s)':>13} {'speedup':>8}"
    )
    print(header)
    print("-" * len(header))
    for n in sizes:
        m = int(mean_degree * n / 2 + 0.5)
        g = generate_gnm(n, m, seed)
        k = optimal_subgraph_size(n)
        uniforms = rng.random((n_subgraphs, k))
        args = (g.indptr, g.indices, g.edge_u, g.edge_v, k, uniforms)

        t_pure, out_pure = _time_call(pure.edge_counts, args, repeats)
        if compiled is None:
            print(f"{n:>7} {m:>8} {k:>6} {t_pure:>10.4f} {'n/a':>13} {'n/a':>8}")
            continue
        t_comp, out_comp = _time_call(compiled.edge_counts, args, repeats)
        if not np.array_equal(np.asarray(out_pure), np.asarray(out_comp)):
            raise SystemExit(f"backend mismatch at n={n}: results differ")
        print(
            f"{n:>7} {m:>8} {k:>6} {t_pure:>10.4f} {t_comp:>13.4f} "
            f"{t_pure / t_comp:>7.1f}x"
        )


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--sizes", type=int, nargs="+", default=[100, 316, 1000, 3162, 10000],
        help="graph orders to benchmark (default: %(default)s)")
    parser.add_argument(
        "--mean-degree", type=float, default=5.0,
        help="mean degree of the benchmark graphs (default: %(default)s)")
    parser.add_argument(
        "--subgraphs", type=int, default=1000,
        help="subgraphs sampled per call (default: %(default)s)")
    parser.add_argument(
        "--repeats", type=int, default=3,
        help="timing repeats, best-of is reported (default: %(default)s)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if not HAVE_COMPILED:
        print("note: compiled extension unavailable, timing fallback only")
    run(args.sizes, args.mean_degree, args.subgraphs, args.repeats, args.seed)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
