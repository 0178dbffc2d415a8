"""Benchmark the pairwise-distance kernels: numba backend vs numpy fallback.

The numba kernels compile on first use; a warmup pass runs before timing so
the table reflects steady-state throughput.  Force the fallback everywhere
else with CA3D_BACKEND=numpy.

Example:
    python benchmarks/bench_kernels.py --n-docs 800 --dim 300 --repeats 3
"""

import argparse
import time

import numpy as np

from ca3d import kernels
from ca3d.proximity import MahalanobisContext

METRICS = ("euclidean", "manhattan", "chebyshev", "average", "cosine",
           "minkowski", "mahalanobis")


def time_backend(x, metric, backend, repeats, transform=None):
    kwargs = dict(r=3.0, transform=transform, backend=backend)
    kernels.pairwise_distances(x, metric, **kwargs)  # warmup / JIT compile
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        kernels.pairwise_distances(x, metric, **kwargs)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description="pairwise kernel benchmark")
    parser.add_argument("--n-docs", type=int, default=600)
    parser.add_argument("--dim", type=int, default=200)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--metrics", default=",".join(METRICS))
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    x = rng.random((args.n_docs, args.dim))
    transform = MahalanobisContext.from_data(x).transform

    backends = ["numpy"] + (["numba"] if kernels.HAS_NUMBA else [])
    print(f"{args.n_docs} docs x {args.dim} dims, best of {args.repeats}")
    header = f"{'metric':<12}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for metric in args.metrics.split(","):
        metric = metric.strip()
        row = f"{metric:<12}"
        times = []
        for backend in backends:
            t = time_backend(
                x, metric, backend, args.repeats,
                transform=transform if metric == "mahalanobis" else None,
            )
            times.append(t)
            row += f"{t * 1000:>10.1f}ms"
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
