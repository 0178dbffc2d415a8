"""Pairwise distance kernels over a dense (n_docs, dim) matrix.

Two interchangeable backends compute the full symmetric matrix:

* ``numba`` - explicit loops under ``@njit`` (the default when numba imports)
* ``numpy`` - vectorized row-block fallback

Selection: the ``backend`` argument wins, then the ``CA3D_BACKEND`` environment
variable (``numba`` | ``numpy``), then auto-detection.  Both paths produce the
same values up to floating-point rounding; ``benchmarks/bench_kernels.py``
compares their throughput.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import BackendUnavailable

BACKEND_ENV = "CA3D_BACKEND"

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


def resolve_backend(backend: str | None = None) -> str:
    choice = backend or os.environ.get(BACKEND_ENV, "") or "auto"
    if choice == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    if choice == "numba":
        if not HAS_NUMBA:
            raise BackendUnavailable("numba requested but not importable")
        return "numba"
    if choice == "numpy":
        return "numpy"
    raise BackendUnavailable(f"unknown backend {choice!r}")


# ---------------------------------------------------------------- numba path


@njit(cache=True)
def _minkowski_nb(x, r):
    n, d = x.shape
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for k in range(d):
                s += abs(x[i, k] - x[j, k]) ** r
            v = s ** (1.0 / r)
            out[i, j] = v
            out[j, i] = v
    return out


@njit(cache=True)
def _euclidean_nb(x):
    n, d = x.shape
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for k in range(d):
                t = x[i, k] - x[j, k]
                s += t * t
            v = np.sqrt(s)
            out[i, j] = v
            out[j, i] = v
    return out


@njit(cache=True)
def _manhattan_nb(x):
    n, d = x.shape
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for k in range(d):
                s += abs(x[i, k] - x[j, k])
            out[i, j] = s
            out[j, i] = s
    return out


@njit(cache=True)
def _chebyshev_nb(x):
    n, d = x.shape
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            m = 0.0
            for k in range(d):
                t = abs(x[i, k] - x[j, k])
                if t > m:
                    m = t
            out[i, j] = m
            out[j, i] = m
    return out


@njit(cache=True)
def _average_nb(x):
    n, d = x.shape
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for k in range(d):
                t = x[i, k] - x[j, k]
                s += t * t
            v = np.sqrt(s / d)
            out[i, j] = v
            out[j, i] = v
    return out


@njit(cache=True)
def _cosine_nb(x):
    n, d = x.shape
    norms = np.empty(n)
    for i in range(n):
        s = 0.0
        for k in range(d):
            s += x[i, k] * x[i, k]
        norms[i] = np.sqrt(s)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            dot = 0.0
            for k in range(d):
                dot += x[i, k] * x[j, k]
            v = 1.0 - dot / (norms[i] * norms[j])
            if v < 0.0:
                v = 0.0
            out[i, j] = v
            out[j, i] = v
    return out


# ---------------------------------------------------------------- numpy path


def _minkowski_np(x, r):
    n = x.shape[0]
    out = np.zeros((n, n))
    for i in range(n - 1):
        diff = np.abs(x[i + 1 :] - x[i])
        v = (diff**r).sum(axis=1) ** (1.0 / r)
        out[i, i + 1 :] = v
        out[i + 1 :, i] = v
    return out


def _euclidean_np(x):
    n = x.shape[0]
    out = np.zeros((n, n))
    for i in range(n - 1):
        diff = x[i + 1 :] - x[i]
        v = np.sqrt((diff * diff).sum(axis=1))
        out[i, i + 1 :] = v
        out[i + 1 :, i] = v
    return out


def _manhattan_np(x):
    n = x.shape[0]
    out = np.zeros((n, n))
    for i in range(n - 1):
        v = np.abs(x[i + 1 :] - x[i]).sum(axis=1)
        out[i, i + 1 :] = v
        out[i + 1 :, i] = v
    return out


def _chebyshev_np(x):
    n = x.shape[0]
    out = np.zeros((n, n))
    for i in range(n - 1):
        v = np.abs(x[i + 1 :] - x[i]).max(axis=1)
        out[i, i + 1 :] = v
        out[i + 1 :, i] = v
    return out


def _average_np(x):
    n, d = x.shape
    out = np.zeros((n, n))
    for i in range(n - 1):
        diff = x[i + 1 :] - x[i]
        v = np.sqrt((diff * diff).sum(axis=1) / d)
        out[i, i + 1 :] = v
        out[i + 1 :, i] = v
    return out


def _cosine_np(x):
    norms = np.sqrt((x * x).sum(axis=1))
    sims = (x @ x.T) / np.outer(norms, norms)
    out = np.clip(1.0 - sims, 0.0, None)
    np.fill_diagonal(out, 0.0)
    return out


# ------------------------------------------------------------------ dispatch


def pairwise_distances(
    x: np.ndarray,
    metric: str,
    r: float = 2.0,
    transform: np.ndarray | None = None,
    backend: str | None = None,
) -> np.ndarray:
    """Full symmetric distance matrix for one metric family.

    ``metric`` is one of ``minkowski``, ``euclidean``, ``manhattan``,
    ``chebyshev``, ``average``, ``cosine``, ``mahalanobis``.  Mahalanobis
    needs ``transform``, the Cholesky factor of the inverse covariance; it is
    computed as the Euclidean distance in the transformed space.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    chosen = resolve_backend(backend)
    if metric == "mahalanobis":
        if transform is None:
            raise ValueError("mahalanobis needs the whitening transform")
        x = np.ascontiguousarray(x @ transform)
        metric = "euclidean"
    if metric == "minkowski":
        if r == 2.0:
            metric = "euclidean"
        elif r == 1.0:
            metric = "manhattan"

    if chosen == "numba":
        if metric == "minkowski":
            return _minkowski_nb(x, float(r))
        fn = {
            "euclidean": _euclidean_nb,
            "manhattan": _manhattan_nb,
            "chebyshev": _chebyshev_nb,
            "average": _average_nb,
            "cosine": _cosine_nb,
        }[metric]
        return fn(x)
    if metric == "minkowski":
        return _minkowski_np(x, float(r))
    fn = {
        "euclidean": _euclidean_np,
        "manhattan": _manhattan_np,
        "chebyshev": _chebyshev_np,
        "average": _average_np,
        "cosine": _cosine_np,
    }[metric]
    return fn(x)
