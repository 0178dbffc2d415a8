"""Distance and similarity functions over document vectors, and the symmetric
proximity matrices built from them.

Per-pair functions (:func:`minkowski`, :func:`maximum_distance`, ...) are the
reference arithmetic; :func:`build_proximity` computes whole matrices through
the batch kernels in :mod:`ca3d.kernels`.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, InvalidOrder, ZeroVector

MAGIC = b"CA3DPROX"

# aliases accepted everywhere a metric name is taken; "maximum" and
# "tchebychev" are the same function under two traditional names
METRIC_ALIASES = {
    "minkowski": "minkowski",
    "manhattan": "manhattan",
    "cityblock": "manhattan",
    "euclidean": "euclidean",
    "euclidian": "euclidean",
    "maximum": "chebyshev",
    "chebyshev": "chebyshev",
    "tchebychev": "chebyshev",
    "average": "average",
    "mahalanobis": "mahalanobis",
    "cosine": "cosine",
}

SWEEP_DISTANCES = ("cosine", "euclidean", "chebyshev")


def canonical_metric(name: str) -> str:
    key = name.strip().lower()
    if key not in METRIC_ALIASES:
        raise ValueError(f"unknown distance metric: {name!r}")
    return METRIC_ALIASES[key]


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatch(f"shapes {x.shape} and {y.shape} do not match")
    return x, y


def minkowski(x, y, r: float) -> float:
    """Order-r Minkowski distance; r=1 is Manhattan, r=2 Euclidean."""
    x, y = _pair(x, y)
    if r < 1:
        raise InvalidOrder(f"order must be >= 1, got {r}")
    return float((np.abs(x - y) ** r).sum() ** (1.0 / r))


def maximum_distance(x, y) -> float:
    """Largest per-coordinate difference (also known as Chebyshev distance)."""
    x, y = _pair(x, y)
    return float(np.abs(x - y).max()) if x.size else 0.0


chebyshev = maximum_distance


def average_distance(x, y) -> float:
    """Euclidean distance normalized by the dimension: sqrt(mean of squares)."""
    x, y = _pair(x, y)
    if x.size == 0:
        raise DimensionMismatch("average distance needs dimension >= 1")
    d = x - y
    return float(np.sqrt((d * d).sum() / x.size))


def cosine_distance(x, y) -> float:
    """1 minus the cosine of the angle; in [0, 1] for non-negative vectors."""
    x, y = _pair(x, y)
    nx = float(np.sqrt((x * x).sum()))
    ny = float(np.sqrt((y * y).sum()))
    if nx == 0.0 or ny == 0.0:
        raise ZeroVector("cosine distance is undefined for zero vectors")
    return max(0.0, 1.0 - float(x @ y) / (nx * ny))


@dataclass(frozen=True)
class MahalanobisContext:
    """Ridge-regularized inverse covariance, shared by every pair comparison."""

    covariance: np.ndarray
    inverse: np.ndarray
    ridge: float
    transform: np.ndarray  # Cholesky factor L of the inverse, inverse = L L^T

    @classmethod
    def from_covariance(
        cls, covariance: np.ndarray, ridge: float | None = None
    ) -> "MahalanobisContext":
        covariance = np.asarray(covariance, dtype=np.float64)
        d = covariance.shape[0]
        if ridge is None:
            # tf-idf covariance is rank deficient whenever dim > n_docs
            ridge = max(1e-6 * float(np.trace(covariance)) / d, 1e-12)
        inverse = np.linalg.inv(covariance + ridge * np.eye(d))
        inverse = (inverse + inverse.T) / 2.0
        transform = np.linalg.cholesky(inverse)
        return cls(
            covariance=covariance, inverse=inverse, ridge=float(ridge),
            transform=transform,
        )

    @classmethod
    def from_data(cls, x: np.ndarray, ridge: float | None = None) -> "MahalanobisContext":
        x = np.asarray(x, dtype=np.float64)
        return cls.from_covariance(np.cov(x, rowvar=False, ddof=0), ridge=ridge)


def mahalanobis(x, y, ctx: MahalanobisContext) -> float:
    """sqrt of the quadratic form (x-y) Sigma^-1 (x-y)^T."""
    x, y = _pair(x, y)
    if x.size != ctx.inverse.shape[0]:
        raise DimensionMismatch(
            f"vectors of dim {x.size} against a {ctx.inverse.shape[0]}-dim context"
        )
    diff = x - y
    q = float(diff @ (ctx.inverse @ diff))
    return float(np.sqrt(max(q, 0.0)))


@dataclass(frozen=True)
class ProximityMatrix:
    kind: str  # "distance" | "similarity"
    values: np.ndarray
    metric: str = ""

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def off_diagonal(self) -> np.ndarray:
        mask = ~np.eye(self.n, dtype=bool)
        return self.values[mask]


def pair_metric(metric: str, r: float = 2.0, ctx: MahalanobisContext | None = None):
    """The per-pair callable behind a metric name, with parameters bound."""
    name = canonical_metric(metric)
    if name == "minkowski":
        return lambda a, b: minkowski(a, b, r)
    if name == "manhattan":
        return lambda a, b: minkowski(a, b, 1.0)
    if name == "euclidean":
        return lambda a, b: minkowski(a, b, 2.0)
    if name == "chebyshev":
        return maximum_distance
    if name == "average":
        return average_distance
    if name == "cosine":
        return cosine_distance
    if name == "mahalanobis":
        if ctx is None:
            raise ValueError("mahalanobis needs a MahalanobisContext")
        return lambda a, b: mahalanobis(a, b, ctx)
    raise AssertionError(name)


def build_proximity(
    dense: np.ndarray,
    metric: str,
    r: float = 2.0,
    ctx: MahalanobisContext | None = None,
    backend: str | None = None,
) -> ProximityMatrix:
    """Distance matrix over the rows of ``dense`` (one row per document).

    The diagonal is exactly zero and symmetry holds by construction.  Zero
    rows are rejected up front for cosine, naming the offending documents,
    so callers can quarantine them instead of propagating NaNs.
    """
    dense = np.asarray(dense, dtype=np.float64)
    name = canonical_metric(metric)
    if name == "minkowski" and r < 1:
        raise InvalidOrder(f"order must be >= 1, got {r}")
    if name == "cosine":
        norms = np.sqrt((dense * dense).sum(axis=1))
        zero_rows = np.flatnonzero(norms == 0.0)
        if zero_rows.size:
            raise ZeroVector(
                f"zero vectors at rows {zero_rows.tolist()[:10]} cannot be compared"
            )
    if name == "mahalanobis" and ctx is None:
        ctx = MahalanobisContext.from_data(dense)
    values = kernels.pairwise_distances(
        dense,
        name,
        r=r,
        transform=ctx.transform if name == "mahalanobis" else None,
        backend=backend,
    )
    np.fill_diagonal(values, 0.0)
    return ProximityMatrix(kind="distance", values=values, metric=name)


def build_proximity_from_callable(dense: np.ndarray, fn) -> ProximityMatrix:
    """Reference construction: one call per unordered pair, n(n-1)/2 in total."""
    dense = np.asarray(dense, dtype=np.float64)
    n = dense.shape[0]
    values = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            v = fn(dense[i], dense[j])
            values[i, j] = v
            values[j, i] = v
    return ProximityMatrix(kind="distance", values=values, metric=getattr(fn, "__name__", ""))


def to_similarity(matrix: ProximityMatrix) -> ProximityMatrix:
    """Map distances into [0, 1] via s = 1 - d/d_max (unit diagonal).

    The most distant pair gets similarity 0 and ordering is reversed exactly;
    an all-zero distance matrix maps to all ones.
    """
    if matrix.kind != "distance":
        raise ValueError("to_similarity expects a distance matrix")
    off = matrix.off_diagonal()
    d_max = float(off.max()) if off.size else 0.0
    if d_max > 0.0:
        values = 1.0 - matrix.values / d_max
    else:
        values = np.ones_like(matrix.values)
    np.fill_diagonal(values, 1.0)
    return ProximityMatrix(kind="similarity", values=values, metric=matrix.metric)


def write_proximity(matrix: ProximityMatrix, path) -> None:
    """Binary dump: magic, kind byte, u32 n, metric name, row-major f64 LE."""
    name = matrix.metric.encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<BI", 1 if matrix.kind == "similarity" else 0, matrix.n))
        fh.write(struct.pack("<I", len(name)))
        fh.write(name)
        fh.write(matrix.values.astype("<f8").tobytes(order="C"))


def read_proximity(path) -> ProximityMatrix:
    with open(path, "rb") as fh:
        if fh.read(len(MAGIC)) != MAGIC:
            raise ValueError("not a proximity dump (bad magic)")
        kind_byte, n = struct.unpack("<BI", fh.read(5))
        (name_len,) = struct.unpack("<I", fh.read(4))
        metric = fh.read(name_len).decode("utf-8")
        values = np.frombuffer(fh.read(8 * n * n), dtype="<f8").reshape(n, n).copy()
    return ProximityMatrix(
        kind="similarity" if kind_byte else "distance", values=values, metric=metric
    )
