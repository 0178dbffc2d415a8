"""Cluster validation against reference classes: precision, recall, entropy, F-measure."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyClass, EmptyCluster, EmptyOverlap
from .ingest import Corpus

METRICS_CSV_HEADER = (
    "metric,n_docs,representation,distance,threshold_level,"
    "n_clusters,time_ms,entropy_pct,fmeasure_pct"
)


@dataclass(frozen=True)
class ClassLabeling:
    """Reference classes per document; unlabeled documents are not represented."""

    class_of: dict[int, frozenset[str]]
    classes: tuple[str, ...]

    @classmethod
    def from_corpus(cls, corpus: Corpus) -> "ClassLabeling":
        class_of = {
            d.doc_id: d.labels for d in corpus.documents if d.labels
        }
        names: set[str] = set()
        for labels in class_of.values():
            names.update(labels)
        return cls(class_of=class_of, classes=tuple(sorted(names)))

    def class_size(self, name: str) -> int:
        return sum(1 for labels in self.class_of.values() if name in labels)


@dataclass(frozen=True)
class ContingencyTable:
    """Counts of reference class i versus cluster k over the evaluated documents.

    Multi-label documents count once per label in a row but once in cluster
    sizes and in the total.
    """

    classes: tuple[str, ...]
    counts: np.ndarray          # (n_classes, n_clusters) int64
    cluster_sizes: np.ndarray   # (n_clusters,) int64
    n: int                      # evaluated documents
    excluded: tuple[int, ...] = field(default=())

    @property
    def class_sizes(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def n_clusters(self) -> int:
        return len(self.cluster_sizes)


def contingency(assignment, labeling: ClassLabeling) -> ContingencyTable:
    """Cross-tabulate a ClusterAssignment against reference classes.

    Documents that are unplaced or unlabeled are excluded and reported in
    ``excluded``.
    """
    placed = set(assignment.cluster_of)
    labeled = set(labeling.class_of)
    common = placed & labeled
    if not common:
        raise EmptyOverlap("no document is both placed and labeled")
    excluded = tuple(sorted((placed | labeled) - common))

    # keep only classes and clusters that actually occur among evaluated docs
    classes = tuple(
        c
        for c in labeling.classes
        if any(c in labeling.class_of[d] for d in common)
    )
    class_idx = {c: i for i, c in enumerate(classes)}
    cluster_ids = sorted({assignment.cluster_of[d] for d in common})
    cluster_idx = {k: j for j, k in enumerate(cluster_ids)}

    counts = np.zeros((len(classes), len(cluster_ids)), dtype=np.int64)
    sizes = np.zeros(len(cluster_ids), dtype=np.int64)
    for d in sorted(common):
        j = cluster_idx[assignment.cluster_of[d]]
        sizes[j] += 1
        for c in labeling.class_of[d]:
            counts[class_idx[c], j] += 1
    return ContingencyTable(
        classes=classes, counts=counts, cluster_sizes=sizes, n=len(common),
        excluded=excluded,
    )


def precision(table: ContingencyTable, i: int, k: int) -> float:
    """Share of cluster k's documents that belong to class i."""
    if table.cluster_sizes[k] == 0:
        raise EmptyCluster(f"cluster column {k} is empty")
    return float(table.counts[i, k]) / float(table.cluster_sizes[k])


def recall(table: ContingencyTable, i: int, k: int) -> float:
    """Share of class i's documents that ended up in cluster k."""
    size = int(table.class_sizes[i])
    if size == 0:
        raise EmptyClass(f"class row {i} is empty")
    return float(table.counts[i, k]) / float(size)


def entropy(table: ContingencyTable) -> float:
    """Cluster-size-weighted impurity (natural log); 0 means every cluster is pure."""
    total = 0.0
    n = float(table.n)
    for k in range(table.n_clusters):
        size = float(table.cluster_sizes[k])
        if size == 0:
            continue
        inner = 0.0
        for i in range(len(table.classes)):
            p = float(table.counts[i, k]) / size
            if p > 0.0:
                inner -= p * math.log(p)
        total += (size / n) * inner
    return total


def f_measure(table: ContingencyTable, beta: float = 1.0) -> float:
    """Class-size-weighted best per-cluster combination of recall and precision.

    ``beta=1`` gives the harmonic mean 2rp/(r+p); pairs with r=p=0 contribute 0.
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    total = 0.0
    n = float(table.n)
    for i in range(len(table.classes)):
        size = float(table.class_sizes[i])
        if size == 0:
            continue
        best = 0.0
        for k in range(table.n_clusters):
            c = float(table.counts[i, k])
            if c == 0.0:
                continue
            r = c / size
            p = c / float(table.cluster_sizes[k])
            score = ((1.0 + beta) * r * p) / (beta * r + p)
            if score > best:
                best = score
        total += (size / n) * best
    return total


def metrics_row(
    metric: str,
    n_docs: int,
    representation: str,
    distance: str,
    threshold_level,
    n_clusters: int,
    time_ms: int,
    entropy_value: float | None,
    fmeasure_value: float | None,
) -> dict:
    """One metrics-CSV row; percentage columns are blank when no labels exist."""
    return {
        "metric": metric,
        "n_docs": n_docs,
        "representation": representation,
        "distance": distance,
        "threshold_level": threshold_level,
        "n_clusters": n_clusters,
        "time_ms": time_ms,
        "entropy_pct": "" if entropy_value is None else f"{entropy_value * 100:.4f}",
        "fmeasure_pct": (
            "" if fmeasure_value is None else f"{fmeasure_value * 100:.4f}"
        ),
    }


def metrics_row_csv(row: dict) -> str:
    return ",".join(str(row[k]) for k in METRICS_CSV_HEADER.split(","))
