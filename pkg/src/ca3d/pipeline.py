"""End-to-end pipeline: corpus -> vectors -> reduction -> proximity -> automaton
-> clusters -> metrics, plus the 10-level threshold sweep.

Everything here is seedless and deterministic: repeated runs of the same spec
produce byte-identical grid JSON and metrics rows.
"""

from __future__ import annotations

import dataclasses
import json
import math
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .ca_engine import (
    CaConfig,
    ClusterAssignment,
    Grid,
    extract_clusters,
    grid_state_json,
    run,
)
from .errors import DegenerateMatrixWarning, EmptyCorpus, InvalidSpec
from .evaluate import (
    METRICS_CSV_HEADER,
    ClassLabeling,
    contingency,
    entropy,
    f_measure,
    metrics_row,
    metrics_row_csv,
)
from .ingest import Corpus, load_corpus, select_first_n
from .kernels import resolve_backend
from .proximity import (
    ProximityMatrix,
    SWEEP_DISTANCES,
    build_proximity,
    canonical_metric,
    to_similarity,
)
from .reduce import chi2_contributions, chi2_select, infogain_select, information_gain, project
from .represent import (
    TermDocumentMatrix,
    TokenizerConfig,
    apply_tfidf,
    build_matrix,
    to_dense,
)

REPRESENTATIONS = ("bag", "ngram")
REDUCTIONS = ("none", "chi2", "infogain")
CORPUS_FORMATS = ("reuters", "plaintext", "json")

# scale for the deterministic duration estimate in the metrics row:
# vectorized placement work runs at roughly this many operations per ms
OPS_PER_MS = 100_000


@dataclass(frozen=True)
class RunSpec:
    """Everything one clustering run depends on; validated before any work."""

    corpus: str
    corpus_format: str = "json"
    labels: str | None = None
    name: str | None = None
    n_docs: int | None = None
    representation: str = "bag"
    ngram_n: int = 3
    reduction: str = "none"
    k: int = 50
    distance: str = "cosine"
    minkowski_r: float = 2.0
    threshold_level: int | None = 5
    threshold: float | None = None
    strategy: str = "neighborhood"
    neighborhood: str = "moore"
    beta: float = 1.0
    tokenizer_config: str | None = None
    out_dir: str | None = None

    def validate(self) -> None:
        problems = []
        if self.corpus_format not in CORPUS_FORMATS:
            problems.append(f"corpus_format must be one of {CORPUS_FORMATS}")
        if self.representation not in REPRESENTATIONS:
            problems.append(f"representation must be one of {REPRESENTATIONS}")
        if self.representation == "ngram" and not 2 <= self.ngram_n <= 5:
            problems.append("ngram_n must be in 2..5")
        if self.reduction not in REDUCTIONS:
            problems.append(f"reduction must be one of {REDUCTIONS}")
        if self.reduction != "none" and self.k < 1:
            problems.append("k must be >= 1")
        try:
            canonical_metric(self.distance)
        except ValueError as exc:
            problems.append(str(exc))
        if self.minkowski_r < 1:
            problems.append("minkowski_r must be >= 1")
        has_level = self.threshold_level is not None
        has_thr = self.threshold is not None
        if has_level == has_thr:
            problems.append("exactly one of threshold_level / threshold required")
        if has_level and not 1 <= self.threshold_level <= 10:
            problems.append("threshold_level must be in 1..10")
        if has_thr and not 0.0 <= self.threshold <= 1.0:
            problems.append("threshold must be in [0, 1]")
        if self.strategy not in ("neighborhood", "linear"):
            problems.append("strategy must be neighborhood or linear")
        if self.neighborhood not in ("moore", "von_neumann"):
            problems.append("neighborhood must be moore or von_neumann")
        if self.beta <= 0:
            problems.append("beta must be positive")
        if self.n_docs is not None and self.n_docs < 1:
            problems.append("n_docs must be >= 1")
        if problems:
            raise InvalidSpec("; ".join(problems))

    @classmethod
    def from_dict(cls, payload: dict) -> "RunSpec":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise InvalidSpec(f"unknown spec fields: {sorted(unknown)}")
        if payload.get("threshold") is not None and "threshold_level" not in payload:
            payload = {**payload, "threshold_level": None}
        return cls(**payload)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def representation_label(self) -> str:
        return "bag" if self.representation == "bag" else f"ngram({self.ngram_n})"

    def distance_label(self) -> str:
        name = canonical_metric(self.distance)
        if name == "minkowski":
            return f"minkowski(r={self.minkowski_r:g})"
        return name


def resolve_threshold(level: int, similarity: ProximityMatrix) -> float:
    """Map a 1..10 level onto the observed similarity range.

    Level 1 sits near the top of the range (tight joins, many small clusters),
    level 10 at the bottom (loose joins, few large clusters).
    """
    if not 1 <= level <= 10:
        raise InvalidSpec(f"threshold level must be 1..10, got {level}")
    off = similarity.off_diagonal()
    if off.size == 0:
        return 1.0
    s_min = float(off.min())
    s_max = float(off.max())
    if s_min == s_max:
        warnings.warn(
            "all off-diagonal similarities are equal; threshold degenerates",
            DegenerateMatrixWarning,
            stacklevel=2,
        )
        return s_min
    return s_min + (10 - level) * (s_max - s_min) / 10.0


@dataclass
class PreparedCorpus:
    """Vectorization output shared by every run over the same spec prefix."""

    corpus: Corpus
    matrix: TermDocumentMatrix  # tf-idf weighted, reduced
    dense: np.ndarray           # rows aligned with matrix.columns
    doc_ids: tuple[int, ...]    # documents with non-zero vectors, corpus order
    keep_rows: np.ndarray
    quarantined: tuple[int, ...]
    labeling: ClassLabeling
    reduction_report: object | None


@dataclass
class PipelineResult:
    spec: RunSpec
    prepared: PreparedCorpus
    assignment: ClusterAssignment
    grid: Grid
    grid_json: str
    row: dict
    entropy_value: float | None
    fmeasure_value: float | None
    resolved_threshold: float
    ca_time_ms: int     # deterministic work-based estimate (metrics row)
    ca_wall_ms: float   # measured CA run + extraction
    total_time_s: float
    unplaced: tuple[int, ...]
    distances: ProximityMatrix | None = None


def _reduce_matrix(spec: RunSpec, matrix: TermDocumentMatrix, corpus: Corpus):
    if spec.reduction == "none":
        return matrix, None
    if spec.reduction == "chi2":
        report = chi2_select(chi2_contributions(matrix), spec.k)
    else:
        labeling = ClassLabeling.from_corpus(corpus)
        report = infogain_select(information_gain(matrix, labeling), spec.k)
    projected, _ = project(matrix, report.kept)
    return projected, report


def prepare(spec: RunSpec, corpus: Corpus | None = None) -> PreparedCorpus:
    """Load, vectorize and reduce once; reusable across distances and levels."""
    spec.validate()
    if corpus is None:
        corpus = load_corpus(
            spec.corpus, spec.corpus_format, labels_path=spec.labels, name=spec.name
        )
    if spec.n_docs is not None and spec.n_docs < len(corpus):
        corpus = select_first_n(corpus, spec.n_docs)

    tok_config = (
        TokenizerConfig.from_json(spec.tokenizer_config)
        if spec.tokenizer_config
        else None
    )
    raw = build_matrix(
        corpus, mode=spec.representation, n=spec.ngram_n, config=tok_config
    )
    reduced, report = _reduce_matrix(spec, raw, corpus)
    weighted = apply_tfidf(reduced)
    dense = to_dense(weighted)

    # documents that vectorized to nothing cannot be compared; keep them out
    # of the automaton and report them as unplaced
    norms = np.sqrt((dense * dense).sum(axis=1))
    keep = np.flatnonzero(norms > 0.0)
    if keep.size == 0:
        raise EmptyCorpus("every document vectorized to a zero vector")
    quarantined = tuple(
        weighted.columns[int(i)].doc_id for i in np.flatnonzero(norms == 0.0)
    )
    doc_ids = tuple(weighted.columns[int(i)].doc_id for i in keep)
    return PreparedCorpus(
        corpus=corpus,
        matrix=weighted,
        dense=dense,
        doc_ids=doc_ids,
        keep_rows=keep,
        quarantined=quarantined,
        labeling=ClassLabeling.from_corpus(corpus),
        reduction_report=report,
    )


def _cluster_once(
    spec: RunSpec,
    prepared: PreparedCorpus,
    sim: ProximityMatrix,
    started: float,
) -> PipelineResult:
    threshold = (
        float(spec.threshold)
        if spec.threshold is not None
        else resolve_threshold(spec.threshold_level, sim)
    )
    config = CaConfig(
        neighborhood=spec.neighborhood,
        strategy=spec.strategy,
        similarity_threshold=threshold,
    )
    ca_started = time.perf_counter()
    result = run(prepared.doc_ids, sim, config)
    assignment = extract_clusters(
        result.grid,
        config.neighborhood,
        unplaced=tuple(result.unplaced) + prepared.quarantined,
    )
    ca_wall_ms = (time.perf_counter() - ca_started) * 1000.0
    # the metrics row must be byte-identical across reruns, so its duration
    # column is a deterministic estimate from the placement's operation
    # count; the measured wall time goes to provenance instead
    ca_time_ms = max(1, math.ceil(result.work / OPS_PER_MS))

    entropy_value = fmeasure_value = None
    labeling = prepared.labeling
    if labeling.class_of and (set(labeling.class_of) & set(assignment.cluster_of)):
        table = contingency(assignment, labeling)
        entropy_value = entropy(table)
        fmeasure_value = f_measure(table, beta=spec.beta)

    row = metrics_row(
        metric=canonical_metric(spec.distance),
        n_docs=len(prepared.corpus),
        representation=spec.representation_label(),
        distance=spec.distance_label(),
        threshold_level=(
            spec.threshold_level if spec.threshold is None else f"{threshold:g}"
        ),
        n_clusters=assignment.n_clusters,
        time_ms=ca_time_ms,
        entropy_value=entropy_value,
        fmeasure_value=fmeasure_value,
    )
    return PipelineResult(
        spec=spec,
        prepared=prepared,
        assignment=assignment,
        grid=result.grid,
        grid_json=grid_state_json(result.grid, assignment),
        row=row,
        entropy_value=entropy_value,
        fmeasure_value=fmeasure_value,
        resolved_threshold=threshold,
        ca_time_ms=ca_time_ms,
        ca_wall_ms=ca_wall_ms,
        total_time_s=time.perf_counter() - started,
        unplaced=tuple(result.unplaced) + prepared.quarantined,
    )


def run_pipeline(
    spec: RunSpec,
    corpus: Corpus | None = None,
    prepared: PreparedCorpus | None = None,
) -> PipelineResult:
    """Execute one clustering run; write artifacts when the spec names an
    output directory."""
    started = time.perf_counter()
    spec.validate()
    if prepared is None:
        prepared = prepare(spec, corpus=corpus)
    metric = canonical_metric(spec.distance)
    distances = build_proximity(
        prepared.dense[prepared.keep_rows], metric, r=spec.minkowski_r
    )
    sim = to_similarity(distances)
    result = _cluster_once(spec, prepared, sim, started)
    result.distances = distances
    if spec.out_dir:
        _write_artifacts(result)
    return result


def append_metrics_row(path: Path, row: dict) -> None:
    new_file = not path.exists()
    with open(path, "a", encoding="utf-8") as fh:
        if new_file:
            fh.write(METRICS_CSV_HEADER + "\n")
        fh.write(metrics_row_csv(row) + "\n")


REDUCTION_CSV_HEADER = "mode,n,before,after"


def _write_artifacts(result: PipelineResult) -> None:
    out_dir = Path(result.spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "grid_state.json").write_text(result.grid_json, encoding="utf-8")
    append_metrics_row(out_dir / "metrics.csv", result.row)
    report = result.prepared.reduction_report
    if report is not None:
        (out_dir / "reduction.json").write_text(report.to_json(), encoding="utf-8")
        n_label = (
            str(result.spec.ngram_n)
            if result.spec.representation == "ngram"
            else "bag"
        )
        path = out_dir / "reduction.csv"
        new_file = not path.exists()
        with open(path, "a", encoding="utf-8") as fh:
            if new_file:
                fh.write(REDUCTION_CSV_HEADER + "\n")
            fh.write(report.csv_row(n_label) + "\n")
    provenance = {
        "spec": result.spec.to_dict(),
        "resolved_threshold": result.resolved_threshold,
        "n_docs": len(result.prepared.corpus),
        "n_clusters": result.assignment.n_clusters,
        "unplaced": sorted(result.unplaced),
        "ca_time_ms": result.ca_time_ms,
        "ca_wall_ms": result.ca_wall_ms,
        "total_time_s": result.total_time_s,
        "backend": resolve_backend(),
        "version": __version__,
    }
    (out_dir / "provenance.json").write_text(
        json.dumps(provenance, indent=2, sort_keys=True), encoding="utf-8"
    )


@dataclass
class SweepResult:
    rows: list[dict] = field(default_factory=list)


def run_sweep(
    spec: RunSpec,
    distances=SWEEP_DISTANCES,
    levels=range(1, 11),
    corpus: Corpus | None = None,
) -> SweepResult:
    """One run per (distance, level); vectors are prepared once and proximity
    matrices once per distance."""
    spec.validate()
    prepared = prepare(spec, corpus=corpus)
    sweep = SweepResult()
    for distance in distances:
        sim = to_similarity(
            build_proximity(
                prepared.dense[prepared.keep_rows],
                canonical_metric(distance),
                r=spec.minkowski_r,
            )
        )
        for level in levels:
            run_spec = dataclasses.replace(
                spec,
                distance=distance,
                threshold_level=int(level),
                threshold=None,
                out_dir=None,
            )
            started = time.perf_counter()
            sweep.rows.append(_cluster_once(run_spec, prepared, sim, started).row)
    if spec.out_dir:
        out_dir = Path(spec.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "sweep.csv", "w", encoding="utf-8") as fh:
            fh.write(METRICS_CSV_HEADER + "\n")
            for row in sweep.rows:
                fh.write(metrics_row_csv(row) + "\n")
    return sweep
