"""Attribute selection over the term-document matrix: chi-square and information gain."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyMatrix, UnlabeledDocument
from .evaluate import ClassLabeling
from .represent import DocumentVector, TermDocumentMatrix, Vocabulary


@dataclass(frozen=True)
class ChiSquareTable:
    """Per-cell contributions to the term/document independence statistic.

    Frequencies are occurrence counts normalized by the grand total, so
    ``row_marginals`` and ``col_marginals`` each sum to 1.  Contributions for
    cells with a zero count are not stored but can be computed on demand.
    """

    n_terms: int
    n_docs: int
    total: float
    row_marginals: np.ndarray   # f_i  per term
    col_marginals: np.ndarray   # f_j  per doc
    occupied: tuple[dict[int, float], ...]  # per doc: term index -> contribution

    def contribution(self, term: int, doc: int) -> float:
        cell = self.occupied[doc].get(term)
        if cell is not None:
            return cell
        expected = self.row_marginals[term] * self.col_marginals[doc]
        # an absent occurrence still deviates from independence by its
        # expected mass, unless a whole row or column is empty
        return float(self.total * expected) if expected > 0.0 else 0.0


@dataclass(frozen=True)
class GainTable:
    """Information gain per term plus the probability tables behind it."""

    gains: np.ndarray           # (n_terms,)
    class_priors: np.ndarray    # (n_classes,)
    term_presence: np.ndarray   # (n_terms,)  Pr(term occurs in a document)
    cond_present: np.ndarray    # (n_classes, n_terms)  Pr(class | term present)
    cond_absent: np.ndarray     # (n_classes, n_terms)  Pr(class | term absent)


@dataclass(frozen=True)
class ReductionReport:
    mode: str
    terms_before: int
    terms_after: int
    kept: frozenset[int]

    def to_json(self) -> str:
        return json.dumps(
            {
                "mode": self.mode,
                "terms_before": self.terms_before,
                "terms_after": self.terms_after,
                "kept": sorted(self.kept),
            },
            separators=(",", ":"),
        )

    def csv_row(self, n_label: str) -> str:
        return f"{self.mode},{n_label},{self.terms_before},{self.terms_after}"


def chi2_contributions(matrix: TermDocumentMatrix) -> ChiSquareTable:
    """Contribution of every (term, doc) cell: N * (f_ij - f_i*f_j)^2 / (f_i*f_j)."""
    n_terms = len(matrix.vocabulary)
    n_docs = matrix.n_docs
    row_tot = np.zeros(n_terms)
    col_tot = np.zeros(n_docs)
    for j, col in enumerate(matrix.columns):
        for i, count in col.entries.items():
            row_tot[i] += count
            col_tot[j] += count
    total = float(row_tot.sum())
    if total <= 0.0:
        raise EmptyMatrix("matrix has no non-zero entry")

    f_row = row_tot / total
    f_col = col_tot / total
    occupied = []
    for j, col in enumerate(matrix.columns):
        cells = {}
        for i, count in col.entries.items():
            f_ij = count / total
            expected = f_row[i] * f_col[j]
            cells[i] = total * (f_ij - expected) ** 2 / expected
        occupied.append(cells)
    return ChiSquareTable(
        n_terms=n_terms,
        n_docs=n_docs,
        total=total,
        row_marginals=f_row,
        col_marginals=f_col,
        occupied=tuple(occupied),
    )


def chi2_select(table: ChiSquareTable, k_per_doc: int) -> ReductionReport:
    """Keep, for every document, its ``k_per_doc`` highest-contribution terms.

    Only terms occurring in the document are candidates; ties break toward
    the lower term index.  The kept set is the union over documents.
    """
    if k_per_doc < 1:
        raise ValueError(f"k_per_doc must be >= 1, got {k_per_doc}")
    kept: set[int] = set()
    for cells in table.occupied:
        ranked = sorted(cells.items(), key=lambda item: (-item[1], item[0]))
        kept.update(idx for idx, _ in ranked[:k_per_doc])
    return ReductionReport(
        mode="chi2",
        terms_before=table.n_terms,
        terms_after=len(kept),
        kept=frozenset(kept),
    )


def _plogp(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    mask = p > 0.0
    out[mask] = p[mask] * np.log(p[mask])
    return out


def information_gain(
    matrix: TermDocumentMatrix, labels: ClassLabeling
) -> GainTable:
    """Reduction in class entropy from observing each term's presence/absence.

    Every document must carry at least one reference class; multi-label
    documents contribute fractional weight 1/|labels| to each of theirs.
    """
    unlabeled = [c.doc_id for c in matrix.columns if not labels.class_of.get(c.doc_id)]
    if unlabeled:
        raise UnlabeledDocument(f"documents without classes: {unlabeled[:10]}")

    n_terms = len(matrix.vocabulary)
    n_docs = matrix.n_docs
    classes = labels.classes
    class_idx = {c: i for i, c in enumerate(classes)}

    # per-document fractional class weights
    weights = np.zeros((n_docs, len(classes)))
    for j, col in enumerate(matrix.columns):
        doc_labels = labels.class_of[col.doc_id]
        w = 1.0 / len(doc_labels)
        for c in doc_labels:
            weights[j, class_idx[c]] = w

    presence = np.zeros((n_docs, n_terms), dtype=bool)
    for j, col in enumerate(matrix.columns):
        for i in col.entries:
            presence[j, i] = True

    priors = weights.sum(axis=0) / n_docs
    docs_with = presence.sum(axis=0).astype(np.float64)          # per term
    pr_t = docs_with / n_docs

    class_mass_with = weights.T @ presence                        # (classes, terms)
    class_mass_without = priors[:, None] * n_docs - class_mass_with
    with np.errstate(invalid="ignore", divide="ignore"):
        cond_present = np.where(docs_with > 0, class_mass_with / docs_with, 0.0)
        cond_absent = np.where(
            n_docs - docs_with > 0, class_mass_without / (n_docs - docs_with), 0.0
        )
    # clip tiny negatives from the subtraction above
    cond_absent = np.clip(cond_absent, 0.0, None)

    class_entropy = -_plogp(priors).sum()
    gains = (
        class_entropy
        + pr_t * _plogp(cond_present).sum(axis=0)
        + (1.0 - pr_t) * _plogp(cond_absent).sum(axis=0)
    )
    # exact zero for degenerate columns, not -0.0 or rounding dust
    gains = np.where(np.abs(gains) < 1e-15, 0.0, gains)
    return GainTable(
        gains=gains,
        class_priors=priors,
        term_presence=pr_t,
        cond_present=cond_present,
        cond_absent=cond_absent,
    )


def infogain_select(table: GainTable, k: int) -> ReductionReport:
    """Top-k terms by gain, ties broken toward the lower term index."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    order = sorted(range(len(table.gains)), key=lambda i: (-table.gains[i], i))
    kept = frozenset(order[:k])
    return ReductionReport(
        mode="infogain",
        terms_before=len(table.gains),
        terms_after=len(kept),
        kept=kept,
    )


def project(
    matrix: TermDocumentMatrix, kept: frozenset[int] | set[int]
) -> tuple[TermDocumentMatrix, tuple[int, ...]]:
    """Restrict columns to the kept terms, re-indexing the vocabulary densely.

    Documents whose projected vector is empty stay in the matrix as zero
    vectors; their ids are returned alongside.
    """
    old_order = sorted(kept)
    remap = {old: new for new, old in enumerate(old_order)}
    terms = tuple(matrix.vocabulary.terms[i] for i in old_order)
    vocab = Vocabulary(
        terms=terms,
        index={t: i for i, t in enumerate(terms)},
        doc_frequency={t: matrix.vocabulary.doc_frequency[t] for t in terms},
    )
    columns = []
    emptied = []
    for col in matrix.columns:
        entries = {
            remap[i]: w for i, w in col.entries.items() if i in remap
        }
        if not entries:
            emptied.append(col.doc_id)
        columns.append(DocumentVector(doc_id=col.doc_id, entries=entries))
    projected = TermDocumentMatrix(
        vocabulary=vocab, columns=tuple(columns), n_docs=matrix.n_docs
    )
    return projected, tuple(emptied)
