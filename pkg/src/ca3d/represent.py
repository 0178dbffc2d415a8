"""Document vectorization: bag-of-words or character n-grams, tf-idf weighting.

A corpus becomes a term-document matrix whose columns are sparse document
vectors over a shared vocabulary built in first-appearance order; raw term
frequencies are then reweighted by ``tf * ln(N / n_i)``.
"""

from __future__ import annotations

import json
import math
import re
import warnings
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import EmptyCorpus, TextTooShortWarning
from .ingest import Corpus, RawDocument

_WORD = re.compile(r"[^\W\d_]+", re.UNICODE)
_WS = re.compile(r"\s+")

NGRAM_MIN = 2
NGRAM_MAX = 5


def default_stop_words() -> frozenset[str]:
    text = resources.files("ca3d.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return frozenset(w for w in text.split() if w)


def load_lemma_map(path: str | Path) -> dict[str, str]:
    """Read a ``surface<TAB>lemma`` file into a lookup table."""
    out: dict[str, str] = {}
    for line in Path(path).read_text("utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        surface, _, lemma = line.partition("\t")
        if lemma:
            out[surface.strip().lower()] = lemma.strip().lower()
    return out


@dataclass(frozen=True)
class TokenizerConfig:
    stop_words: frozenset[str]
    lemma_map: dict[str, str]

    @classmethod
    def default(cls) -> "TokenizerConfig":
        return cls(stop_words=default_stop_words(), lemma_map={})

    @classmethod
    def from_json(cls, path: str | Path) -> "TokenizerConfig":
        """Config file with optional ``stop_words`` / ``lemma_map`` file paths."""
        path = Path(path)
        payload = json.loads(path.read_text("utf-8"))
        stop_words = default_stop_words()
        if "stop_words" in payload:
            sw_path = path.parent / payload["stop_words"]
            stop_words = frozenset(
                w for w in sw_path.read_text("utf-8").split() if w
            )
        lemma_map = {}
        if "lemma_map" in payload:
            lemma_map = load_lemma_map(path.parent / payload["lemma_map"])
        return cls(stop_words=stop_words, lemma_map=lemma_map)


def document_text(doc: RawDocument) -> str:
    """Title and body, concatenated."""
    return f"{doc.title} {doc.body}".strip()


def tokenize_bag_of_words(
    doc: RawDocument, config: TokenizerConfig | None = None
) -> Counter:
    """Lowercased alphabetic tokens with stop words removed and lemmas applied."""
    config = config or TokenizerConfig.default()
    counts: Counter = Counter()
    for token in _WORD.findall(document_text(doc).lower()):
        if token in config.stop_words:
            continue
        counts[config.lemma_map.get(token, token)] += 1
    return counts


def normalize_for_ngrams(text: str) -> str:
    return _WS.sub(" ", text.lower()).strip()


def char_ngrams(text: str, n: int) -> Counter:
    """Sliding window of ``n`` characters over the normalized text.

    Texts shorter than the window produce an empty multiset and a
    :class:`TextTooShortWarning`.
    """
    if not NGRAM_MIN <= n <= NGRAM_MAX:
        raise ValueError(f"n-gram order must be in {NGRAM_MIN}..{NGRAM_MAX}, got {n}")
    normalized = normalize_for_ngrams(text)
    if len(normalized) < n:
        warnings.warn(
            f"text of length {len(normalized)} is shorter than n={n}",
            TextTooShortWarning,
            stacklevel=2,
        )
        return Counter()
    return Counter(normalized[i : i + n] for i in range(len(normalized) - n + 1))


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    index: dict[str, int]
    doc_frequency: dict[str, int]

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class DocumentVector:
    doc_id: int
    entries: dict[int, float]


@dataclass(frozen=True)
class TermDocumentMatrix:
    vocabulary: Vocabulary
    columns: tuple[DocumentVector, ...]
    n_docs: int


def _document_counts(
    corpus: Corpus, mode: str, n: int, config: TokenizerConfig | None
) -> list[Counter]:
    if mode == "bag":
        cfg = config or TokenizerConfig.default()
        return [tokenize_bag_of_words(doc, cfg) for doc in corpus.documents]
    if mode == "ngram":
        return [char_ngrams(document_text(doc), n) for doc in corpus.documents]
    raise ValueError(f"unknown representation mode: {mode!r}")


def build_matrix(
    corpus: Corpus,
    mode: str = "bag",
    n: int = 3,
    config: TokenizerConfig | None = None,
) -> TermDocumentMatrix:
    """Raw term-frequency matrix over a vocabulary in first-appearance order."""
    if len(corpus) == 0:
        raise EmptyCorpus("cannot build a matrix from an empty corpus")
    per_doc = _document_counts(corpus, mode, n, config)

    index: dict[str, int] = {}
    doc_frequency: dict[str, int] = {}
    columns = []
    for doc, counts in zip(corpus.documents, per_doc):
        entries: dict[int, float] = {}
        for term, count in counts.items():
            idx = index.setdefault(term, len(index))
            entries[idx] = float(count)
            doc_frequency[term] = doc_frequency.get(term, 0) + 1
        columns.append(DocumentVector(doc_id=doc.doc_id, entries=entries))

    vocab = Vocabulary(
        terms=tuple(index), index=index, doc_frequency=doc_frequency
    )
    return TermDocumentMatrix(
        vocabulary=vocab, columns=tuple(columns), n_docs=len(corpus)
    )


def apply_tfidf(matrix: TermDocumentMatrix) -> TermDocumentMatrix:
    """Reweight every entry by ``tf * ln(N / n_i)``.

    Terms present in every document get weight 0 and drop out of the sparse
    columns (ln 1 = 0); the vocabulary itself is unchanged.
    """
    n_docs = matrix.n_docs
    terms = matrix.vocabulary.terms
    idf = {
        idx: math.log(n_docs / matrix.vocabulary.doc_frequency[term])
        for idx, term in enumerate(terms)
    }
    columns = []
    for col in matrix.columns:
        entries = {
            idx: tf * idf[idx] for idx, tf in col.entries.items() if idf[idx] > 0.0
        }
        columns.append(DocumentVector(doc_id=col.doc_id, entries=entries))
    return TermDocumentMatrix(
        vocabulary=matrix.vocabulary, columns=tuple(columns), n_docs=n_docs
    )


def to_dense(matrix: TermDocumentMatrix) -> np.ndarray:
    """Densify to (n_docs, n_terms) float64, one row per document."""
    out = np.zeros((matrix.n_docs, len(matrix.vocabulary)), dtype=np.float64)
    for row, col in enumerate(matrix.columns):
        for idx, weight in col.entries.items():
            out[row, idx] = weight
    return out


def matrix_to_json(matrix: TermDocumentMatrix) -> str:
    """Export for debugging and document inspection in the viewer."""
    payload = {
        "vocabulary": list(matrix.vocabulary.terms),
        "n_docs": matrix.n_docs,
        "columns": [
            {
                "doc_id": col.doc_id,
                "entries": [[idx, col.entries[idx]] for idx in sorted(col.entries)],
            }
            for col in matrix.columns
        ],
    }
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))
