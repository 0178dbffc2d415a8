"""Corpus loading: Reuters-21578 SGML files, plain-text directories, corpus JSON.

All loaders are deterministic: files are visited in lexicographic order and
document ids are assigned as the contiguous range 1..n.
"""

from __future__ import annotations

import html
import json
import re
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import EmptyCorpus, EncodingError, MalformedSgml, MissingLabel, OutOfRange


@dataclass(frozen=True)
class RawDocument:
    doc_id: int
    title: str
    body: str
    labels: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Corpus:
    name: str
    documents: tuple[RawDocument, ...]

    def __len__(self) -> int:
        return len(self.documents)

    @property
    def label_universe(self) -> frozenset[str]:
        out: set[str] = set()
        for doc in self.documents:
            out.update(doc.labels)
        return frozenset(out)


_REUTERS_OPEN = re.compile(r"<REUTERS\b[^>]*>", re.IGNORECASE)
_REUTERS_CLOSE = re.compile(r"</REUTERS>", re.IGNORECASE)
_TITLE = re.compile(r"<TITLE>(.*?)</TITLE>", re.IGNORECASE | re.DOTALL)
_BODY = re.compile(r"<BODY>(.*?)</BODY>", re.IGNORECASE | re.DOTALL)
_BODY_OPEN = re.compile(r"<BODY>(.*)\Z", re.IGNORECASE | re.DOTALL)
_TOPICS = re.compile(r"<TOPICS>(.*?)</TOPICS>", re.IGNORECASE | re.DOTALL)
_D_ELEM = re.compile(r"<D>(.*?)</D>", re.IGNORECASE | re.DOTALL)
# strip control characters left behind by numeric entities, keep \t and \n
_CONTROL = re.compile(r"[\x00-\x08\x0b\x0c\x0e-\x1f\x7f]")


def _decode(data: bytes) -> str:
    if b"\x00" in data:
        raise EncodingError("input contains NUL bytes; not a text file")
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        return data.decode("latin-1")


def _clean(text: str) -> str:
    return _CONTROL.sub("", html.unescape(text)).strip()


def parse_reuters_sgml(data: bytes) -> list[RawDocument]:
    """Parse one Reuters-21578 ``.sgm`` file into documents, in file order.

    Permissive by design: unknown tags are skipped, entities are decoded, and
    an unterminated final document is read through to end of file.  TOPICS
    ``<D>`` elements become labels; a missing BODY yields an empty body.
    """
    text = _decode(data)
    opens = list(_REUTERS_OPEN.finditer(text))
    if not opens:
        raise MalformedSgml("no <REUTERS> element found")
    docs: list[RawDocument] = []
    for pos, match in enumerate(opens):
        start = match.end()
        limit = opens[pos + 1].start() if pos + 1 < len(opens) else len(text)
        close = _REUTERS_CLOSE.search(text, start, limit)
        block = text[start : close.start() if close else limit]

        title_m = _TITLE.search(block)
        body_m = _BODY.search(block) or _BODY_OPEN.search(block)
        topics_m = _TOPICS.search(block)
        labels = frozenset(
            _clean(d)
            for d in (_D_ELEM.findall(topics_m.group(1)) if topics_m else [])
            if _clean(d)
        )
        docs.append(
            RawDocument(
                doc_id=pos + 1,
                title=_clean(title_m.group(1)) if title_m else "",
                body=_clean(body_m.group(1)) if body_m else "",
                labels=labels,
            )
        )
    return docs


def load_reuters_corpus(path: str | Path, name: str | None = None) -> Corpus:
    """Load a ``.sgm`` file, or every ``.sgm`` in a directory (sorted by name)."""
    path = Path(path)
    files = sorted(path.glob("*.sgm")) if path.is_dir() else [path]
    if not files:
        raise EmptyCorpus(f"no .sgm files in {path}")
    docs: list[RawDocument] = []
    for f in files:
        for doc in parse_reuters_sgml(f.read_bytes()):
            docs.append(replace(doc, doc_id=len(docs) + 1))
    return Corpus(name=name or path.stem, documents=tuple(docs))


def _read_labels_file(path: Path) -> dict[str, frozenset[str]]:
    out: dict[str, frozenset[str]] = {}
    for line in _decode(path.read_bytes()).splitlines():
        line = line.strip()
        if not line:
            continue
        filename, _, rest = line.partition("\t")
        labels = frozenset(p.strip() for p in rest.split(",") if p.strip())
        out[filename] = labels
    return out


def load_plaintext_corpus(
    directory: str | Path,
    labels_path: str | Path | None = None,
    name: str | None = None,
) -> Corpus:
    """Load one document per ``.txt`` file; optional tab-separated labels file.

    The labels file has one line per document: ``filename<TAB>label1,label2``.
    Every file in the directory must be covered when a labels file is given.
    """
    directory = Path(directory)
    files = sorted(directory.glob("*.txt"))
    if not files:
        raise EmptyCorpus(f"no .txt files in {directory}")
    labels = _read_labels_file(Path(labels_path)) if labels_path else None
    docs = []
    for doc_id, f in enumerate(files, start=1):
        if labels is not None and f.name not in labels:
            raise MissingLabel(f"labels file has no entry for {f.name}")
        docs.append(
            RawDocument(
                doc_id=doc_id,
                title=f.stem,
                body=_decode(f.read_bytes()),
                labels=labels[f.name] if labels is not None else frozenset(),
            )
        )
    return Corpus(name=name or directory.name, documents=tuple(docs))


def select_first_n(corpus: Corpus, n: int) -> Corpus:
    """First ``n`` documents in corpus order, ids renumbered 1..n."""
    if not 1 <= n <= len(corpus):
        raise OutOfRange(f"n={n} outside 1..{len(corpus)}")
    docs = tuple(
        replace(doc, doc_id=i + 1) for i, doc in enumerate(corpus.documents[:n])
    )
    return Corpus(name=corpus.name, documents=docs)


def corpus_to_json(corpus: Corpus) -> str:
    payload = {
        "name": corpus.name,
        "documents": [
            {
                "id": d.doc_id,
                "title": d.title,
                "body": d.body,
                "labels": sorted(d.labels),
            }
            for d in corpus.documents
        ],
    }
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def corpus_from_json(text: str) -> Corpus:
    payload = json.loads(text)
    docs = tuple(
        RawDocument(
            doc_id=d["id"],
            title=d.get("title", ""),
            body=d.get("body", ""),
            labels=frozenset(d.get("labels", [])),
        )
        for d in payload["documents"]
    )
    if not docs:
        raise EmptyCorpus("corpus JSON contains no documents")
    return Corpus(name=payload.get("name", "corpus"), documents=docs)


def load_corpus(
    path: str | Path,
    fmt: str,
    labels_path: str | Path | None = None,
    name: str | None = None,
) -> Corpus:
    """Dispatch on corpus format: ``reuters`` | ``plaintext`` | ``json``."""
    if fmt == "reuters":
        return load_reuters_corpus(path, name=name)
    if fmt == "plaintext":
        return load_plaintext_corpus(path, labels_path=labels_path, name=name)
    if fmt == "json":
        return corpus_from_json(_decode(Path(path).read_bytes()))
    raise ValueError(f"unknown corpus format: {fmt!r}")
