"""Shared corpus fixtures.

Two synthetic labeled corpora drive most integration tests:

* 12 documents, 3 groups with disjoint vocabularies - perfectly separable,
  used to check full-pipeline cluster recovery.
* 30 documents, 3 groups sharing a dominant "signal" axis whose counts form
  a shifted Sidon set (all pairwise differences unique), so every distance
  metric yields fully distinct pairwise similarities.
"""

from __future__ import annotations

from pathlib import Path

import pytest

TWELVE_DOC_GROUPS = {
    "sports": [
        "goal referee stadium match striker goal",
        "referee stadium goal keeper match defender",
        "match striker keeper stadium referee goal",
        "defender keeper goal match stadium striker",
    ],
    "cooking": [
        "oven recipe flour butter saucepan whisk",
        "recipe saucepan butter oven flour simmer",
        "whisk flour oven recipe simmer butter",
        "butter simmer saucepan whisk recipe oven",
    ],
    "astronomy": [
        "telescope orbit nebula galaxy comet star",
        "orbit galaxy telescope star nebula photon",
        "comet star orbit nebula telescope galaxy",
        "photon nebula comet galaxy star telescope",
    ],
}

THIRTY_DOC_GROUP_WORDS = {
    "sports": ["goal", "referee", "stadium", "striker", "keeper", "corner"],
    "cooking": ["oven", "recipe", "flour", "butter", "saucepan", "simmer"],
    "astronomy": ["telescope", "orbit", "nebula", "galaxy", "comet", "photon"],
}


def write_plaintext_corpus(root: Path, docs: list[str], labels: list[str]) -> Path:
    """Write one .txt per document plus a tab-separated labels file."""
    root.mkdir(parents=True, exist_ok=True)
    lines = []
    for i, (text, label) in enumerate(zip(docs, labels), start=1):
        name = f"doc{i:02d}.txt"
        (root / name).write_text(text, encoding="utf-8")
        lines.append(f"{name}\t{label}")
    labels_path = root / "labels.tsv"
    labels_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return labels_path


def twelve_docs() -> tuple[list[str], list[str]]:
    docs, labels = [], []
    for label, texts in TWELVE_DOC_GROUPS.items():
        for text in texts:
            docs.append(text)
            labels.append(label)
    return docs, labels


def sidon_set(p: int) -> list[int]:
    # Erdos-Turan construction: all pairwise differences are distinct
    return [2 * k * p + (k * k) % p for k in range(p)]


def thirty_docs() -> tuple[list[str], list[str]]:
    n_per_group = 10
    band_gap = 6000
    shift = 4000
    block_count = 100
    base = sidon_set(37)[: 3 * n_per_group]
    counts = [
        base[d] + shift + (d // n_per_group) * band_gap
        for d in range(3 * n_per_group)
    ]
    diffs = {abs(a - b) for i, a in enumerate(counts) for b in counts[i + 1 :]}
    assert len(diffs) == len(counts) * (len(counts) - 1) // 2
    assert not (set(counts) & diffs)  # hub comparisons cannot tie with pair diffs

    docs, labels = [], []
    d = 0
    for label, words in THIRTY_DOC_GROUP_WORDS.items():
        for _ in range(n_per_group):
            tokens = []
            if d != 0:  # one doc skips "signal" so its idf stays positive
                tokens += ["signal"] * counts[d]
            if d != 15:  # same for "ambient"
                tokens += ["ambient"] * (2 + d)
            for w in words:
                tokens += [w] * block_count
            docs.append(" ".join(tokens))
            labels.append(label)
            d += 1
    return docs, labels


@pytest.fixture(scope="session")
def twelve_doc_dir(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("twelve")
    docs, labels = twelve_docs()
    write_plaintext_corpus(root, docs, labels)
    return root


@pytest.fixture(scope="session")
def thirty_doc_dir(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("thirty")
    docs, labels = thirty_docs()
    write_plaintext_corpus(root, docs, labels)
    return root


SGML_THREE_DOCS = b"""<!DOCTYPE lewis SYSTEM "lewis.dtd">
<REUTERS TOPICS="YES" LEWISSPLIT="TRAIN" CGISPLIT="TRAINING-SET" OLDID="5544" NEWID="1">
<DATE>26-FEB-1987 15:01:01.79</DATE>
<TOPICS><D>cocoa</D></TOPICS>
<PLACES><D>el-salvador</D></PLACES>
<PEOPLE></PEOPLE>
<TEXT>&#2;
<TITLE>COCOA EXPORTS SEEN &amp; REVIEWED</TITLE>
<DATELINE>    SALVADOR, Feb 26 - </DATELINE><BODY>Showers continued in the week.
The crop is reviewed &lt;here&gt; in detail.
 Reuter
&#3;</BODY></TEXT>
</REUTERS>
<REUTERS TOPICS="YES" LEWISSPLIT="TRAIN" CGISPLIT="TRAINING-SET" OLDID="5545" NEWID="2">
<DATE>26-FEB-1987 15:02:20.00</DATE>
<TOPICS><D>grain</D><D>wheat</D></TOPICS>
<PLACES><D>usa</D></PLACES>
<TEXT>&#2;
<TITLE>GRAIN SHIPMENTS STEADY</TITLE>
<BODY>Wheat shipments held steady at the gulf ports.
 Reuter
&#3;</BODY></TEXT>
</REUTERS>
<REUTERS TOPICS="YES" LEWISSPLIT="TEST" CGISPLIT="TRAINING-SET" OLDID="5546" NEWID="3">
<DATE>26-FEB-1987 15:03:45.12</DATE>
<TOPICS></TOPICS>
<PLACES></PLACES>
<TEXT TYPE="BRIEF">&#2;
<TITLE>MARKET TALK ONLY</TITLE>
&#3;</TEXT>
</REUTERS>
"""

# field-by-field expectation for the fixture above, checked by hand against
# an SGML-aware editor
SGML_EXPECTED = [
    {
        "doc_id": 1,
        "title": "COCOA EXPORTS SEEN & REVIEWED",
        "body": "Showers continued in the week.\nThe crop is reviewed <here> in detail.\n Reuter",
        "labels": frozenset({"cocoa"}),
    },
    {
        "doc_id": 2,
        "title": "GRAIN SHIPMENTS STEADY",
        "body": "Wheat shipments held steady at the gulf ports.\n Reuter",
        "labels": frozenset({"grain", "wheat"}),
    },
    {
        "doc_id": 3,
        "title": "MARKET TALK ONLY",
        "body": "",
        "labels": frozenset(),
    },
]
