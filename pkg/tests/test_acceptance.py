"""Acceptance suite: one test per release criterion, at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v`` to get one pass/fail line per
criterion.  Everything here drives the public surface (CLI included); no HTTP
service or viewer is involved.
"""

import json
import math
import os
from collections import defaultdict
from itertools import product
from pathlib import Path

import numpy as np
import pytest

from ca3d.ca_engine import ALIVE, DEAD, ISOLATED, CaConfig, grid_for, neighbors, run
from ca3d.cli import main
from ca3d.evaluate import entropy, f_measure
from ca3d.ingest import parse_reuters_sgml
from ca3d.proximity import (
    MahalanobisContext,
    ProximityMatrix,
    cosine_distance,
    maximum_distance,
    minkowski,
    pair_metric,
)
from ca3d.represent import apply_tfidf, build_matrix
from conftest import SGML_EXPECTED, SGML_THREE_DOCS

from test_evaluate import naive_entropy, naive_f_measure, table_from_counts
from test_reduce import (
    labeling_for,
    matrix_from_dense,
    naive_chi2,
    naive_information_gain,
)


def test_grid_sizing():
    """side = (smallest s with s^3 >= n) + 1; 1000 -> 11, 1 -> 2."""
    assert grid_for(1000).side == 11
    assert grid_for(1).side == 2


def test_neighborhood_cardinalities():
    """Interior Moore 26, interior Von Neumann 6, corner Moore 7; exhaustive
    over every cell of a side-5 grid."""
    grid = grid_for(60)
    assert grid.side == 5
    side = grid.side
    for kind, offsets in (
        ("moore", [o for o in product((-1, 0, 1), repeat=3) if o != (0, 0, 0)]),
        ("von_neumann", [o for o in product((-1, 0, 1), repeat=3)
                         if sum(map(abs, o)) == 1]),
    ):
        for i, j, k in product(range(side), repeat=3):
            want = sum(
                1
                for di, dj, dk in offsets
                if 0 <= i + di < side and 0 <= j + dj < side and 0 <= k + dk < side
            )
            got = len(neighbors(grid, grid.index(i, j, k), kind))
            assert got == want
    assert len(neighbors(grid, grid.index(2, 2, 2), "moore")) == 26
    assert len(neighbors(grid, grid.index(2, 2, 2), "von_neumann")) == 6
    assert len(neighbors(grid, grid.index(0, 0, 0), "moore")) == 7


def test_rule_legality_over_randomized_runs():
    """200 randomized desk-scale runs observe only legal transitions; active
    cells immutable; isolated cells terminal."""
    legal = {
        DEAD: lambda new: new == ALIVE or new >= 1,
        ALIVE: lambda new: new >= 1 or new == ISOLATED,
    }
    rng = np.random.default_rng(2024)
    strategies = ["neighborhood", "linear"]
    kinds = ["moore", "von_neumann"]
    for trial in range(200):
        n = int(rng.integers(2, 51))
        values = rng.random((n, n))
        values = (values + values.T) / 2
        np.fill_diagonal(values, 1.0)
        sim = ProximityMatrix(kind="similarity", values=values)
        config = CaConfig(
            neighborhood=kinds[trial % 2],
            strategy=strategies[(trial // 2) % 2],
            similarity_threshold=float(rng.random()),
        )
        terminal: dict[int, int] = {}

        def recorder(flat, old, new):
            assert old != new
            assert old in legal, f"transition out of terminal state {old}"
            assert legal[old](new), f"illegal transition {old} -> {new}"
            assert flat not in terminal, "active/isolated cell rewritten"
            if new >= 1 or new == ISOLATED:
                terminal[flat] = new

        result = run(range(1, n + 1), sim, config, on_transition=recorder)
        placed = int((result.grid.cells >= 1).sum())
        assert placed + len(result.unplaced) == n


def test_monotone_threshold_sweep(thirty_doc_dir, tmp_path):
    """On the 30-doc, 3-group corpus with fully distinct pairwise
    similarities, cluster counts never increase from level 1 to 10 for
    cosine, Euclidean and Chebyshev."""
    from ca3d.pipeline import RunSpec, prepare
    from ca3d.proximity import build_proximity, to_similarity

    # precondition: all three metrics see fully distinct similarities
    prepared = prepare(
        RunSpec(
            corpus=str(thirty_doc_dir),
            corpus_format="plaintext",
            labels=str(thirty_doc_dir / "labels.tsv"),
        )
    )
    dense = prepared.dense[prepared.keep_rows]
    for metric in ("cosine", "euclidean", "chebyshev"):
        sim = to_similarity(build_proximity(dense, metric)).values
        off = sim[np.triu_indices_from(sim, k=1)]
        assert len(np.unique(off)) == off.size

    out = tmp_path / "sweep"
    rc = main(
        [
            "sweep",
            "--corpus", str(thirty_doc_dir),
            "--format", "plaintext",
            "--labels", str(thirty_doc_dir / "labels.tsv"),
            "--distances", "cosine,euclidean,chebyshev",
            "--out", str(out),
        ]
    )
    assert rc == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert len(lines) == 31
    series = defaultdict(list)
    for line in lines[1:]:
        fields = line.split(",")
        series[fields[0]].append(int(fields[5]))
    for metric in ("cosine", "euclidean", "chebyshev"):
        ks = series[metric]
        assert len(ks) == 10
        assert all(a >= b for a, b in zip(ks, ks[1:])), (metric, ks)
        assert ks[0] > ks[-1]  # a real decline, not a constant


def test_entropy_and_fmeasure_oracles():
    """Entropy and F-measure agree with brute-force implementations to 1e-12
    on 500 random contingency tables; perfect clustering scores E=0, F=1."""
    rng = np.random.default_rng(99)
    checked = 0
    while checked < 500:
        shape = (int(rng.integers(1, 9)), int(rng.integers(1, 9)))
        counts = rng.integers(0, 10, size=shape)
        counts = counts[:, counts.sum(axis=0) > 0]
        if counts.size == 0 or counts.sum() == 0:
            continue
        table = table_from_counts(counts)
        assert entropy(table) == pytest.approx(naive_entropy(counts), abs=1e-12)
        assert f_measure(table, beta=1.0) == pytest.approx(
            naive_f_measure(counts, 1.0), abs=1e-12
        )
        checked += 1
    perfect = table_from_counts(np.diag([3, 5, 2]))
    assert entropy(perfect) == 0.0
    assert f_measure(perfect, beta=1.0) == pytest.approx(1.0, abs=1e-12)


def test_distance_axioms():
    """Non-negativity, symmetry, identity for all six metrics; triangle
    inequality (cosine exempt) over 10^4 random triples at 1e-9; Chebyshev
    equals the max component and Minkowski(64) within 1e-6; identity-
    covariance Mahalanobis equals Euclidean."""
    rng = np.random.default_rng(7)
    dim = 6
    data = rng.random((60, dim)) + 0.01
    ctx = MahalanobisContext.from_data(data)
    metrics = {
        "minkowski": pair_metric("minkowski", r=3.0),
        "maximum": pair_metric("maximum"),
        "chebyshev": pair_metric("chebyshev"),
        "average": pair_metric("average"),
        "mahalanobis": pair_metric("mahalanobis", ctx=ctx),
        "cosine": pair_metric("cosine"),
    }
    for name, fn in metrics.items():
        for _ in range(200):
            x, y = data[rng.integers(60)], data[rng.integers(60)]
            assert fn(x, y) >= 0
            assert fn(x, y) == pytest.approx(fn(y, x), abs=1e-12)
            assert fn(x, x) == pytest.approx(0.0, abs=1e-9)

    triangle_metrics = {k: v for k, v in metrics.items() if k != "cosine"}
    n_triples = 10_000
    per_metric = n_triples // len(triangle_metrics)
    for name, fn in triangle_metrics.items():
        for _ in range(per_metric):
            x, y, z = (data[rng.integers(60)] for _ in range(3))
            assert fn(x, z) <= fn(x, y) + fn(y, z) + 1e-9, name

    for _ in range(200):
        x = rng.random(dim)
        diffs = rng.uniform(0.0, 0.35, size=dim)
        diffs[int(rng.integers(dim))] = rng.uniform(0.5, 1.0)
        y = x + diffs * rng.choice([-1.0, 1.0], size=dim)
        assert maximum_distance(x, y) == pytest.approx(
            float(np.abs(x - y).max()), abs=1e-12
        )
        assert abs(maximum_distance(x, y) - minkowski(x, y, 64)) <= 1e-6

    identity_ctx = MahalanobisContext.from_covariance(np.eye(dim), ridge=0.0)
    maha = pair_metric("mahalanobis", ctx=identity_ctx)
    for _ in range(200):
        x, y = data[rng.integers(60)], data[rng.integers(60)]
        assert maha(x, y) == pytest.approx(minkowski(x, y, 2), abs=1e-9)


def test_reduction_oracles():
    """Chi-square contributions and information gain match naive dense
    oracles to 1e-12 on matrices up to 10x10; independence zeroes the
    statistic; a perfectly discriminating term recovers the class entropy."""
    rng = np.random.default_rng(41)
    classes = ["a", "b", "c"]
    for _ in range(40):
        shape = (int(rng.integers(2, 11)), int(rng.integers(2, 11)))
        dense = rng.integers(0, 4, size=shape).astype(float)
        if dense.sum() == 0:
            dense[0, 0] = 1
        matrix = matrix_from_dense(dense)

        from ca3d.reduce import chi2_contributions, information_gain

        table = chi2_contributions(matrix)
        want = naive_chi2(dense)
        for i in range(shape[0]):
            for j in range(shape[1]):
                assert table.contribution(i, j) == pytest.approx(
                    want[i, j], abs=1e-12
                )

        doc_classes = [
            list(rng.choice(classes, size=int(rng.integers(1, 3)), replace=False))
            for _ in range(shape[1])
        ]
        gains = information_gain(matrix, labeling_for(doc_classes)).gains
        assert np.allclose(
            gains,
            naive_information_gain(dense, doc_classes, sorted(classes)),
            atol=1e-12,
        )

    from ca3d.reduce import chi2_contributions, information_gain

    independent = matrix_from_dense(np.outer([1, 2, 3], [2, 1, 4]))
    table = chi2_contributions(independent)
    for i in range(3):
        for j in range(3):
            assert table.contribution(i, j) == pytest.approx(0.0, abs=1e-12)

    dense = np.array([[3, 1, 0, 0], [0, 1, 2, 1]], dtype=float)
    gains = information_gain(
        matrix_from_dense(dense), labeling_for([["a"], ["a"], ["b"], ["b"]])
    ).gains
    assert gains[0] == pytest.approx(math.log(2), abs=1e-12)


def test_tfidf_weighting():
    """A term in every document weighs 0; tf=2 with n_i=2 of N=4 gives
    2*ln(2) within 1e-12."""
    from ca3d.ingest import Corpus, RawDocument
    from ca3d.represent import TokenizerConfig

    corpus = Corpus(
        name="t",
        documents=tuple(
            RawDocument(doc_id=i + 1, title="", body=body)
            for i, body in enumerate(["x x y", "x z", "w y", "v z"])
        ),
    )
    config = TokenizerConfig(stop_words=frozenset(), lemma_map={})
    weighted = apply_tfidf(build_matrix(corpus, config=config))
    x_idx = weighted.vocabulary.index["x"]
    assert weighted.columns[0].entries[x_idx] == pytest.approx(
        2 * math.log(2), abs=1e-12
    )

    all_docs = Corpus(
        name="u",
        documents=tuple(
            RawDocument(doc_id=i + 1, title="", body=f"common unique{chr(97 + i)}")
            for i in range(4)
        ),
    )
    weighted = apply_tfidf(build_matrix(all_docs, config=config))
    common_idx = weighted.vocabulary.index["common"]
    for col in weighted.columns:
        assert common_idx not in col.entries


def test_end_to_end_determinism(twelve_doc_dir, tmp_path):
    """Two CLI invocations of the same run spec produce byte-identical grid
    JSON and metrics CSV."""
    args = [
        "cluster",
        "--corpus", str(twelve_doc_dir),
        "--format", "plaintext",
        "--labels", str(twelve_doc_dir / "labels.tsv"),
        "--distance", "cosine",
        "--threshold-level", "5",
    ]
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(out_a)]) == 0
    assert main(args + ["--out", str(out_b)]) == 0
    for name in ("grid_state.json", "metrics.csv"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name


def test_separation_recovery(twelve_doc_dir, tmp_path):
    """The 12-document, 3-group fixture at the mid threshold level recovers
    exactly 3 clusters with entropy 0 and F-measure 1."""
    out = tmp_path / "run"
    rc = main(
        [
            "cluster",
            "--corpus", str(twelve_doc_dir),
            "--format", "plaintext",
            "--labels", str(twelve_doc_dir / "labels.tsv"),
            "--threshold-level", "5",
            "--out", str(out),
        ]
    )
    assert rc == 0
    grid = json.loads((out / "grid_state.json").read_text())
    assert grid["n_clusters"] == 3
    line = (out / "metrics.csv").read_text().splitlines()[1]
    fields = line.split(",")
    assert float(fields[7]) == pytest.approx(0.0, abs=1e-12)   # entropy %
    assert float(fields[8]) == pytest.approx(100.0, abs=1e-12)  # f-measure %


def test_reuters_parser_fixture():
    """The hand-built 3-document SGML fixture parses field-exactly and a
    truncated final document is tolerated."""
    docs = parse_reuters_sgml(SGML_THREE_DOCS)
    assert len(docs) == 3
    for doc, want in zip(docs, SGML_EXPECTED):
        assert doc.doc_id == want["doc_id"]
        assert doc.title == want["title"]
        assert doc.body == want["body"]
        assert doc.labels == want["labels"]

    cut = SGML_THREE_DOCS.find(b"Wheat shipments held steady")
    truncated = SGML_THREE_DOCS[: cut + len(b"Wheat shipments")]
    partial = parse_reuters_sgml(truncated)
    assert len(partial) == 2
    assert partial[1].body == "Wheat shipments"


def test_reuters_parser_real_data_file_count():
    """A stock corpus file yields exactly 1000 documents (runs only when real
    data is present via CA3D_REUTERS_DIR)."""
    real_dir = os.environ.get("CA3D_REUTERS_DIR")
    if not real_dir:
        pytest.skip("set CA3D_REUTERS_DIR to check the 1000-document file count")
    sgm = sorted(Path(real_dir).glob("reut2-0*.sgm"))
    assert sgm, f"no .sgm files under {real_dir}"
    docs = parse_reuters_sgml(sgm[0].read_bytes())
    assert len(docs) == 1000
