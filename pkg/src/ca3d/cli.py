"""Command-line interface: ingest, cluster, sweep, serve, export-grid.

Run options follow the precedence CLI flags > spec file > built-in defaults;
flags default to None so only user-supplied values override the spec file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import Ca3dError
from .ingest import corpus_to_json, load_corpus, select_first_n
from .pipeline import RunSpec, run_pipeline, run_sweep
from .proximity import SWEEP_DISTANCES, write_proximity
from .represent import matrix_to_json
from .service import serve

_SPEC_FIELDS = {
    "corpus", "corpus_format", "labels", "name", "n_docs", "representation",
    "ngram_n", "reduction", "k", "distance", "minkowski_r", "threshold_level",
    "threshold", "strategy", "neighborhood", "beta", "tokenizer_config", "out_dir",
}


def _add_corpus_args(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--corpus", required=required, help="corpus file or directory")
    p.add_argument(
        "--format", dest="corpus_format", default=None,
        choices=("reuters", "plaintext", "json"),
        help="corpus input format (default: json)",
    )
    p.add_argument("--labels", default=None, help="labels file for plaintext corpora")
    p.add_argument("--name", default=None, help="corpus name override")
    p.add_argument("--n-docs", type=int, default=None,
                   help="use only the first n documents")


def _add_run_args(p: argparse.ArgumentParser) -> None:
    _add_corpus_args(p, required=False)
    p.add_argument("--representation", default=None, choices=("bag", "ngram"),
                   help="document representation (default: bag)")
    p.add_argument("--ngram-n", type=int, default=None, help="n-gram window, 2..5 (default: 3)")
    p.add_argument("--reduction", default=None, choices=("none", "chi2", "infogain"),
                   help="attribute selection (default: none)")
    p.add_argument("--k", type=int, default=None,
                   help="terms kept per document (chi2) or overall (infogain); default 50")
    p.add_argument("--distance", default=None, help="distance metric (default: cosine)")
    p.add_argument("--minkowski-r", type=float, default=None, help="order for minkowski")
    p.add_argument("--threshold-level", type=int, default=None,
                   help="similarity threshold level 1..10 (default: 5)")
    p.add_argument("--threshold", type=float, default=None,
                   help="explicit similarity threshold in [0,1]")
    p.add_argument("--strategy", default=None, choices=("neighborhood", "linear"),
                   help="cluster constitution strategy (default: neighborhood)")
    p.add_argument("--neighborhood", default=None, choices=("moore", "von_neumann"),
                   help="neighborhood kind (default: moore)")
    p.add_argument("--beta", type=float, default=None, help="F-measure beta (default: 1)")
    p.add_argument("--tokenizer-config", default=None, help="tokenizer config JSON")
    p.add_argument("--spec", default=None, help="RunSpec JSON file; flags override it")
    p.add_argument("--out", dest="out_dir", default=None, help="output directory")


def _spec_from_args(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunSpec:
    base: dict = {}
    if getattr(args, "spec", None):
        base = json.loads(Path(args.spec).read_text("utf-8"))
    supplied = {
        name: value
        for name, value in vars(args).items()
        if name in _SPEC_FIELDS and value is not None
    }
    merged = {**base, **supplied}
    if "corpus" not in merged:
        parser.error("a corpus is required (--corpus or a spec file)")
    # an explicit flag for one threshold variant silences the other
    if "threshold" in supplied and "threshold_level" not in supplied:
        merged["threshold_level"] = None
    if merged.get("threshold") is not None and merged.get("threshold_level") is not None:
        merged["threshold"] = None
    return RunSpec.from_dict(merged)


def cmd_ingest(args, parser) -> int:
    corpus = load_corpus(
        args.corpus, args.corpus_format or "reuters",
        labels_path=args.labels, name=args.name,
    )
    if args.n_docs is not None and args.n_docs < len(corpus):
        corpus = select_first_n(corpus, args.n_docs)
    text = corpus_to_json(corpus)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"{len(corpus)} documents -> {args.output}")
    else:
        print(text)
    return 0


def cmd_cluster(args, parser) -> int:
    spec = _spec_from_args(args, parser)
    if (args.dump_proximity or args.export_matrix) and not spec.out_dir:
        parser.error("--dump-proximity / --export-matrix need --out")
    result = run_pipeline(spec)
    print(
        f"{result.row['n_docs']} docs, {result.assignment.n_clusters} clusters, "
        f"threshold {result.resolved_threshold:.4f}, {result.ca_time_ms} ms"
    )
    if result.entropy_value is not None:
        print(
            f"entropy {result.entropy_value * 100:.2f}%  "
            f"f-measure {result.fmeasure_value * 100:.2f}%"
        )
    if spec.out_dir:
        out = Path(spec.out_dir)
        if args.dump_proximity:
            write_proximity(result.distances, out / "proximity.bin")
        if args.export_matrix:
            (out / "matrix.json").write_text(
                matrix_to_json(result.prepared.matrix), encoding="utf-8"
            )
        print(f"artifacts in {spec.out_dir}")
    return 0


def cmd_sweep(args, parser) -> int:
    spec = _spec_from_args(args, parser)
    distances = tuple(d.strip() for d in args.distances.split(",") if d.strip())
    sweep = run_sweep(spec, distances=distances)
    for row in sweep.rows:
        print(
            f"{row['metric']:<12} level {row['threshold_level']:>2}: "
            f"{row['n_clusters']:>4} clusters, {row['time_ms']} ms"
        )
    if spec.out_dir:
        print(f"sweep CSV in {spec.out_dir}")
    return 0


def cmd_serve(args, parser) -> int:
    spec = _spec_from_args(args, parser)
    corpus = load_corpus(
        spec.corpus, spec.corpus_format, labels_path=spec.labels, name=spec.name
    )
    if spec.n_docs is not None and spec.n_docs < len(corpus):
        corpus = select_first_n(corpus, spec.n_docs)
    serve(
        corpus,
        spec,
        state_dir=args.state_dir,
        frontend=args.frontend,
        bind=args.bind,
    )
    return 0


def cmd_export_grid(args, parser) -> int:
    path = Path(args.run_dir) / "grid_state.json"
    if not path.is_file():
        raise Ca3dError(f"no grid_state.json under {args.run_dir}")
    payload = json.loads(path.read_text("utf-8"))
    if args.pretty:
        text = json.dumps(payload, indent=2)
    else:
        text = json.dumps(payload, separators=(",", ":"))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"grid state -> {args.output}")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ca3d",
        description="Text clustering on a 3D cellular automaton.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="parse a corpus into corpus JSON")
    _add_corpus_args(p_ingest, required=True)
    p_ingest.add_argument("--output", default=None, help="output JSON path (default: stdout)")
    p_ingest.set_defaults(func=cmd_ingest)

    p_cluster = sub.add_parser("cluster", help="run one clustering pipeline")
    _add_run_args(p_cluster)
    p_cluster.add_argument(
        "--dump-proximity", action="store_true",
        help="also write the binary distance-matrix dump",
    )
    p_cluster.add_argument(
        "--export-matrix", action="store_true",
        help="also write the weighted term-document matrix as JSON",
    )
    p_cluster.set_defaults(func=cmd_cluster)

    p_sweep = sub.add_parser("sweep", help="threshold sweep over levels 1..10")
    _add_run_args(p_sweep)
    p_sweep.add_argument(
        "--distances", default=",".join(SWEEP_DISTANCES),
        help="comma-separated distance names",
    )
    p_sweep.set_defaults(func=cmd_sweep)

    p_serve = sub.add_parser("serve", help="HTTP service for the grid viewer")
    _add_run_args(p_serve)
    p_serve.add_argument("--bind", default=None, help="host:port (or env CA3D_BIND)")
    p_serve.add_argument("--state-dir", default=None, help="directory for run artifacts")
    p_serve.add_argument("--frontend", default=None, help="static viewer bundle to serve at /")
    p_serve.set_defaults(func=cmd_serve)

    p_export = sub.add_parser("export-grid", help="re-emit the grid JSON of a finished run")
    p_export.add_argument("--run-dir", required=True)
    p_export.add_argument("--output", default=None)
    p_export.add_argument("--pretty", action="store_true")
    p_export.set_defaults(func=cmd_export_grid)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except Ca3dError as exc:
        print(f"error [{type(exc).__module__}.{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
