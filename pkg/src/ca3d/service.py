"""HTTP service exposing clustering runs and documents to the grid viewer.

Endpoints:

* ``GET /api/state``          latest grid-state JSON (404 before any run)
* ``POST /api/cluster``       body = partial RunSpec JSON; runs synchronously
* ``GET /api/document/{id}``  raw text plus the document's weighted vector
* ``GET /api/metrics``        accumulated metrics rows with run ids

Reads see immutable published state; runs are serialized through a FIFO
ticket queue, so two pipelines never interleave.
"""

from __future__ import annotations

import dataclasses
import json
import mimetypes
import os
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .errors import Ca3dError, InvalidSpec
from .ingest import Corpus
from .pipeline import PipelineResult, RunSpec, run_pipeline
from .represent import TermDocumentMatrix

BIND_ENV = "CA3D_BIND"
DEFAULT_BIND = "127.0.0.1:8765"

_DOC_PATH = re.compile(r"^/api/document/(\d+)$")


class FifoGate:
    """Context manager granting entry strictly in arrival order."""

    def __init__(self):
        self._cond = threading.Condition()
        self._next_ticket = 0
        self._serving = 0

    def __enter__(self):
        with self._cond:
            ticket = self._next_ticket
            self._next_ticket += 1
            while self._serving != ticket:
                self._cond.wait()
        return self

    def __exit__(self, *exc):
        with self._cond:
            self._serving += 1
            self._cond.notify_all()
        return False


class ServiceState:
    def __init__(self, corpus: Corpus, default_spec: RunSpec, state_dir: Path | None):
        self.corpus = corpus
        self.default_spec = default_spec
        self.state_dir = state_dir
        self.gate = FifoGate()
        self.latest: PipelineResult | None = None
        self.metrics: list[dict] = []
        self.documents = {d.doc_id: d for d in corpus.documents}

    def merged_spec(self, overrides: dict) -> RunSpec:
        base = self.default_spec.to_dict()
        if overrides.get("threshold") is not None:
            base["threshold_level"] = None
        if overrides.get("threshold_level") is not None:
            base["threshold"] = None
        base.update(overrides)
        if self.state_dir is not None:
            base["out_dir"] = str(self.state_dir)
        return RunSpec.from_dict(base)

    def run(self, overrides: dict) -> PipelineResult:
        spec = self.merged_spec(overrides)
        spec.validate()
        with self.gate:
            result = run_pipeline(spec, corpus=self.corpus)
            self.latest = result
            self.metrics.append({"run_id": len(self.metrics) + 1, **result.row})
        return result

    def document_vector(self, doc_id: int) -> list:
        if self.latest is None:
            return []
        matrix: TermDocumentMatrix = self.latest.prepared.matrix
        for col in matrix.columns:
            if col.doc_id == doc_id:
                terms = matrix.vocabulary.terms
                return [
                    [terms[idx], col.entries[idx]] for idx in sorted(col.entries)
                ]
        return []


class _Handler(BaseHTTPRequestHandler):
    state: ServiceState
    frontend: Path | None = None
    quiet = True

    def log_message(self, fmt, *args):
        if not self.quiet:
            super().log_message(fmt, *args)

    # -- helpers ------------------------------------------------------------

    def _send(self, code: int, payload, content_type="application/json") -> None:
        body = (
            payload
            if isinstance(payload, bytes)
            else json.dumps(payload, ensure_ascii=False).encode("utf-8")
        )
        self.send_response(code)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _error(self, code: int, message: str, module: str = "") -> None:
        payload = {"error": message}
        if module:
            payload["module"] = module
        self._send(code, payload)

    # -- routes -------------------------------------------------------------

    def do_GET(self):
        try:
            if self.path == "/api/state":
                if self.state.latest is None:
                    self._error(404, "no clustering run yet; POST /api/cluster first")
                    return
                self._send(
                    200, self.state.latest.grid_json.encode("utf-8")
                )
                return
            match = _DOC_PATH.match(self.path)
            if match:
                doc_id = int(match.group(1))
                doc = self.state.documents.get(doc_id)
                if doc is None:
                    self._error(404, f"unknown document id {doc_id}")
                    return
                self._send(
                    200,
                    {
                        "id": doc.doc_id,
                        "title": doc.title,
                        "body": doc.body,
                        "labels": sorted(doc.labels),
                        "vector": self.state.document_vector(doc_id),
                    },
                )
                return
            if self.path == "/api/metrics":
                self._send(200, {"runs": self.state.metrics})
                return
            if self.frontend is not None:
                self._serve_static()
                return
            self._error(404, f"no route for {self.path}")
        except Exception as exc:  # pragma: no cover - defensive 500 path
            self._error(500, str(exc), module=type(exc).__module__)

    def do_POST(self):
        if self.path != "/api/cluster":
            self._error(404, f"no route for {self.path}")
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            raw = self.rfile.read(length) if length else b"{}"
            overrides = json.loads(raw.decode("utf-8")) if raw.strip() else {}
            if not isinstance(overrides, dict):
                raise InvalidSpec("spec body must be a JSON object")
            result = self.state.run(overrides)
            self._send(200, result.grid_json.encode("utf-8"))
        except (InvalidSpec, json.JSONDecodeError, TypeError) as exc:
            self._error(400, str(exc), module=type(exc).__module__)
        except Ca3dError as exc:
            self._error(500, str(exc), module=type(exc).__module__)
        except Exception as exc:  # pragma: no cover - defensive 500 path
            self._error(500, str(exc), module=type(exc).__module__)

    def _serve_static(self):
        rel = self.path.split("?", 1)[0].lstrip("/") or "index.html"
        target = (self.frontend / rel).resolve()
        if not str(target).startswith(str(self.frontend.resolve())) or not target.is_file():
            self._error(404, f"no route for {self.path}")
            return
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self._send(200, target.read_bytes(), content_type=ctype)


def parse_bind(bind: str) -> tuple[str, int]:
    host, _, port = bind.rpartition(":")
    return host or "127.0.0.1", int(port)


def make_server(
    corpus: Corpus,
    default_spec: RunSpec,
    state_dir: str | Path | None = None,
    frontend: str | Path | None = None,
    bind: str | None = None,
) -> ThreadingHTTPServer:
    """Build (but do not start) the HTTP server; handy for tests."""
    resolved_bind = bind or os.environ.get(BIND_ENV) or DEFAULT_BIND
    host, port = parse_bind(resolved_bind)
    state = ServiceState(
        corpus,
        default_spec,
        Path(state_dir) if state_dir else None,
    )
    handler = type(
        "BoundHandler",
        (_Handler,),
        {"state": state, "frontend": Path(frontend) if frontend else None},
    )
    server = ThreadingHTTPServer((host, port), handler)
    server.ca3d_state = state  # type: ignore[attr-defined]
    return server


def serve(
    corpus: Corpus,
    default_spec: RunSpec,
    state_dir: str | Path | None = None,
    frontend: str | Path | None = None,
    bind: str | None = None,
) -> None:
    server = make_server(corpus, default_spec, state_dir, frontend, bind)
    host, port = server.server_address[0], server.server_address[1]
    print(
        f"ca3d service on http://{host}:{port} (corpus: {corpus.name}, {len(corpus)} docs)",
        flush=True,
    )
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
