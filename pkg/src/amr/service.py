"""HTTP prediction service over a trained-model bundle.

Endpoints (JSON in, JSON out, UTF-8):

* ``GET /schema``   - the feature schema document (drives the console form)
* ``POST /predict`` - body ``{"features": {name: value}}``; optional
  ``?model=rf|mlp|cnn`` overrides the per-family serving kind; response
  carries one entry per family plus the names of missing features
* ``GET /metrics``  - training-time cross-validation summary
* ``GET /health``   - liveness plus the bundle format version

The bundle is immutable and shared read-only, so the threading server can
answer concurrent requests without locks. Malformed JSON is a 400; schema
violations (unknown feature, unknown level, unavailable model kind) are 422
with the offending field named. Permissive CORS headers are set so the
static console can call the service from another origin.
"""

from __future__ import annotations

import json
import logging
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .bundle import TrainedModelBundle, load_bundle, predict_record
from .errors import BundleError, UnknownLevel

logger = logging.getLogger(__name__)


class _Handler(BaseHTTPRequestHandler):
    server_version = "amr-service"

    @property
    def bundle(self) -> TrainedModelBundle:
        return self.server.bundle  # type: ignore[attr-defined]

    # -- plumbing ----------------------------------------------------------

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, fmt, *args):
        logger.debug("%s - %s", self.address_string(), fmt % args)

    # -- routes --------------------------------------------------------------

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def do_GET(self):
        path = self.path.split("?", 1)[0]
        if path == "/schema":
            self._send_json(200, self.bundle.schema.to_json())
        elif path == "/metrics":
            meta = self.bundle.training_meta
            self._send_json(200, {
                "rows": meta.get("metrics", []),
                "plan": meta.get("plan"),
                "seed": meta.get("seed"),
            })
        elif path == "/health":
            self._send_json(200, {"status": "ok", "format_version": self.bundle.format_version})
        else:
            self._send_json(404, {"error": f"no such endpoint: {path}"})

    def do_POST(self):
        path, _, query = self.path.partition("?")
        if path != "/predict":
            self._send_json(404, {"error": f"no such endpoint: {path}"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            doc = json.loads(self.rfile.read(length).decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            self._send_json(400, {"error": "request body is not valid JSON"})
            return
        if not isinstance(doc, dict) or not isinstance(doc.get("features"), dict):
            self._send_json(400, {"error": 'body must be {"features": {name: value}}'})
            return

        model_kind = None
        for part in query.split("&"):
            if part.startswith("model="):
                model_kind = part.split("=", 1)[1]
        if model_kind is not None and model_kind not in ("rf", "mlp", "cnn"):
            self._send_json(422, {"error": f"unknown model kind {model_kind!r}", "field": "model"})
            return

        try:
            predictions, missing = predict_record(self.bundle, doc["features"], model_kind)
        except UnknownLevel as exc:
            self._send_json(422, {"error": str(exc), "field": exc.column})
            return
        except BundleError as exc:
            self._send_json(422, {"error": str(exc), "field": "model"})
            return
        self._send_json(200, {
            "families": [
                {
                    "family": p.family,
                    "model": p.model,
                    "probability": p.probability,
                    "predicted": p.predicted,
                    "threshold": p.threshold,
                }
                for p in predictions
            ],
            "missing": missing,
        })


def make_server(bundle: TrainedModelBundle, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    """Bound but not yet serving; callers drive serve_forever/shutdown."""
    server = ThreadingHTTPServer((host, port), _Handler)
    server.bundle = bundle  # type: ignore[attr-defined]
    return server


def serve(bundle_path: str, bind: str = "127.0.0.1:8000") -> None:
    """Load a bundle and serve it until interrupted."""
    host, _, port = bind.partition(":")
    server = make_server(load_bundle(bundle_path), host or "127.0.0.1", int(port or "8000"))
    logger.info("serving on http://%s:%d", *server.server_address)
    try:
        server.serve_forever()
    finally:
        server.server_close()
