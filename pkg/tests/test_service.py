import json
import threading
import urllib.request
from urllib.error import HTTPError

import pytest

from amr.data import FeatureSchema
from amr.service import make_server

from .test_bundle import canonical_features, small_bundle  # noqa: F401  (fixture)


@pytest.fixture(scope="module")
def server_url(small_bundle):  # noqa: F811
    _, bundle = small_bundle
    server = make_server(bundle, "127.0.0.1", 0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address
    yield f"http://{host}:{port}"
    server.shutdown()
    server.server_close()


def get(url):
    with urllib.request.urlopen(url, timeout=10) as resp:
        return resp.status, json.loads(resp.read().decode())


def post(url, payload, raw=None):
    body = raw if raw is not None else json.dumps(payload).encode()
    req = urllib.request.Request(
        url, data=body, headers={"Content-Type": "application/json"}, method="POST"
    )
    with urllib.request.urlopen(req, timeout=10) as resp:
        return resp.status, json.loads(resp.read().decode())


class TestEndpoints:
    def test_health(self, server_url):
        status, doc = get(server_url + "/health")
        assert status == 200
        assert doc == {"status": "ok", "format_version": "1"}

    def test_schema_round_trips_through_parser(self, server_url, small_bundle):  # noqa: F811
        _, bundle = small_bundle
        status, doc = get(server_url + "/schema")
        assert status == 200
        assert FeatureSchema.from_json(doc) == bundle.schema

    def test_metrics_summary(self, server_url, small_bundle):  # noqa: F811
        _, bundle = small_bundle
        status, doc = get(server_url + "/metrics")
        assert status == 200
        assert doc["rows"] == bundle.training_meta["metrics"]

    def test_predict_complete_record(self, server_url, small_bundle):  # noqa: F811
        _, bundle = small_bundle
        status, doc = get_predict(server_url, canonical_features())
        assert status == 200
        assert [f["family"] for f in doc["families"]] == list(bundle.families)
        assert doc["missing"] == []
        for entry in doc["families"]:
            assert set(entry) == {"family", "model", "probability", "predicted", "threshold"}

    def test_predict_matches_in_process_bit_for_bit(self, server_url, small_bundle):  # noqa: F811
        from amr.bundle import predict_record

        _, bundle = small_bundle
        _, doc = get_predict(server_url, canonical_features())
        local, _ = predict_record(bundle, canonical_features())
        assert [f["probability"] for f in doc["families"]] == [p.probability for p in local]

    def test_predict_flags_missing_features(self, server_url):
        features = canonical_features()
        del features["organism"]
        status, doc = get_predict(server_url, features)
        assert status == 200
        assert doc["missing"] == ["organism"]

    def test_unknown_level_is_422_with_field(self, server_url):
        features = {**canonical_features(), "organism": "Martian bacillus"}
        with pytest.raises(HTTPError) as err:
            get_predict(server_url, features)
        assert err.value.code == 422
        assert json.loads(err.value.read().decode())["field"] == "organism"

    def test_malformed_json_is_400(self, server_url):
        with pytest.raises(HTTPError) as err:
            post(server_url + "/predict", None, raw=b"{not json")
        assert err.value.code == 400

    def test_unknown_route_404(self, server_url):
        with pytest.raises(HTTPError) as err:
            get(server_url + "/nope")
        assert err.value.code == 404

    def test_model_override_query(self, server_url):
        status, doc = get_predict(server_url + "?ignored", canonical_features())
        assert status == 200
        req_url = server_url + "/predict?model=rf"
        status, doc = post(req_url, {"features": canonical_features()})
        assert all(f["model"] == "rf" for f in doc["families"])
        with pytest.raises(HTTPError) as err:
            post(server_url + "/predict?model=xgb", {"features": canonical_features()})
        assert err.value.code == 422


def get_predict(base_url, features):
    base = base_url.split("?")[0]
    return post(base + "/predict", {"features": features})
