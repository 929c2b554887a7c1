"""HTTP surface: routes, error bodies, sticky filters, canonical output."""

import time

import pytest
from fastapi.testclient import TestClient

from rulescope.service import DEFAULT_PORT, PORT_ENV_VAR, create_app, resolve_port
from rulescope.session import EXPORT_FORMAT, build_session, to_canonical_json

from tests.conftest import DATA


@pytest.fixture(scope="module")
def ro_client():
    """Client over a session used only for read-only endpoint checks."""
    session = build_session(str(DATA), "Score", bins=3, seed=42, iterations=2)
    return TestClient(create_app(session)), session


@pytest.fixture()
def client(fresh_session):
    return TestClient(create_app(fresh_session)), fresh_session


def _wait_for_job(http, job_id, timeout=60.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        status = http.get(f"/search/{job_id}").json()
        if status["status"] in ("done", "failed"):
            return status
        time.sleep(0.05)
    raise AssertionError("search job never finished")


class TestModels:
    def test_get_models(self, ro_client):
        http, session = ro_client
        resp = http.get("/models")
        assert resp.status_code == 200
        doc = resp.json()
        assert len(doc["models"]) == len(session.models)
        assert doc["active_ids"] == sorted(session.active_ids)

    def test_body_is_canonical_json(self, ro_client):
        http, session = ro_client
        resp = http.get("/models")
        assert resp.content == to_canonical_json(session.models_payload()).encode()

    def test_activation_round_trip(self, client):
        http, session = client
        keep = sorted(session.active_ids)[:1]
        resp = http.post("/models/active", json={"ids": keep})
        assert resp.status_code == 200
        doc = resp.json()
        assert doc["active_ids"] == keep
        flags = {m["id"]: m["active"] for m in doc["models"]}
        assert flags[keep[0]] is True
        assert sum(flags.values()) == 1

    def test_unknown_model_is_404(self, client):
        http, _ = client
        resp = http.post("/models/active", json={"ids": ["RF99"]})
        assert resp.status_code == 404
        body = resp.json()
        assert set(body) == {"code", "message"}
        assert body["code"] == "not_found"

    def test_empty_activation_is_400(self, client):
        http, _ = client
        resp = http.post("/models/active", json={"ids": []})
        assert resp.status_code == 400
        assert resp.json()["code"] == "invalid_request"

    def test_missing_ids_key_is_400(self, client):
        http, _ = client
        resp = http.post("/models/active", json={"models": ["RF1"]})
        assert resp.status_code == 400


class TestImportance:
    def test_payload_keys(self, ro_client):
        http, _ = ro_client
        doc = http.get("/importance").json()
        assert set(doc) == {
            "feature_names", "per_algorithm", "active_mean", "all_mean",
            "delta", "display_order", "fingerprint",
        }


class TestRules:
    def test_filters_are_sticky_across_requests(self, client):
        http, session = client
        base = http.get("/rules").json()["counts"]["visible"]
        filtered = http.get("/rules", params={"min_support": 15}).json()
        assert filtered["filter"]["min_support"] == 15
        assert filtered["counts"]["visible"] < base
        again = http.get("/rules").json()
        assert again["filter"]["min_support"] == 15
        assert again["counts"] == filtered["counts"]

    def test_clear_resets_filters_but_not_decimals(self, client):
        http, _ = client
        http.get("/rules", params={"min_support": 10, "decimals": 4})
        doc = http.get("/rules", params={"clear": "true"}).json()
        flt = doc["filter"]
        assert flt["min_support"] is None
        assert flt["max_support"] is None
        assert flt["max_impurity"] is None
        assert flt["test_instance"] is None
        assert flt["rounding_decimals"] == 4

    def test_test_instance_filter_hides_non_covering_rules(self, client):
        http, session = client
        doc = http.get("/rules", params={"test_instance": 0}).json()
        x = session.test.instances[0]
        for rule in doc["rules"]:
            covers = all(
                lo <= v <= hi
                for v, (lo, hi) in zip(x, rule["intervals"])
            )
            if rule["status"] == "hidden":
                assert not covers
            else:
                assert covers

    def test_out_of_range_instance_is_404(self, client):
        http, session = client
        n = session.test.n_instances
        resp = http.get("/rules", params={"test_instance": n})
        assert resp.status_code == 404
        assert resp.json()["code"] == "not_found"

    def test_bad_decimals_is_400(self, client):
        http, _ = client
        resp = http.get("/rules", params={"decimals": 99})
        assert resp.status_code == 400

    def test_non_integer_filter_is_422(self, client):
        http, _ = client
        assert http.get("/rules", params={"min_support": "lots"}).status_code == 422


class TestEmbedding:
    def test_get_embedding(self, ro_client):
        http, _ = ro_client
        doc = http.get("/embedding").json()
        assert doc["points"]
        assert set(doc["resolved"]) == {"eps", "n_neighbors", "n_clusters"}
        point = doc["points"][0]
        assert {"rule_id", "x", "y", "cluster_label", "status"} <= set(point)

    def test_config_update_echoes_through(self, client):
        http, _ = client
        resp = http.post("/embedding/config", json={"n_neighbors": 7, "seed": 3})
        assert resp.status_code == 200
        cfg = resp.json()["config"]
        assert cfg["n_neighbors"] == 7
        assert cfg["seed"] == 3

    def test_unknown_setting_is_400(self, client):
        http, _ = client
        resp = http.post("/embedding/config", json={"neighbours": 7})
        assert resp.status_code == 400
        assert "unknown settings" in resp.json()["message"]


class TestContrast:
    def test_universe_defaults_to_non_hidden_rules(self, client):
        http, session = client
        rules = http.get("/rules").json()["rules"]
        selected = [r["rule_id"] for r in rules[:8]]
        resp = http.post("/contrast", json={"selected": selected})
        assert resp.status_code == 200
        doc = resp.json()
        assert len(doc["ranked_features"]) == session.train.n_features
        scores = [f["score"] for f in doc["ranked_features"]]
        assert scores == sorted(scores, reverse=True)
        assert doc["comparison"] is None
        assert set(doc["group_intervals"]) == {"selected"}

    def test_anchored_comparison(self, client):
        http, _ = client
        rules = http.get("/rules").json()["rules"]
        resp = http.post("/contrast", json={
            "selected": [r["rule_id"] for r in rules[:6]],
            "anchored": [r["rule_id"] for r in rules[6:10]],
            "mode": "overlap",
        })
        doc = resp.json()
        assert "anchored" in doc["group_intervals"]
        assert doc["comparison"] is not None

    def test_missing_selection_is_400(self, client):
        http, _ = client
        resp = http.post("/contrast", json={"universe": ["RF1:0:1"]})
        assert resp.status_code == 400

    def test_unknown_rule_is_400(self, client):
        http, _ = client
        resp = http.post("/contrast", json={"selected": ["bogus"]})
        assert resp.status_code == 400


class TestAgreement:
    def test_agreement_view(self, ro_client):
        http, session = ro_client
        doc = http.get("/agreement/0").json()
        assert set(doc) == {
            "test_index", "ground_truth", "ground_truth_name", "rf_votes",
            "ab_votes", "md_votes", "majority", "majority_name", "unanimous",
            "conflict", "fingerprint",
        }
        assert doc["test_index"] == 0
        assert len(doc["rf_votes"]) == session.test.n_classes

    def test_out_of_range_is_404(self, ro_client):
        http, session = ro_client
        resp = http.get(f"/agreement/{session.test.n_instances}")
        assert resp.status_code == 404
        assert resp.json()["code"] == "not_found"

    def test_conflicts_listing(self, ro_client):
        http, session = ro_client
        doc = http.get("/conflicts").json()
        assert doc["n_test"] == session.test.n_instances
        assert all(0 <= i < doc["n_test"] for i in doc["conflicts"])
        flagged = http.get(f"/agreement/{doc['conflicts'][0]}").json()
        assert flagged["conflict"] is True


class TestExport:
    def test_export_document(self, client):
        http, session = client
        rules = http.get("/rules").json()["rules"]
        ids = [r["rule_id"] for r in rules[:3]]
        resp = http.post("/export", json={"rule_ids": ids})
        assert resp.status_code == 200
        doc = resp.json()
        assert doc["format"] == EXPORT_FORMAT
        assert [d["rule_id"] for d in doc["decisions"]] == ids
        assert len(session.manual_decisions) == 3

    def test_empty_export_is_400(self, client):
        http, _ = client
        assert http.post("/export", json={"rule_ids": []}).status_code == 400

    def test_unknown_rule_is_404(self, client):
        http, _ = client
        resp = http.post("/export", json={"rule_ids": ["nope"]})
        assert resp.status_code == 404


class TestSearch:
    def test_job_lifecycle_grows_the_pool(self, client):
        http, session = client
        before = set(session.models)
        resp = http.post("/search", json={
            "algorithm": "RF", "iterations": 2, "seed": 123,
            "constraints": {"n_estimators": [3, 6]},
        })
        assert resp.status_code == 200
        job_id = resp.json()["job_id"]
        assert job_id == "job-1"
        status = _wait_for_job(http, job_id)
        assert status["status"] == "done"
        assert status["progress"] == {"done": 2, "total": 2}
        assert len(status["model_ids"]) == 2
        doc = http.get("/models").json()
        flags = {m["id"]: m["active"] for m in doc["models"]}
        for mid in status["model_ids"]:
            assert mid not in before
            assert flags[mid] is False

    def test_bad_algorithm_is_400(self, client):
        http, _ = client
        resp = http.post("/search", json={"algorithm": "XG"})
        assert resp.status_code == 400

    def test_constraint_outside_legal_range_is_400(self, client):
        http, _ = client
        resp = http.post("/search", json={
            "algorithm": "RF", "constraints": {"max_depth": [1, 5]},
        })
        assert resp.status_code == 400
        assert "legal range" in resp.json()["message"]

    def test_unknown_job_is_404(self, client):
        http, _ = client
        assert http.get("/search/job-404").status_code == 404


class TestDatasetMeta:
    def test_meta_keys(self, ro_client):
        http, session = ro_client
        doc = http.get("/dataset/meta").json()
        assert doc["n_train"] == session.train.n_instances
        assert doc["n_test"] == session.test.n_instances
        assert doc["feature_names"] == session.train.feature_names
        assert len(doc["train_bounds"]) == session.train.n_features


class TestResolvePort:
    def test_explicit_wins(self, monkeypatch):
        monkeypatch.setenv(PORT_ENV_VAR, "9000")
        assert resolve_port(7777) == 7777

    def test_env_fallback(self, monkeypatch):
        monkeypatch.setenv(PORT_ENV_VAR, "9000")
        assert resolve_port(None) == 9000

    def test_default(self, monkeypatch):
        monkeypatch.delenv(PORT_ENV_VAR, raising=False)
        assert resolve_port(None) == DEFAULT_PORT

    def test_bad_env_rejected(self, monkeypatch):
        monkeypatch.setenv(PORT_ENV_VAR, "eight")
        with pytest.raises(ValueError, match=PORT_ENV_VAR):
            resolve_port(None)


class TestCrossOrigin:
    """The browser client is served from a different origin than the API."""

    def test_cross_origin_reads_allowed(self, ro_client):
        http, _ = ro_client
        resp = http.get("/models", headers={"Origin": "http://localhost:8080"})
        assert resp.status_code == 200
        assert resp.headers["access-control-allow-origin"] == "*"

    def test_preflighted_post_allowed(self, ro_client):
        http, _ = ro_client
        resp = http.options(
            "/contrast",
            headers={
                "Origin": "http://localhost:8080",
                "Access-Control-Request-Method": "POST",
                "Access-Control-Request-Headers": "content-type",
            },
        )
        assert resp.status_code == 200
        assert resp.headers["access-control-allow-origin"] == "*"
        assert "POST" in resp.headers["access-control-allow-methods"]
