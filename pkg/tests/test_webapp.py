from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from poetone.evalservice import EvalService
from poetone.webapp import create_app

from test_evalservice import make_pair


@pytest.fixture
def client(tmp_path):
    pairs = [make_pair(i, model_id="hidden-model") for i in range(3)]
    service = EvalService(pairs, tmp_path / "events.jsonl", seed=7)
    return TestClient(create_app(service))


def register(client, evaluator="eva"):
    response = client.post("/api/evaluators", json={"evaluator_id": evaluator})
    assert response.status_code == 200
    return response.json()


def next_trial(client, evaluator="eva"):
    response = client.get("/api/trials/next", params={"evaluator": evaluator})
    assert response.status_code == 200
    return response.json()


class TestApi:
    def test_full_protocol_happy_path(self, client):
        info = register(client)
        assert info["total_pairs"] == 3
        completed = 0
        while True:
            body = next_trial(client)
            if body.get("exhausted"):
                assert body["completed"] == 3
                break
            trial = body["trial"]
            reveal = client.post(
                f"/api/trials/{trial['trial_id']}/choice",
                json={"choice": "First", "confidence": 4},
            )
            assert reveal.status_code == 200
            assert reveal.json()["human"] in ("First", "Second")
            ack = client.post(
                f"/api/trials/{trial['trial_id']}/ratings",
                json={
                    "thematic_faithfulness": 4,
                    "artistic_merit": 3,
                    "overall_quality": 4,
                },
            )
            assert ack.status_code == 200
            completed += 1
        assert completed == 3
        summary = client.get("/api/summary").json()
        assert summary["models"]["hidden-model"]["trials"] == 3
        assert summary["trials_by_stage"]["ratings_submitted"] == 3

    def test_unregistered_evaluator_400(self, client):
        response = client.get("/api/trials/next", params={"evaluator": "ghost"})
        assert response.status_code == 400

    def test_pre_reveal_wire_format_has_no_source_identifiers(self, client):
        register(client)
        body = next_trial(client)
        wire = json.dumps(body, ensure_ascii=False)
        for forbidden in ("model_id", "poem_id", "source", "author",
                          "hidden-model", "human-"):
            assert forbidden not in wire

    def test_double_choice_is_409(self, client):
        register(client)
        trial = next_trial(client)["trial"]
        url = f"/api/trials/{trial['trial_id']}/choice"
        assert client.post(url, json={"choice": "First", "confidence": 3}).status_code == 200
        assert client.post(url, json={"choice": "First", "confidence": 3}).status_code == 409

    def test_out_of_range_confidence_is_422(self, client):
        register(client)
        trial = next_trial(client)["trial"]
        response = client.post(
            f"/api/trials/{trial['trial_id']}/choice",
            json={"choice": "First", "confidence": 9},
        )
        assert response.status_code == 422

    def test_ratings_before_choice_is_409(self, client):
        register(client)
        trial = next_trial(client)["trial"]
        response = client.post(
            f"/api/trials/{trial['trial_id']}/ratings",
            json={"thematic_faithfulness": 3, "artistic_merit": 3, "overall_quality": 3},
        )
        assert response.status_code == 409

    def test_out_of_range_rating_is_422(self, client):
        register(client)
        trial = next_trial(client)["trial"]
        client.post(
            f"/api/trials/{trial['trial_id']}/choice",
            json={"choice": "Second", "confidence": 2},
        )
        response = client.post(
            f"/api/trials/{trial['trial_id']}/ratings",
            json={"thematic_faithfulness": 0, "artistic_merit": 3, "overall_quality": 3},
        )
        assert response.status_code == 422

    def test_unknown_trial_is_404(self, client):
        response = client.post(
            "/api/trials/nope/choice", json={"choice": "First", "confidence": 3}
        )
        assert response.status_code == 404

    def test_export_is_raw_jsonl(self, client):
        register(client)
        trial = next_trial(client)["trial"]
        client.post(
            f"/api/trials/{trial['trial_id']}/choice",
            json={"choice": "First", "confidence": 3},
        )
        response = client.get("/api/export")
        assert response.status_code == 200
        lines = [l for l in response.text.splitlines() if l.strip()]
        events = [json.loads(l) for l in lines]
        assert [e["event"] for e in events] == [
            "evaluator_registered", "trial_created", "choice_submitted",
        ]
