import json
import threading

import pytest
from fastapi.testclient import TestClient

from scenesplat.scene_model.serialize import (
    scenario_to_document,
    scenario_to_text,
)
from scenesplat.service import SessionStore, create_app
from scenesplat.service.config import EngineConfig

from conftest import cruise_agent, simple_scene
from scenesplat.scene_model import Pose2


@pytest.fixture()
def client(models):
    app = create_app(
        store=SessionStore(), models=models, config=EngineConfig()
    )
    return TestClient(app)


@pytest.fixture()
def loaded(client):
    # Same lane, 30 m apart at equal speed: no standing conflicts.
    scene = simple_scene(
        cruise_agent("a0", Pose2(10, -1.75, 0), 5.0, "black sedan"),
        cruise_agent("a1", Pose2(40, -1.75, 0), 5.0, "white truck"),
    )
    doc = scenario_to_document(scene)
    response = client.post("/load", json={"scenario": doc})
    assert response.status_code == 200
    assert response.json() == {"version": 0, "agents": 3}
    return client, scene


class TestScenarioEndpoint:
    def test_get_scenario_returns_v0_verbatim(self, loaded):
        client, scene = loaded
        body = client.get("/scenario").json()
        assert body["version"] == 0
        assert body["scenario"] == scenario_to_document(scene)

    def test_no_scenario_is_404(self, client):
        assert client.get("/scenario").status_code == 404


class TestQueryEndpoint:
    def test_query_chooses_expected_agent(self, loaded):
        client, _ = loaded
        body = client.post("/query", json={"text": "white truck"}).json()
        assert body["chosen"] == "a1"
        assert body["version"] == 0

    def test_malformed_body_is_400_class(self, loaded):
        client, _ = loaded
        response = client.post("/query", json={"text": ""})
        assert response.status_code in (400, 422)


class TestEditUndo:
    def test_edit_undo_restores_export_bytes(self, loaded):
        client, _ = loaded
        before = json.dumps(client.get("/export?frame=10").json(), sort_keys=True)
        response = client.post(
            "/edit",
            json={"command": 'add asset="traffic cone" at=30.0,0.0',
                  "base_version": 0},
        )
        assert response.status_code == 200
        assert response.json()["version"] == 1
        after_edit = json.dumps(
            client.get("/export?frame=10").json(), sort_keys=True
        )
        assert after_edit != before
        undo = client.post("/undo", json={"base_version": 1})
        assert undo.status_code == 200
        assert undo.json()["version"] == 0
        restored = client.get("/export?frame=10").json()
        restored = json.dumps(restored, sort_keys=True)
        assert restored == before

    def test_stale_base_version_conflicts(self, loaded):
        client, _ = loaded
        ok = client.post(
            "/edit",
            json={"command": 'add asset="traffic cone" at=30.0,0.0',
                  "base_version": 0},
        )
        assert ok.status_code == 200
        stale = client.post(
            "/edit",
            json={"command": 'add asset="traffic cone" at=40.0,0.0',
                  "base_version": 0},
        )
        assert stale.status_code == 409
        assert stale.json()["error"] == "version_conflict"

    def test_concurrent_edits_same_base_exactly_one_wins(self, loaded):
        client, _ = loaded
        results = []

        def submit(x):
            response = client.post(
                "/edit",
                json={
                    "command": f'add asset="traffic cone" at={x},8.0',
                    "base_version": 0,
                },
            )
            results.append(response.status_code)

        threads = [
            threading.Thread(target=submit, args=(30.0 + i,)) for i in range(2)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(results) == [200, 409]

    def test_command_syntax_error_reports_position(self, loaded):
        client, _ = loaded
        command = 'add asset="cone" bogus=1'
        response = client.post("/edit", json={"command": command})
        assert response.status_code == 400
        body = response.json()
        assert body["error"] == "command_syntax"
        assert body["position"] == command.index("bogus")


class TestRefineEndpoint:
    def test_bypass_refined_tracks_equal_planned(self, loaded):
        client, scene = loaded
        response = client.post("/refine", json={"bypass": True})
        assert response.status_code == 200
        body = response.json()
        assert body["bypass"] is True
        planned_doc = scenario_to_document(scene)
        planned_tracks = {a["id"]: a["track"] for a in planned_doc["agents"]}
        assert body["refined"] == planned_tracks

    def test_refine_creates_version_and_undo_returns(self, loaded):
        client, _ = loaded
        body = client.post("/refine", json={}).json()
        assert body["version"] == 1
        assert client.get("/scenario").json()["version"] == 1
        client.post("/undo", json={})
        assert client.get("/scenario").json()["version"] == 0


class TestFramesAndConflicts:
    def test_frames_range(self, loaded):
        client, scene = loaded
        body = client.get("/frames", params={"from": 0.0, "to": 0.5}).json()
        assert len(body["frames"]) == 6
        first = body["frames"][0]
        assert {a["id"] for a in first["agents"]} == {"ego", "a0", "a1"}

    def test_conflicts_endpoint_counts(self, loaded):
        client, _ = loaded
        body = client.get("/conflicts").json()
        assert body["conflicts"] == []
        client.post(
            "/edit",
            json={"command": 'add asset="concrete barrier" at=30.0,-1.75'},
        )
        body = client.get("/conflicts").json()
        assert len(body["conflicts"]) == 1
        assert body["conflicts"][0]["agents"] == ["a0", "obj-0"]
