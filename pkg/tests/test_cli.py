import json
import sys

import pytest
from fastapi.testclient import TestClient

from scenesplat.cli import main
from scenesplat.scene_model import Pose2
from scenesplat.scene_model.serialize import save_scenario
from scenesplat.service import SessionStore, create_app

from conftest import cruise_agent, simple_scene


@pytest.fixture()
def scene_file(tmp_path):
    scene = simple_scene(
        cruise_agent("a0", Pose2(10, -1.75, 0), 5.0, "black sedan"),
        cruise_agent("a1", Pose2(40, -1.75, 0), 5.0, "white truck"),
    )
    path = tmp_path / "scene.json"
    save_scenario(scene, path)
    return path


def run_cli(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExitCodes:
    def test_query_without_scenario_is_domain_error(self, tmp_path, capsys):
        code, out, err = run_cli(
            capsys, "--session", str(tmp_path / "s"), "query", "any car"
        )
        assert code == 1
        assert "no scenario loaded" in err
        assert out == ""

    def test_usage_error_is_exit_2(self, tmp_path, capsys):
        code, _, _ = run_cli(capsys, "--session", str(tmp_path / "s"), "frobnicate")
        assert code == 2

    def test_malformed_command_is_domain_error(self, tmp_path, scene_file, capsys):
        session = str(tmp_path / "s")
        assert run_cli(capsys, "--session", session, "load", str(scene_file))[0] == 0
        code, _, err = run_cli(
            capsys, "--session", session, "edit", "add bogus"
        )
        assert code == 1
        assert "command_syntax" in err


class TestPipeline:
    def test_load_edit_refine_export_roundtrip(self, tmp_path, scene_file, capsys):
        session = str(tmp_path / "s")
        code, out, _ = run_cli(capsys, "--session", session, "load", str(scene_file))
        assert code == 0
        assert json.loads(out)["version"] == 0

        before_code, before_out, _ = run_cli(
            capsys, "--session", session, "export", "--frame", "20"
        )
        assert before_code == 0

        code, out, _ = run_cli(
            capsys, "--session", session, "edit",
            'add asset="concrete barrier" at=35.0,-1.75',
        )
        assert code == 0
        added = json.loads(out)["edited_agents"][0]

        code, out, _ = run_cli(capsys, "--session", session, "refine")
        assert code == 0
        refined = json.loads(out)
        assert refined["version"] == 2

        code, out, _ = run_cli(
            capsys, "--session", session, "export", "--frame", "20"
        )
        assert code == 0
        export = json.loads(out)
        ids = {a["id"] for a in export["agents"]}
        assert added in ids
        assert set(export["tracks"]) == ids
        # The refined scenario reacts to the barrier: a0 slows or detours.
        a0_speeds = [row[4] for row in export["tracks"]["a0"]]
        assert min(a0_speeds) < 5.0

        # Undo twice returns to the pre-edit version byte-for-byte.
        assert run_cli(capsys, "--session", session, "undo")[0] == 0
        assert run_cli(capsys, "--session", session, "undo")[0] == 0
        code, out, _ = run_cli(
            capsys, "--session", session, "export", "--frame", "20"
        )
        assert out == before_out

    def test_session_persists_across_invocations(self, tmp_path, scene_file, capsys):
        session = str(tmp_path / "s")
        run_cli(capsys, "--session", session, "load", str(scene_file))
        code, out, _ = run_cli(
            capsys, "--session", session, "query", "white truck"
        )
        assert code == 0
        assert json.loads(out)["chosen"] == "a1"


class TestBench:
    def test_bench_motion_table_output(self, capsys):
        code, out, _ = run_cli(capsys, "bench", "motion", "--emit", "table")
        assert code == 0
        assert "Motion generation failure rates" in out
        assert "refined" in out and "bypass" in out

    def test_bench_motion_json_deterministic(self, capsys):
        code1, out1, _ = run_cli(capsys, "bench", "motion")
        code2, out2, _ = run_cli(capsys, "bench", "motion")
        assert code1 == code2 == 0
        assert out1 == out2


class TestHttpMode:
    def test_thin_client_against_test_server(
        self, tmp_path, scene_file, capsys, models, monkeypatch
    ):
        app = create_app(store=SessionStore(), models=models)
        client = TestClient(app)

        import scenesplat.cli as cli_mod

        monkeypatch.setattr(
            cli_mod.httpx, "Client", lambda base_url, timeout: client
        )
        code, out, _ = run_cli(
            capsys, "--server", "http://testserver", "load", str(scene_file)
        )
        assert code == 0
        assert json.loads(out)["version"] == 0
        code, out, _ = run_cli(
            capsys, "--server", "http://testserver", "query", "black sedan"
        )
        assert code == 0
        assert json.loads(out)["chosen"] == "a0"
        code, out, _ = run_cli(
            capsys, "--server", "http://testserver", "refine", "--bypass"
        )
        assert code == 0
        assert json.loads(out)["bypass"] is True
