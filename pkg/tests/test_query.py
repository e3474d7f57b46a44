import pytest

from scenesplat.errors import InvalidInputError, NoCandidatesError
from scenesplat.object_query import (
    QueryRequest,
    QueryWeights,
    query,
    split_query,
)
from scenesplat.scene_model import AgentKind, Pose2, Scenario

from conftest import cruise_agent, make_ego, simple_scene


class TestSplitQuery:
    def test_motion_tokens_route_to_temporal(self):
        appearance, temporal = split_query("black car turning left")
        assert appearance == "black car"
        assert temporal == "turning left"

    def test_no_motion_tokens(self):
        appearance, temporal = split_query("pedestrian")
        assert appearance == "pedestrian"
        assert temporal == ""

    def test_glue_words_leave_appearance(self):
        appearance, temporal = split_query("the white truck at the intersection")
        assert appearance == "white truck"
        assert "intersection" in temporal

    def test_empty_text_rejected_upstream(self):
        with pytest.raises(InvalidInputError):
            QueryRequest(text="   ")


class TestQuery:
    def test_singleton_scene_always_chosen(self, models):
        scene = simple_scene(cruise_agent("only", Pose2(10, 0, 0), 5.0, "car"))
        result = query(scene, QueryRequest(text="anything goes"), models.query_models())
        assert result.chosen == "only"

    def test_appearance_dominates_distinct_captions(self, models):
        scene = simple_scene(
            cruise_agent("a0", Pose2(10, 3, 0), 5.0, "black sedan"),
            cruise_agent("a1", Pose2(10, -3, 0), 5.0, "white truck"),
        )
        result = query(
            scene, QueryRequest(text="white truck parked"), models.query_models()
        )
        assert result.chosen == "a1"

    def test_motion_resolves_appearance_tie(self, models):
        from scenesplat.eval_harness.suites import _pair_scene, _cruise, _left_turn
        from scenesplat.edit_engine.paths import static_track

        turner = lambda: _left_turn(Pose2(-26.0, -1.75, 0.0), 4.5, 12.0)
        straight = lambda: _cruise(Pose2(-38.0, -1.75, 0.0), 6.0)
        scene, turn_id, _ = _pair_scene(
            turner, straight, "black sedan", AgentKind.VEHICLE, False
        )
        result = query(
            scene,
            QueryRequest(text="black sedan turning left"),
            models.query_models(),
        )
        assert result.chosen == turn_id

    def test_agent_order_does_not_change_choice(self, models):
        a = cruise_agent("a9", Pose2(10, 3, 0), 5.0, "black sedan")
        b = cruise_agent("a1", Pose2(10, -3, 0), 5.0, "black sedan")
        r1 = query(
            Scenario(agents=(make_ego(), a, b), horizon=91),
            QueryRequest(text="black sedan"),
            models.query_models(),
        )
        r2 = query(
            Scenario(agents=(make_ego(), b, a), horizon=91),
            QueryRequest(text="black sedan"),
            models.query_models(),
        )
        assert r1.chosen == r2.chosen == r2.ranked[0].agent_id

    def test_added_lower_scoring_agent_never_wins(self, models):
        scene = simple_scene(
            cruise_agent("a0", Pose2(10, 3, 0), 5.0, "red truck"),
        )
        base = query(scene, QueryRequest(text="red truck"), models.query_models())
        bigger = simple_scene(
            cruise_agent("a0", Pose2(10, 3, 0), 5.0, "red truck"),
            cruise_agent("a1", Pose2(10, -3, 0), 5.0, "blue bicycle"),
        )
        result = query(bigger, QueryRequest(text="red truck"), models.query_models())
        assert result.chosen == base.chosen == "a0"
        scores = {s.agent_id: s.total for s in result.ranked}
        assert scores["a1"] < scores["a0"]

    def test_single_appearance_survivor_wins_despite_motion(self, models):
        # a1's caption shares nothing with the query; only a0 passes the gate.
        scene = simple_scene(
            cruise_agent("a0", Pose2(10, 3, 0), 0.0 + 5.0, "green bus"),
            cruise_agent("a1", Pose2(10, -3, 0), 5.0, "black sedan"),
        )
        result = query(
            scene,
            QueryRequest(text="green bus turning left"),
            models.query_models(),
        )
        assert result.chosen == "a0"
        assert [s.agent_id for s in result.ranked] == ["a0"]

    def test_kind_hint_filters(self, models):
        scene = simple_scene(
            cruise_agent("v0", Pose2(10, 3, 0), 5.0, "commuter"),
            cruise_agent("p0", Pose2(10, -3, 0), 1.4, "commuter",
                         AgentKind.PEDESTRIAN),
        )
        result = query(
            scene,
            QueryRequest(text="commuter", agent_kind_hint=AgentKind.PEDESTRIAN),
            models.query_models(),
        )
        assert result.chosen == "p0"

    def test_no_agents_raises(self, models):
        scene = Scenario(agents=(make_ego(),), horizon=91)
        with pytest.raises(NoCandidatesError):
            query(scene, QueryRequest(text="car"), models.query_models())

    def test_appearance_filter_empty_flag(self, models):
        scene = simple_scene(
            cruise_agent("a0", Pose2(10, 3, 0), 5.0, "zebra"),
        )
        result = query(
            scene,
            QueryRequest(text="orange submarine"),
            models.query_models(),
            QueryWeights(tau_app=0.5),
        )
        assert result.appearance_filter_empty
        assert result.chosen == "a0"
