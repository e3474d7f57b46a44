import math

import pytest

from scenesplat.errors import (
    AlignmentWindowError,
    InvalidInputError,
    OutOfRangeError,
    ScenarioFormatError,
)
from scenesplat.scene_model import (
    AgentKind,
    AgentNode,
    Pose2,
    Scenario,
    TrackPoint,
    Trajectory,
    grid_time,
    interpolate_pose,
    load_scenario,
    save_scenario,
    scenario_from_document,
    scenario_to_document,
    scenario_to_text,
)

from conftest import cruise_agent, make_ego, simple_scene


def track(points):
    return Trajectory(tuple(points), timestep=0.1)


class TestTrajectoryInvariants:
    def test_strictly_increasing_times_required(self):
        p = TrackPoint(0.0, Pose2(0, 0, 0), 1.0)
        with pytest.raises(InvalidInputError):
            track([p, p])

    def test_grid_step_enforced(self):
        with pytest.raises(InvalidInputError):
            track([
                TrackPoint(0.0, Pose2(0, 0, 0), 1.0),
                TrackPoint(0.25, Pose2(1, 0, 0), 1.0),
            ])

    def test_negative_speed_rejected(self):
        with pytest.raises(InvalidInputError):
            TrackPoint(0.0, Pose2(0, 0, 0), -1.0)

    def test_dynamic_agent_needs_two_valid_points(self):
        t = track([TrackPoint(0.0, Pose2(0, 0, 0), 1.0)])
        with pytest.raises(InvalidInputError):
            AgentNode("x", AgentKind.VEHICLE, 4, 2, 1.5, t)
        # Static objects may carry a single-sample track.
        AgentNode("x", AgentKind.STATIC_OBJECT, 1, 1, 1, t)


class TestScenarioInvariants:
    def test_exactly_one_ego(self):
        a = cruise_agent("a", Pose2(0, 0, 0), 5.0)
        with pytest.raises(InvalidInputError):
            Scenario(agents=(a,), horizon=91)

    def test_unique_ids(self):
        a = cruise_agent("a", Pose2(0, 0, 0), 5.0)
        with pytest.raises(InvalidInputError):
            Scenario(agents=(make_ego(), a, a), horizon=91)

    def test_track_inside_horizon(self):
        a = cruise_agent("a", Pose2(0, 0, 0), 5.0)
        with pytest.raises(InvalidInputError):
            Scenario(agents=(make_ego(), a), horizon=10)


class TestInterpolatePose:
    def test_exact_sample_returned(self):
        a = cruise_agent("a", Pose2(0, 0, 0), 5.0)
        pose, speed = interpolate_pose(a.trajectory, 1.0)
        sample = a.trajectory.point_at(1.0)
        assert (pose.x, pose.y, speed) == (
            sample.pose.x, sample.pose.y, sample.speed
        )

    def test_linear_midpoint(self):
        t = track([
            TrackPoint(0.0, Pose2(0, 0, 0), 1.0),
            TrackPoint(0.1, Pose2(2, 0, 0), 3.0),
        ])
        pose, speed = interpolate_pose(t, 0.05)
        assert (pose.x, pose.y, pose.heading) == pytest.approx((1.0, 0.0, 0.0))
        assert speed == pytest.approx(2.0)

    def test_shortest_arc_heading(self):
        t = track([
            TrackPoint(0.0, Pose2(0, 0, math.radians(170)), 1.0),
            TrackPoint(0.1, Pose2(0, 0, math.radians(-170)), 1.0),
        ])
        pose, _ = interpolate_pose(t, 0.05)
        assert abs(pose.heading) == pytest.approx(math.pi, abs=1e-9)

    def test_outside_span_raises(self):
        a = cruise_agent("a", Pose2(0, 0, 0), 5.0)
        with pytest.raises(OutOfRangeError):
            interpolate_pose(a.trajectory, 100.0)


class TestSerialization:
    def test_round_trip_identity_after_normalization(self, tmp_path):
        scene = simple_scene(
            cruise_agent("a0", Pose2(-10.0, 1.5, 0.25), 5.0, "black sedan"),
            cruise_agent("p0", Pose2(3.0, -2.0, 1.5), 1.4,
                         "pedestrian", AgentKind.PEDESTRIAN),
        )
        path = tmp_path / "scene.json"
        save_scenario(scene, path)
        loaded = load_scenario(path)
        # Load -> serialize is byte-identical.
        assert scenario_to_text(loaded) == path.read_text(encoding="utf-8")
        # And load(save(load(...))) is field-for-field identical.
        again = scenario_from_document(scenario_to_document(loaded))
        assert again == loaded

    def test_nine_significant_digits(self, tmp_path):
        agent = cruise_agent("a0", Pose2(1.2345678987654321, 0, 0), 5.0)
        scene = simple_scene(agent)
        doc = scenario_to_document(scene)
        x0 = doc["agents"][1]["track"][0][1]
        assert x0 == float(f"{1.2345678987654321:.9g}")

    def test_format_field_mandatory(self):
        scene = simple_scene(cruise_agent("a0", Pose2(0, 1, 0), 5.0))
        doc = scenario_to_document(scene)
        assert doc["format"] == 1
        del doc["format"]
        with pytest.raises(ScenarioFormatError):
            scenario_from_document(doc)

    def test_malformed_track_reported(self):
        scene = simple_scene(cruise_agent("a0", Pose2(0, 1, 0), 5.0))
        doc = scenario_to_document(scene)
        doc["agents"][0]["track"][0] = [0.0]
        with pytest.raises(ScenarioFormatError):
            scenario_from_document(doc)

    def test_grid_time_is_serialization_stable(self):
        for i in range(0, 2000, 7):
            t = grid_time(i, 0.1)
            assert float(f"{t:.9g}") == t
