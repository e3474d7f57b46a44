import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenesplat.edit_engine.paths import (
    PathTrack,
    arc_path,
    as_trajectory,
    constant_speed_profile,
    sample_track,
    static_track,
)
from scenesplat.errors import AlignmentWindowError
from scenesplat.scene_model import AgentKind, Pose2, TrackPoint, Trajectory
from scenesplat.temporal_alignment import extract_features, oracle_label
from scenesplat.temporal_alignment.features import ego_frame_displacement

from conftest import DT, H, cruise_agent, make_ego

EGO = make_ego(Pose2(0.0, 0.0, 0.0)).trajectory


def traj(points):
    return Trajectory(tuple(points), timestep=DT)


def stationary_track(x=5.0, y=0.0, n=20):
    return traj([
        TrackPoint(round(i * DT, 9), Pose2(x, y, 0.3), 0.0) for i in range(n)
    ])


class TestExtractFeatures:
    def test_stationary_track(self):
        f = extract_features(stationary_track(), EGO)
        assert f.net_heading_change == 0.0
        assert f.path_length == 0.0
        assert f.straightness == 0.0
        assert f.mean_speed == 0.0

    def test_straight_track_along_x(self):
        # 10 m at 5 m/s starting ahead of an ego facing +x.
        agent = cruise_agent("a", Pose2(5.0, 0.0, 0.0), 5.0)
        pts = [p for p in agent.trajectory.points if p.t <= 2.0 + 1e-9]
        f = extract_features(traj(pts), EGO)
        assert f.net_heading_change == pytest.approx(0.0, abs=1e-12)
        assert f.straightness == pytest.approx(1.0)
        assert f.mean_speed == pytest.approx(5.0)
        assert f.displacement_bearing == pytest.approx(0.0, abs=1e-9)

    def test_quarter_circle_arc(self):
        poses = arc_path(Pose2(0, 0, 0), radius=8.0, sweep=math.pi / 2)
        pts = sample_track(
            PathTrack(poses), constant_speed_profile(5.0, 4.0, DT), 0.0, DT, 41
        )
        f = extract_features(as_trajectory(pts, DT), EGO)
        assert f.net_heading_change == pytest.approx(math.pi / 2, abs=0.02)
        assert f.total_heading_variation == pytest.approx(math.pi / 2, abs=0.02)

    def test_no_overlap_raises(self):
        late = traj([
            TrackPoint(round((50 + i) * DT, 9), Pose2(0, 0, 0), 1.0)
            for i in range(5)
        ])
        early_ego = traj([
            TrackPoint(round(i * DT, 9), Pose2(0, 0, 0), 0.0) for i in range(5)
        ])
        with pytest.raises(AlignmentWindowError):
            extract_features(late, early_ego)

    @given(st.floats(0.2, 5.0))
    @settings(max_examples=25)
    def test_uniform_scaling_about_ego_fixes_angular_features(self, scale):
        agent = cruise_agent("a", Pose2(6.0, 3.0, 0.4), 4.0)
        base = extract_features(agent.trajectory, EGO)
        scaled_points = [
            TrackPoint(
                p.t,
                Pose2(p.pose.x * scale, p.pose.y * scale, p.pose.heading),
                p.speed,
                p.valid,
            )
            for p in agent.trajectory.points
        ]
        scaled = extract_features(traj(scaled_points), EGO)
        assert scaled.net_heading_change == pytest.approx(
            base.net_heading_change, abs=1e-9
        )
        assert scaled.total_heading_variation == pytest.approx(
            base.total_heading_variation, abs=1e-9
        )
        assert scaled.straightness == pytest.approx(base.straightness, abs=1e-9)
        assert scaled.displacement_bearing == pytest.approx(
            base.displacement_bearing, abs=1e-9
        )
        assert scaled.mean_position_bearing == pytest.approx(
            base.mean_position_bearing, abs=1e-9
        )


class TestOracleLabel:
    def test_stationary_vehicle(self):
        motion, _ = oracle_label(stationary_track(), EGO, AgentKind.VEHICLE)
        assert motion == "stationary"

    def test_quarter_circle_ccw_is_turn_left(self):
        poses = arc_path(Pose2(10, 0, 0), radius=8.0, sweep=math.pi / 2)
        pts = sample_track(
            PathTrack(poses), constant_speed_profile(5.0, 2.5, DT), 0.0, DT, 26
        )
        motion, _ = oracle_label(as_trajectory(pts, DT), EGO, AgentKind.VEHICLE)
        assert motion == "turn-left"

    def test_pedestrian_lateral_sign_rule(self):
        # Moving from ego-frame (5, 6) to (5, -6): lateral decreases, so the
        # pedestrian crosses left-to-right.
        n = 87
        pts = [
            TrackPoint(
                round(i * DT, 9),
                Pose2(5.0, 6.0 - 12.0 * i / (n - 1), -math.pi / 2),
                1.4,
            )
            for i in range(n)
        ]
        lon, lat = ego_frame_displacement(traj(pts), EGO)
        assert lat == pytest.approx(-12.0)
        motion, _ = oracle_label(traj(pts), EGO, AgentKind.PEDESTRIAN)
        assert motion == "crossing-left-to-right"

    def test_location_sectors_with_tie_break(self):
        cases = [
            ((20.0, 0.0), "front"),
            ((14.0, 14.0), "front-left"),
            ((0.0, 20.0), "left"),
            ((-20.0, 0.0), "behind"),
            ((0.0, -20.0), "right"),
            ((14.0, -14.0), "front-right"),
        ]
        for (x, y), expected in cases:
            _, location = oracle_label(
                stationary_track(x, y), EGO, AgentKind.VEHICLE
            )
            assert location == expected, (x, y)
        # Exactly on the front / front-left boundary: earlier sector wins.
        b = math.radians(22.5)
        _, location = oracle_label(
            stationary_track(20 * math.cos(b), 20 * math.sin(b)),
            EGO,
            AgentKind.VEHICLE,
        )
        assert location == "front"

    @given(
        st.floats(-30, 30), st.floats(-30, 30),
        st.floats(-3, 3), st.floats(0, 10), st.integers(5, 30),
    )
    @settings(max_examples=60)
    def test_total_and_deterministic(self, x, y, heading, speed, n):
        pts = [
            TrackPoint(
                round(i * DT, 9),
                Pose2(x + speed * i * DT * math.cos(heading),
                      y + speed * i * DT * math.sin(heading),
                      heading),
                speed,
            )
            for i in range(n)
        ]
        first = oracle_label(traj(pts), EGO, AgentKind.VEHICLE)
        second = oracle_label(traj(pts), EGO, AgentKind.VEHICLE)
        assert first == second
        assert first[0] in {
            "stationary", "straight", "turn-left", "turn-right",
            "u-turn", "stopping", "starting",
        }
