import math

import pytest

from scenesplat.edit_engine import (
    apply_edit,
    default_asset_bank,
    load_asset_bank,
    parse_command,
    resolve_anchor_position,
    retrieve_asset,
    save_asset_bank,
    synthesize_trajectory,
)
from scenesplat.edit_engine.command import ActionKind, ActionParams
from scenesplat.edit_engine.motion import follow_trajectory
from scenesplat.errors import AssetNotFoundError, EditApplyError
from scenesplat.scene_model import AgentKind, Pose2, grid_time

from conftest import DT, H, cruise_agent, simple_scene


class TestAssetRetrieval:
    bank = default_asset_bank()

    def test_bank_of_one(self):
        only = [self.bank[0]]
        assert retrieve_asset(only, "whatever") is only[0]

    def test_cone_query_beats_barrier(self):
        subset = [
            a for a in self.bank if a.id in ("obj-cone", "obj-barrier")
        ]
        assert retrieve_asset(subset, "traffic cone").id == "obj-cone"

    def test_kind_filter_miss_raises(self):
        vehicles = [a for a in self.bank if a.kind is AgentKind.VEHICLE]
        with pytest.raises(AssetNotFoundError):
            retrieve_asset(vehicles, "pedestrian", AgentKind.PEDESTRIAN)

    def test_bank_round_trip(self, tmp_path):
        path = tmp_path / "bank.json"
        save_asset_bank(self.bank, path)
        loaded = load_asset_bank(path)
        assert loaded == self.bank


class TestAnchorResolution:
    def test_zero_offset_is_anchor_pose(self):
        scene = simple_scene(cruise_agent("a", Pose2(10, 0, 0), 5.0))
        pose = resolve_anchor_position(scene, "a", (0.0, 0.0), 0.0)
        sample = scene.agent("a").trajectory.points[0]
        assert (pose.x, pose.y, pose.heading) == (
            sample.pose.x, sample.pose.y, sample.pose.heading
        )

    def test_behind_offset_along_heading(self):
        scene = simple_scene(cruise_agent("a", Pose2(10, 0, 0), 0.001 + 5))
        pose = resolve_anchor_position(scene, "a", (-5.0, 0.0), 0.0)
        assert (pose.x, pose.y) == pytest.approx((5.0, 0.0))

    def test_behind_offset_rotated_frame(self):
        scene = simple_scene(
            cruise_agent("a", Pose2(0, 0, math.pi / 2), 5.0)
        )
        pose = resolve_anchor_position(scene, "a", (-5.0, 0.0), 0.0)
        assert pose.x == pytest.approx(0.0, abs=1e-9)
        assert pose.y == pytest.approx(-5.0)
        assert pose.heading == pytest.approx(math.pi / 2)


class TestSynthesize:
    def test_static_place_holds_pose(self):
        scene = simple_scene(cruise_agent("a", Pose2(10, 5, 0), 5.0))
        result = synthesize_trajectory(
            scene, Pose2(3.0, 4.0, 1.0),
            ActionParams(action=ActionKind.STATIC_PLACE),
        )
        assert len(result.trajectory) == H
        for p in result.trajectory.points:
            assert (p.pose.x, p.pose.y, p.speed) == (3.0, 4.0, 0.0)

    def test_go_straight_kinematics(self):
        scene = simple_scene(cruise_agent("a", Pose2(10, 5, 0), 5.0))
        result = synthesize_trajectory(
            scene, Pose2(0, 0, 0),
            ActionParams(action=ActionKind.GO_STRAIGHT, speed=5.0),
        )
        at2s = result.trajectory.point_at(2.0)
        assert at2s.pose.x == pytest.approx(10.0, abs=1e-6)
        assert at2s.pose.y == pytest.approx(0.0, abs=1e-9)

    def test_stop_closed_form(self):
        # 6 m/s at 3 m/s^2 rests after 2 s and 6 m.
        scene = simple_scene(cruise_agent("a", Pose2(10, 5, 0), 5.0))
        result = synthesize_trajectory(
            scene, Pose2(0, 0, 0),
            ActionParams(action=ActionKind.STOP),
            start_speed=6.0,
        )
        t = result.trajectory
        assert t.point_at(2.0).speed == pytest.approx(0.0, abs=1e-9)
        assert t.point_at(2.0).pose.x == pytest.approx(6.0, abs=0.05)
        assert t.point_at(8.0).pose.x == pytest.approx(6.0, abs=0.05)

    def test_samples_on_grid_and_clipped(self):
        scene = simple_scene(cruise_agent("a", Pose2(10, 5, 0), 5.0))
        result = synthesize_trajectory(
            scene, Pose2(0, 0, 0),
            ActionParams(action=ActionKind.GO_STRAIGHT, speed=3.0,
                         start_time=2.5),
        )
        points = result.trajectory.points
        assert points[0].t == pytest.approx(2.5)
        assert points[-1].t == pytest.approx(grid_time(H - 1, DT))
        for p in points:
            assert abs(round(p.t / DT) * DT - p.t) < 1e-9

    def test_follow_maintains_gap_for_constant_leader(self):
        scene = simple_scene(cruise_agent("lead", Pose2(20, 0, 0), 6.0))
        leader = scene.agent("lead").trajectory
        follower = follow_trajectory(scene, leader, gap=10.0)
        for lp, fp in list(zip(leader.points, follower.points))[20:]:
            gap = math.hypot(
                lp.pose.x - fp.pose.x, lp.pose.y - fp.pose.y
            )
            assert gap == pytest.approx(10.0, abs=0.1)


class TestApplyEdit:
    def test_remove_sole_agent_leaves_ego_only(self, models):
        scene = simple_scene(cruise_agent("a", Pose2(10, 0, 0), 5.0, "lone car"))
        cmd = parse_command('remove target="lone car"')
        result = apply_edit(scene, cmd, models.query_models(), models.asset_bank)
        assert [a.id for a in result.new_scenario.agents] == ["ego"]
        assert result.edited_agent_ids == ("a",)
        # Input untouched.
        assert len(scene.agents) == 2

    def test_modify_stop_preserves_prefix(self, models):
        scene = simple_scene(
            cruise_agent("a", Pose2(0, 0, 0), 6.0, "blue car")
        )
        before = scene.agent("a").trajectory
        cmd = parse_command(
            'modify target="blue car" action=stop start_time=2.0'
        )
        result = apply_edit(scene, cmd, models.query_models(), models.asset_bank)
        after = result.new_scenario.agent("a").trajectory
        for p_old, p_new in zip(before.points, after.points):
            if p_old.t < 2.0 - 1e-9:
                assert p_old == p_new
        # Decelerating afterwards, eventually at rest.
        assert after.point_at(2.1).speed < 6.0
        assert after.points[-1].speed == 0.0

    def test_add_static_barrier_keeps_other_tracks(self, models):
        scene = simple_scene(cruise_agent("a", Pose2(0, 0, 0), 6.0, "blue car"))
        cmd = parse_command('add asset="concrete barrier" at=30.0,8.0')
        result = apply_edit(scene, cmd, models.query_models(), models.asset_bank)
        new = result.new_scenario
        assert len(new.agents) == 3
        added = new.agent(result.edited_agent_ids[0])
        assert added.kind is AgentKind.STATIC_OBJECT
        assert new.agent("a").trajectory == scene.agent("a").trajectory

    def test_replace_keeps_trajectory_swaps_body(self, models):
        scene = simple_scene(cruise_agent("a", Pose2(0, 0, 0), 6.0, "blue car"))
        cmd = parse_command('replace target="blue car" asset="red truck" scale=2.0')
        result = apply_edit(scene, cmd, models.query_models(), models.asset_bank)
        swapped = result.new_scenario.agent("a")
        assert swapped.trajectory == scene.agent("a").trajectory
        assert swapped.appearance_caption == "red truck"
        assert swapped.length == pytest.approx(2.0 * 8.5)

    def test_group_remove_moving_vehicles(self, models):
        from scenesplat.edit_engine.paths import as_trajectory, static_track

        from scenesplat.scene_model import AgentNode

        parked = AgentNode(
            "parked", AgentKind.VEHICLE, 4.6, 1.9, 1.5,
            as_trajectory(static_track(Pose2(5, 5, 0), DT, H), DT),
            "parked car",
        )
        scene = simple_scene(
            cruise_agent("m1", Pose2(0, 0, 0), 6.0, "mover"), parked
        )
        cmd = parse_command("remove group=all_moving_vehicles")
        result = apply_edit(scene, cmd, models.query_models(), models.asset_bank)
        ids = {a.id for a in result.new_scenario.agents}
        assert ids == {"ego", "parked"}

    def test_unsupported_action_for_kind(self, models):
        scene = simple_scene(
            cruise_agent("p", Pose2(5, 0, 0), 1.4, "walker",
                         AgentKind.PEDESTRIAN)
        )
        cmd = parse_command('modify target="walker" action=turn_left')
        with pytest.raises(EditApplyError):
            apply_edit(scene, cmd, models.query_models(), models.asset_bank)

    def test_pedestrian_template_composition(self, models):
        scene = simple_scene(cruise_agent("a", Pose2(0, 0, 0), 6.0, "blue car"))
        cmd = parse_command(
            'add asset="pedestrian with a red backpack" at=5.0,8.0 rotation=-90'
        )
        result = apply_edit(scene, cmd, models.query_models(), models.asset_bank)
        ped = result.new_scenario.agent(result.edited_agent_ids[0])
        assert ped.kind is AgentKind.PEDESTRIAN
        first = ped.trajectory.points[0]
        assert (first.pose.x, first.pose.y) == pytest.approx((5.0, 8.0))
        # Template walks along the rotated +x axis: heading -90 deg => -y.
        later = ped.trajectory.point_at(3.0)
        assert later.pose.y < 8.0 - 2.0
        assert later.pose.x == pytest.approx(5.0, abs=1e-6)
