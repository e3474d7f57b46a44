"""Scripted evaluation suites: ambiguity queries, task commands, conflicts."""

from __future__ import annotations

import math

from ..edit_engine.paths import (
    PathTrack,
    arc_path,
    as_trajectory,
    concat_paths,
    constant_speed_profile,
    decel_profile,
    sample_track,
    static_track,
    straight_path,
)
from ..scene_model.geometry import Pose2
from ..scene_model.scenario import AgentKind, AgentNode, Scenario, Trajectory
from .benchmarks import ConflictCase, QueryCase, TaskCase
from .maps import crosswalk_road, four_way_intersection, straight_road

DT = 0.1
H = 91
DURATION = (H - 1) * DT

VEH_DIMS = (4.6, 1.9, 1.5)
PED_DIMS = (0.5, 0.5, 1.8)


def _agent(
    agent_id: str,
    kind: AgentKind,
    points,
    caption: str,
    dims=None,
    is_ego: bool = False,
) -> AgentNode:
    if dims is None:
        dims = PED_DIMS if kind is AgentKind.PEDESTRIAN else VEH_DIMS
    return AgentNode(
        id=agent_id,
        kind=kind,
        length=dims[0],
        width=dims[1],
        height=dims[2],
        trajectory=as_trajectory(points, DT),
        appearance_caption=caption,
        is_ego=is_ego,
    )


def _ego(pose: Pose2) -> AgentNode:
    return _agent("ego", AgentKind.VEHICLE, static_track(pose, DT, H),
                  "ego vehicle", is_ego=True)


def _cruise(start: Pose2, speed: float, start_time: float = 0.0):
    path = PathTrack(straight_path(start, speed * DURATION + 5))
    return sample_track(
        path, constant_speed_profile(speed, DURATION, DT), start_time, DT, H
    )


def _brake(start: Pose2, v0: float, decel: float, brake_after: float):
    path = PathTrack(straight_path(start, v0 * DURATION + 5))
    speeds = constant_speed_profile(v0, brake_after, DT)[:-1] + decel_profile(
        v0, decel, DURATION - brake_after, DT
    )
    return sample_track(path, speeds, 0.0, DT, H)


def _left_turn(start: Pose2, speed: float, lead: float, radius: float = 8.0,
               right: bool = False):
    sweep = -math.pi / 2 if right else math.pi / 2
    segs = concat_paths(
        straight_path(start, lead),
        arc_path(Pose2(*start.transform_point(lead, 0.0), start.heading),
                 radius, sweep),
    )
    segs = concat_paths(segs, straight_path(segs[-1], speed * DURATION))
    return sample_track(
        PathTrack(segs), constant_speed_profile(speed, DURATION, DT), 0.0, DT, H
    )


# ---------------------------------------------------------------------------
# Ambiguity suite: identical captions, distinct motion or location.
# ---------------------------------------------------------------------------

def _pair_scene(maker_a, maker_b, caption: str, kind: AgentKind, flip: bool,
                map_model=None) -> tuple[Scenario, str, str]:
    """Two same-caption agents; returns (scene, id of A's agent, id of B's)."""
    pts_a, pts_b = maker_a(), maker_b()
    if flip:
        pts_a, pts_b = pts_b, pts_a
    ego = _ego(Pose2(-50.0, -1.75, 0.0))
    a0 = _agent("a0", kind, pts_a, caption)
    a1 = _agent("a1", kind, pts_b, caption)
    scene = Scenario(
        agents=(ego, a0, a1),
        map=map_model or four_way_intersection(),
        horizon=H,
        timestep=DT,
    )
    first, second = ("a1", "a0") if flip else ("a0", "a1")
    return scene, first, second


def ambiguity_suite() -> list[QueryCase]:
    """32 cases; ground truth alternates between the smaller and larger id."""
    cases: list[QueryCase] = []

    straight_mk = lambda: _cruise(Pose2(-38.0, -1.75, 0.0), 6.0)
    turner_mk = lambda: _left_turn(Pose2(-26.0, -1.75, 0.0), 4.5, 12.0)
    right_mk = lambda: _left_turn(Pose2(-26.0, -1.75, 0.0), 4.5, 12.0, right=True)
    parked_mk = lambda: static_track(Pose2(-12.0, -1.75, 0.0), DT, H)
    stopper_mk = lambda: _brake(Pose2(-38.0, -1.75, 0.0), 6.5, 2.5, 1.0)

    vehicle_prompts = [
        ("black sedan turning left", turner_mk, straight_mk),
        ("black sedan driving straight", straight_mk, turner_mk),
        ("white sedan turning right", right_mk, straight_mk),
        ("white sedan stopping", stopper_mk, straight_mk),
        ("silver suv parked", parked_mk, straight_mk),
        ("red truck turning left", turner_mk, right_mk),
        ("blue van driving straight ahead", straight_mk, stopper_mk),
        ("gray coupe stopping slowing", stopper_mk, parked_mk),
    ]
    for i, (prompt, gt_mk, other_mk) in enumerate(vehicle_prompts):
        caption = " ".join(prompt.split()[:2])
        for flip in (False, True):
            scene, gt_id, _ = _pair_scene(
                gt_mk, other_mk, caption, AgentKind.VEHICLE, flip
            )
            cases.append(QueryCase(scene, prompt, gt_id, AgentKind.VEHICLE))

    # Location-only ambiguity: both parked, differing in sector from the ego.
    def parked_at(y: float, x: float = -50.0):
        return lambda: static_track(Pose2(x, -1.75 + y, 0.0), DT, H)

    location_prompts = [
        ("white sedan on the left side", parked_at(18.0), parked_at(-18.0)),
        ("black sedan on the right side", parked_at(-18.0), parked_at(18.0)),
        ("red truck in front ahead", parked_at(0.0, -20.0), parked_at(20.0)),
        ("silver suv on the left", parked_at(22.0), parked_at(-22.0)),
    ]
    for prompt, gt_mk, other_mk in location_prompts:
        caption = " ".join(prompt.split()[:2])
        for flip in (False, True):
            scene, gt_id, _ = _pair_scene(
                gt_mk, other_mk, caption, AgentKind.VEHICLE, flip
            )
            cases.append(QueryCase(scene, prompt, gt_id, AgentKind.VEHICLE))

    # Pedestrian motion ambiguity on the crosswalk map.
    cross_mk = lambda: _cruise(Pose2(9.5, 6.0, -math.pi / 2), 1.4)
    stand_mk = lambda: static_track(Pose2(2.0, 4.5, 0.0), DT, H)
    walk_mk = lambda: _cruise(Pose2(-18.0, 4.5, 0.0), 1.4)
    ped_stop_mk = lambda: _brake(Pose2(-18.0, 4.5, 0.0), 1.5, 0.4, 3.0)

    ped_prompts = [
        ("pedestrian crossing the street", cross_mk, stand_mk),
        ("pedestrian standing waiting", stand_mk, cross_mk),
        ("pedestrian walking straight", walk_mk, stand_mk),
        ("pedestrian stopping", ped_stop_mk, walk_mk),
    ]
    for prompt, gt_mk, other_mk in ped_prompts:
        for flip in (False, True):
            scene, gt_id, _ = _pair_scene(
                gt_mk, other_mk, "pedestrian in a blue jacket",
                AgentKind.PEDESTRIAN, flip, map_model=crosswalk_road(),
            )
            cases.append(QueryCase(scene, prompt, gt_id, AgentKind.PEDESTRIAN))
    return cases


# ---------------------------------------------------------------------------
# Task command suite: 38 commands over the Table-2-style categories.
# ---------------------------------------------------------------------------

def _task_scene() -> Scenario:
    # Ego parked in the westbound lane so added eastbound traffic is clear.
    ego = _ego(Pose2(-55.0, 1.75, math.pi))
    agents = (
        ego,
        _agent("a0", AgentKind.VEHICLE,
               _cruise(Pose2(-45.0, -1.75, 0.0), 5.5), "black sedan"),
        _agent("a1", AgentKind.VEHICLE,
               _left_turn(Pose2(-24.0, -1.75, 0.0), 4.0, 10.0), "white sedan"),
        _agent("a2", AgentKind.VEHICLE,
               static_track(Pose2(25.0, 1.75, math.pi), DT, H), "gray suv"),
        _agent("a3", AgentKind.PEDESTRIAN,
               _cruise(Pose2(9.5, 6.0, -math.pi / 2), 1.3),
               "pedestrian with a red backpack"),
        _agent("a4", AgentKind.PEDESTRIAN,
               _cruise(Pose2(-30.0, 4.5, 0.0), 1.4),
               "construction worker in a yellow vest"),
    )
    return Scenario(agents=agents, map=four_way_intersection(),
                    horizon=H, timestep=DT)


def task_command_suite() -> list[TaskCase]:
    scene = _task_scene()

    def tc(category: str, command: str) -> TaskCase:
        return TaskCase(category=category, scenario=scene, command=command)

    return [
        # Add vehicles (6)
        tc("add_veh", 'add asset="red truck" anchor="black sedan driving straight"'
                      ' offset=behind:14.0 action=follow distance=14.0'),
        tc("add_veh", 'add asset="white sedan" at=60.0,1.75'
                      ' action=go_straight speed=5.0 direction=180'),
        tc("add_veh", 'add asset="city bus" at=1.75,-55.0'
                      ' action=go_straight speed=4.5 direction=90'),
        tc("add_veh", 'add asset="gray suv" anchor="gray suv parked"'
                      ' offset=behind:8.0'),
        tc("add_veh", 'add asset="sedan" at=-62.0,-1.75 action=go_straight'
                      ' speed=5.5'),
        tc("add_veh", 'add asset="bulldozer" at=-1.75,58.0 action=go_straight'
                      ' speed=3.0 direction=-90'),
        # Add static objects (9)
        tc("add_obj", 'add asset="traffic cone" at=20.0,-1.75'),
        tc("add_obj", 'add asset="traffic cone" anchor="black sedan driving'
                      ' straight" offset=ahead:35.0'),
        tc("add_obj", 'add asset="concrete barrier" at=9.5,-1.0 rotation=90'),
        tc("add_obj", 'add asset="traffic sign" at=14.0,4.8'),
        tc("add_obj", 'add asset="concrete barrier" at=-14.0,5.2'),
        tc("add_obj", 'add asset="traffic cone" at=30.0,-2.6 scale=1.5'),
        tc("add_obj", 'add asset="traffic sign" anchor="gray suv parked"'
                      ' offset=right:2.5'),
        tc("add_obj", 'add asset="traffic cone" at=-8.0,-2.4'),
        tc("add_obj", 'add asset="concrete barrier" at=40.0,1.75 rotation=15'),
        # Add pedestrians (7)
        tc("add_ped", 'add asset="pedestrian with a red backpack" at=11.0,6.5'
                      ' rotation=-90'),
        tc("add_ped", 'add asset="construction worker" at=-20.0,-5.0'
                      ' action=go_straight speed=1.2'),
        tc("add_ped", 'add asset="pedestrian standing" at=16.0,5.0'),
        tc("add_ped", 'add asset="pedestrian" anchor="gray suv parked"'
                      ' offset=left:3.0'),
        tc("add_ped", 'add asset="pedestrian with a red backpack" at=-5.0,6.0'
                      ' action=go_straight speed=1.5 direction=-90'),
        tc("add_ped", 'add asset="construction worker" at=35.0,-5.5'
                      ' action=go_straight speed=1.0 direction=90'),
        tc("add_ped", 'add asset="pedestrian standing" at=-35.0,5.5'),
        # Modify vehicles (5)
        tc("modify_veh", 'modify target="white sedan turning left"'
                         ' action=go_straight speed=4.0'),
        tc("modify_veh", 'modify target="black sedan driving straight"'
                         ' action=stop start_time=2.0'),
        tc("modify_veh", 'modify target="black sedan" action=accelerate'
                         ' speed=8.0'),
        tc("modify_veh", 'modify target="white sedan turning left"'
                         ' action=turn_right radius=9.0'),
        tc("modify_veh", 'modify target="black sedan" action=decelerate'
                         ' speed=3.0'),
        # Modify pedestrians (5)
        tc("modify_ped", 'modify target="pedestrian crossing" action=stop'
                         ' start_time=2.0'),
        tc("modify_ped", 'modify target="worker walking" action=accelerate'
                         ' speed=2.0'),
        tc("modify_ped", 'modify target="pedestrian crossing the street"'
                         ' action=decelerate speed=0.8'),
        tc("modify_ped", 'modify target="worker in a yellow vest"'
                         ' action=go_straight speed=1.4'),
        tc("modify_ped", 'modify target="pedestrian with a red backpack"'
                         ' action=stop start_time=1.5'),
        # Remove (6)
        tc("remove", 'remove target="gray suv parked"'),
        tc("remove", 'remove target="pedestrian crossing the street"'),
        tc("remove", 'remove target="white sedan turning left"'),
        tc("remove", "remove group=all_moving_pedestrians"),
        tc("remove", "remove group=all_moving_vehicles"),
        tc("remove", "remove group=all_static_objects"),
    ]


# ---------------------------------------------------------------------------
# Conflict suite: 20 scripted scenarios with an edited agent each.
# ---------------------------------------------------------------------------

def _scene(agents, map_model) -> Scenario:
    return Scenario(agents=tuple(agents), map=map_model, horizon=H, timestep=DT)


def _case_brake(name: str, gap: float, v: float) -> ConflictCase:
    # Ego parked far behind in the opposite lane, clear of the interaction.
    ego = _ego(Pose2(-60.0, 1.75, math.pi))
    leader_pts = _brake(Pose2(-20.0 + gap, -1.75, 0.0), v, 3.5, 1.2)
    leader = _agent("lead", AgentKind.VEHICLE, leader_pts, "white sedan")
    follower = _agent(
        "fol", AgentKind.VEHICLE, _cruise(Pose2(-20.0, -1.75, 0.0), v),
        "black sedan",
    )
    scene = _scene([ego, leader, follower], straight_road())
    return ConflictCase(name, scene, {"lead": leader.trajectory})


def _case_cone(name: str, cone_x: float, v: float) -> ConflictCase:
    ego = _ego(Pose2(-60.0, 1.75, math.pi))
    cone = _agent("cone", AgentKind.STATIC_OBJECT,
                  static_track(Pose2(cone_x, -1.75, 0.0), DT, H),
                  "orange traffic cone", dims=(0.4, 0.4, 0.7))
    driver = _agent("drv", AgentKind.VEHICLE,
                    _cruise(Pose2(cone_x - 45.0, -1.75, 0.0), v), "blue van")
    scene = _scene([ego, cone, driver], straight_road())
    return ConflictCase(name, scene, {"cone": cone.trajectory})


def _case_ped_barrier(name: str, ped_x: float) -> ConflictCase:
    ego = _ego(Pose2(-30.0, -1.75, 0.0))
    barrier = _agent("bar", AgentKind.STATIC_OBJECT,
                     static_track(Pose2(ped_x, 0.0, math.pi / 2), DT, H),
                     "concrete barrier", dims=(2.0, 0.6, 1.1))
    ped = _agent("ped", AgentKind.PEDESTRIAN,
                 _cruise(Pose2(ped_x, 7.0, -math.pi / 2), 1.4),
                 "pedestrian in a blue jacket")
    scene = _scene([ego, barrier, ped], crosswalk_road())
    return ConflictCase(name, scene, {"bar": barrier.trajectory})


def _case_jaywalker(name: str, v: float, ped_speed: float) -> ConflictCase:
    ego = _ego(Pose2(-60.0, 1.75, math.pi))
    car = _agent("car", AgentKind.VEHICLE,
                 _cruise(Pose2(-40.0, -1.75, 0.0), v), "silver suv")
    ped = _agent("jay", AgentKind.PEDESTRIAN,
                 _cruise(Pose2(5.0, 6.0, -math.pi / 2), ped_speed),
                 "jaywalking pedestrian")
    scene = _scene([ego, car, ped], straight_road())
    return ConflictCase(name, scene, {"jay": ped.trajectory})


def _case_crossing(name: str, v_ew: float, v_ns: float) -> ConflictCase:
    ego = _ego(Pose2(-60.0, 1.75, math.pi))
    runner = _agent("run", AgentKind.VEHICLE,
                    _cruise(Pose2(-34.0, -1.75, 0.0), v_ew), "black sedan")
    crosser = _agent("crs", AgentKind.VEHICLE,
                     _cruise(Pose2(1.75, -34.0, math.pi / 2), v_ns),
                     "white sedan")
    scene = _scene([ego, runner, crosser], four_way_intersection())
    return ConflictCase(name, scene, {"run": runner.trajectory})


def _case_merge(name: str, v: float) -> ConflictCase:
    ego = _ego(Pose2(-60.0, 1.75, math.pi))
    truck = _agent("trk", AgentKind.VEHICLE,
                   _cruise(Pose2(1.75, -40.0, math.pi / 2), v), "red truck",
                   dims=(8.5, 2.5, 3.2))
    stream = _agent("st1", AgentKind.VEHICLE,
                    _cruise(Pose2(-30.0, -1.75, 0.0), 6.0), "gray suv")
    scene = _scene([ego, truck, stream], four_way_intersection())
    return ConflictCase(name, scene, {"trk": truck.trajectory})


def _case_parked_detour(name: str, v: float, stop_x: float) -> ConflictCase:
    ego = _ego(Pose2(-65.0, 1.75, math.pi))
    stopper_pts = _brake(Pose2(stop_x, -1.75, 0.0), 4.0, 3.0, 1.1)
    stopper = _agent("stp", AgentKind.VEHICLE, stopper_pts, "white sedan")
    trailer = _agent("trl", AgentKind.VEHICLE,
                     _cruise(Pose2(stop_x - 25.0, -1.75, 0.0), v), "gray suv")
    scene = _scene([ego, stopper, trailer], straight_road())
    return ConflictCase(name, scene, {"stp": stopper.trajectory})


def conflict_suite() -> list[ConflictCase]:
    """20 resolvable conflict scenarios across seven interaction families."""
    return [
        _case_brake("brake-close", 14.0, 7.0),
        _case_brake("brake-mid", 18.0, 8.0),
        _case_brake("brake-fast", 22.0, 9.0),
        _case_cone("cone-near", 5.0, 6.0),
        _case_cone("cone-mid", 12.0, 7.0),
        _case_cone("cone-far", 20.0, 8.0),
        _case_ped_barrier("ped-barrier-a", 9.0),
        _case_ped_barrier("ped-barrier-b", 10.0),
        _case_ped_barrier("ped-barrier-c", 11.0),
        _case_jaywalker("jaywalker-slow", 6.0, 1.2),
        _case_jaywalker("jaywalker-mid", 7.0, 1.4),
        _case_jaywalker("jaywalker-fast", 8.0, 1.6),
        _case_crossing("crossing-even", 5.5, 5.5),
        _case_crossing("crossing-ew-fast", 7.0, 5.0),
        _case_crossing("crossing-ns-fast", 5.0, 7.0),
        _case_merge("merge-slow", 4.5),
        _case_merge("merge-fast", 6.0),
        _case_parked_detour("parked-detour-a", 6.0, 0.0),
        _case_parked_detour("parked-detour-b", 7.0, 8.0),
        _case_parked_detour("parked-detour-c", 6.5, -8.0),
    ]


def trap_scenario() -> ConflictCase:
    """A cone dropped inside a parked car: no agent can move, so the overlap
    is unresolvable in both modes."""
    ego = _ego(Pose2(-30.0, -1.75, 0.0))
    parked = _agent("pkd", AgentKind.VEHICLE,
                    static_track(Pose2(10.0, -1.75, 0.0), DT, H), "black sedan")
    cone = _agent("cone", AgentKind.STATIC_OBJECT,
                  static_track(Pose2(10.5, -1.75, 0.0), DT, H),
                  "orange traffic cone", dims=(0.4, 0.4, 0.7))
    scene = _scene([ego, parked, cone], straight_road())
    return ConflictCase("trap-overlap", scene, {"cone": cone.trajectory})
