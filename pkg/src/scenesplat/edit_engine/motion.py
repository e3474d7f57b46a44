"""Motion controller: anchor-relative placement and trajectory synthesis."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import EditApplyError, OutOfRangeError
from ..scene_model.geometry import Pose2, segment_intersection
from ..scene_model.scenario import (
    MapModel,
    Scenario,
    TrackPoint,
    Trajectory,
    grid_time,
)
from .command import ActionKind, ActionParams
from .paths import (
    PathTrack,
    accel_profile,
    arc_path,
    as_trajectory,
    concat_paths,
    constant_speed_profile,
    decel_profile,
    sample_track,
    static_track,
    straight_path,
)

DEFAULT_TURN_RADIUS = 8.0
DEFAULT_DECEL = 3.0
DEFAULT_ACCEL = 2.0
DEFAULT_SPEED = 5.0


@dataclass(frozen=True)
class SynthesisResult:
    trajectory: Trajectory
    warning: str | None = None


def resolve_anchor_position(
    scene: Scenario,
    anchor_id: str,
    offset: tuple[float, float],
    t: float,
    rotation: float = 0.0,
) -> Pose2:
    """Compose an (longitudinal, lateral) offset in the anchor's frame at t."""
    anchor = scene.agent(anchor_id)
    try:
        pose, _ = anchor.pose_at(t)
    except OutOfRangeError as exc:
        raise EditApplyError(
            f"anchor {anchor_id!r} has no pose at t={t:.2f}: {exc}"
        ) from exc
    x, y = pose.transform_point(offset[0], offset[1])
    return Pose2(x, y, pose.heading + rotation)


def map_intersection_points(map_model: MapModel) -> list[tuple[float, float]]:
    """Crossing points between centerlines of distinct lanes."""
    points: list[tuple[float, float]] = []
    lanes = map_model.lanes
    for i in range(len(lanes)):
        for j in range(i + 1, len(lanes)):
            for a1, a2 in zip(lanes[i].centerline, lanes[i].centerline[1:]):
                for b1, b2 in zip(lanes[j].centerline, lanes[j].centerline[1:]):
                    p = segment_intersection(a1, a2, b1, b2)
                    if p is not None:
                        points.append(p)
    return points


def _distance_to_intersection(start: Pose2, map_model: MapModel) -> float | None:
    """Longitudinal distance to the nearest intersection point ahead."""
    best = None
    c, s = math.cos(start.heading), math.sin(start.heading)
    for px, py in map_intersection_points(map_model):
        lon = (px - start.x) * c + (py - start.y) * s
        lat = -(px - start.x) * s + (py - start.y) * c
        if lon > 0.5 and abs(lat) <= 6.0:
            if best is None or lon < best:
                best = lon
    return best


def _turn_path(
    start: Pose2, map_model: MapModel, radius: float, left: bool, tail: float
) -> tuple[list[Pose2], str | None]:
    warning = None
    dist = _distance_to_intersection(start, map_model)
    if dist is None:
        lead = 0.0
        warning = "no intersection ahead; turning immediately"
    else:
        lead = max(0.0, dist - radius)
    sweep = math.pi / 2 if left else -math.pi / 2
    segments = []
    if lead > 0:
        segments.append(straight_path(start, lead))
        arc_start = segments[0][-1]
    else:
        arc_start = start
    arc = arc_path(arc_start, radius, sweep)
    segments.append(arc)
    segments.append(straight_path(arc[-1], tail))
    return concat_paths(*segments), warning


def remaining_path(traj: Trajectory, start_time: float) -> list[Pose2]:
    """The agent's planned geometric path from ``start_time`` onward."""
    poses = [p.pose for p in traj.valid_points if p.t >= start_time - 1e-9]
    if len(poses) < 2:
        return poses
    # Drop duplicate consecutive positions so arc-length stays monotone.
    out = [poses[0]]
    for p in poses[1:]:
        if math.hypot(p.x - out[-1].x, p.y - out[-1].y) > 1e-9:
            out.append(p)
    return out


def synthesize_trajectory(
    scene: Scenario,
    start_pose: Pose2,
    action: ActionParams,
    start_speed: float | None = None,
    reference_path: list[Pose2] | None = None,
) -> SynthesisResult:
    """Build the edited trajectory (tau_edit) for an action.

    Geometry-from-pose actions (go_straight, turns, static_place, reverse)
    construct a fresh path; re-timing actions (stop, accelerate, decelerate,
    follow) prefer the reference path (the target's remaining planned path)
    when one is supplied.  All tracks sample the scenario timestep grid from
    the action's start_time and clip at the horizon.
    """
    dt = scene.timestep
    horizon = scene.horizon
    start_time = action.start_time or 0.0
    if start_time < 0 or start_time >= grid_time(horizon - 1, dt):
        raise EditApplyError(f"start_time {start_time} outside the horizon")
    duration = grid_time(horizon - 1, dt) - start_time
    speed = action.speed if action.speed is not None else (
        start_speed if start_speed is not None else DEFAULT_SPEED
    )
    heading = (
        action.direction if action.direction is not None else start_pose.heading
    )
    pose = Pose2(start_pose.x, start_pose.y, heading)
    kind = action.action
    warning = None

    if kind is ActionKind.STATIC_PLACE:
        points = static_track(pose, dt, horizon, start_time)
        return SynthesisResult(as_trajectory(points, dt))

    if kind in (ActionKind.GO_STRAIGHT, ActionKind.REVERSE):
        length = max(speed * duration + 1.0, 1.0)
        path = PathTrack(
            straight_path(pose, length, reverse=kind is ActionKind.REVERSE)
        )
        speeds = constant_speed_profile(speed, duration, dt)
    elif kind in (ActionKind.TURN_LEFT, ActionKind.TURN_RIGHT):
        radius = action.radius or DEFAULT_TURN_RADIUS
        tail = max(speed * duration, 5.0)
        poses, warning = _turn_path(
            pose, scene.map, radius, kind is ActionKind.TURN_LEFT, tail
        )
        path = PathTrack(poses)
        speeds = constant_speed_profile(speed, duration, dt)
    elif kind is ActionKind.STOP:
        v0 = start_speed if start_speed is not None else speed
        if action.end_position is not None:
            dx = action.end_position[0] - pose.x
            dy = action.end_position[1] - pose.y
            dist = math.hypot(dx, dy)
        elif action.relative_distance is not None:
            dist = action.relative_distance
        else:
            dist = None
        if dist is not None and dist > 1e-6 and v0 > 0:
            decel = v0 * v0 / (2.0 * dist)
        else:
            decel = DEFAULT_DECEL
        if reference_path and len(reference_path) >= 2:
            path = PathTrack(reference_path)
        else:
            length = (v0 * v0 / (2 * decel) if decel > 0 else 0.0) + 1.0
            path = PathTrack(straight_path(pose, max(length, 1.0)))
        speeds = decel_profile(v0, decel, duration, dt)
    elif kind in (ActionKind.ACCELERATE, ActionKind.DECELERATE):
        v0 = start_speed if start_speed is not None else DEFAULT_SPEED
        if action.speed is not None:
            target = action.speed
        else:
            target = v0 + 3.0 if kind is ActionKind.ACCELERATE else max(
                0.0, v0 - 3.0
            )
        rate = DEFAULT_ACCEL if kind is ActionKind.ACCELERATE else DEFAULT_DECEL
        if reference_path and len(reference_path) >= 2:
            path = PathTrack(reference_path)
        else:
            length = max(target, v0) * duration + 1.0
            path = PathTrack(straight_path(pose, max(length, 1.0)))
        speeds = accel_profile(v0, target, rate, duration, dt)
    elif kind is ActionKind.FOLLOW:
        raise EditApplyError(
            "follow trajectories are built by apply_edit from the leader path"
        )
    else:
        raise EditApplyError(f"unsupported action {kind}")

    points = sample_track(path, speeds, start_time, dt, horizon)
    return SynthesisResult(as_trajectory(points, dt), warning)


def follow_trajectory(
    scene: Scenario,
    leader: Trajectory,
    gap: float,
    start_time: float = 0.0,
) -> Trajectory:
    """Trail the leader along its own path, ``gap`` meters behind by arc length."""
    dt = scene.timestep
    poses = remaining_path(leader, start_time)
    if len(poses) < 2:
        raise EditApplyError("leader path too short to follow")
    path = PathTrack(poses)
    lead_points = [p for p in leader.valid_points if p.t >= start_time - 1e-9]
    # Leader arc position per sample, then shift back by the gap.
    s = 0.0
    points = []
    prev = None
    for p in lead_points:
        if prev is not None:
            s += math.hypot(p.pose.x - prev.pose.x, p.pose.y - prev.pose.y)
        prev = p
        s_follow = s - gap
        pose = path.pose_at(max(0.0, min(s_follow, path.length)))
        if s_follow < 0:
            # Not yet on the leader's path: extrapolate straight back.
            first = path.pose_at(0.0)
            c, si = math.cos(first.heading), math.sin(first.heading)
            pose = Pose2(
                first.x + c * s_follow, first.y + si * s_follow, first.heading
            )
        points.append(TrackPoint(t=p.t, pose=pose, speed=p.speed, valid=True))
    return as_trajectory(points, dt)
