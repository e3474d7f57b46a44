"""Geometric path construction and arc-length sampling.

A path is a list of (x, y, heading) samples at fine arc-length resolution;
trajectory synthesis lays a speed profile over a path and samples it on the
scenario timestep grid.  The same primitives serve the motion controller and
the synthetic-scenario generator.
"""

from __future__ import annotations

import bisect
import math

from ..scene_model.geometry import Pose2, normalize_heading
from ..scene_model.scenario import TrackPoint, Trajectory, grid_time

PATH_RESOLUTION = 0.25  # meters between consecutive path samples


class PathTrack:
    """Arc-length parameterized polyline with headings."""

    def __init__(self, poses: list[Pose2]):
        if not poses:
            raise ValueError("empty path")
        self.poses = poses
        self.s = [0.0]
        for a, b in zip(poses, poses[1:]):
            self.s.append(self.s[-1] + math.hypot(b.x - a.x, b.y - a.y))

    @property
    def length(self) -> float:
        return self.s[-1]

    def pose_at(self, s: float) -> Pose2:
        if s <= 0.0:
            return self.poses[0]
        if s >= self.length:
            return self.poses[-1]
        i = bisect.bisect_right(self.s, s) - 1
        i = min(i, len(self.poses) - 2)
        seg = self.s[i + 1] - self.s[i]
        if seg <= 1e-12:
            return self.poses[i]
        alpha = (s - self.s[i]) / seg
        a, b = self.poses[i], self.poses[i + 1]
        heading = normalize_heading(
            a.heading + alpha * normalize_heading(b.heading - a.heading)
        )
        return Pose2(
            a.x + alpha * (b.x - a.x), a.y + alpha * (b.y - a.y), heading
        )


def straight_path(start: Pose2, length: float, reverse: bool = False) -> list[Pose2]:
    """Samples along the heading ray (or backward when ``reverse``)."""
    sign = -1.0 if reverse else 1.0
    c, s = math.cos(start.heading), math.sin(start.heading)
    n = max(2, int(math.ceil(length / PATH_RESOLUTION)) + 1)
    step = length / (n - 1) if n > 1 else 0.0
    return [
        Pose2(start.x + sign * c * i * step, start.y + sign * s * i * step,
              start.heading)
        for i in range(n)
    ]


def arc_path(start: Pose2, radius: float, sweep: float) -> list[Pose2]:
    """Constant-curvature arc; positive sweep turns left (CCW)."""
    if radius <= 0:
        raise ValueError("arc radius must be positive")
    side = 1.0 if sweep >= 0 else -1.0
    cx = start.x - side * radius * math.sin(start.heading)
    cy = start.y + side * radius * math.cos(start.heading)
    arc_len = abs(sweep) * radius
    n = max(2, int(math.ceil(arc_len / PATH_RESOLUTION)) + 1)
    poses = []
    for i in range(n):
        phi = sweep * i / (n - 1)
        heading = start.heading + phi
        poses.append(
            Pose2(
                cx + side * radius * math.sin(heading),
                cy - side * radius * math.cos(heading),
                heading,
            )
        )
    return poses


def concat_paths(*segments: list[Pose2]) -> list[Pose2]:
    out: list[Pose2] = []
    for seg in segments:
        start = 1 if out and seg else 0
        out.extend(seg[start:])
    return out


def constant_speed_profile(speed: float, duration: float, dt: float) -> list[float]:
    n = int(round(duration / dt)) + 1
    return [speed] * n


def decel_profile(v0: float, decel: float, duration: float, dt: float) -> list[float]:
    """Speed ramp v0 -> 0 at ``decel`` m/s^2, held at rest afterwards."""
    n = int(round(duration / dt)) + 1
    return [max(0.0, v0 - decel * i * dt) for i in range(n)]


def accel_profile(
    v0: float, target: float, accel: float, duration: float, dt: float
) -> list[float]:
    n = int(round(duration / dt)) + 1
    out = []
    for i in range(n):
        if target >= v0:
            out.append(min(target, v0 + accel * i * dt))
        else:
            out.append(max(target, v0 - accel * i * dt))
    return out


def sample_track(
    path: PathTrack,
    speeds: list[float],
    start_time: float,
    dt: float,
    horizon: int,
) -> list[TrackPoint]:
    """Integrate a speed profile along a path onto the timestep grid.

    The profile is trapezoid-integrated; once the path is exhausted the agent
    rests at the final pose.  Samples are clipped to [start_time,
    horizon*dt).
    """
    start_index = int(round(start_time / dt))
    points = []
    s = 0.0
    for i in range(start_index, horizon):
        k = i - start_index
        v = speeds[k] if k < len(speeds) else (speeds[-1] if speeds else 0.0)
        if k > 0:
            v_prev = speeds[k - 1] if k - 1 < len(speeds) else v
            s += 0.5 * (v_prev + v) * dt
        if s >= path.length and path.length > 0:
            v = 0.0
        points.append(
            TrackPoint(
                t=grid_time(i, dt),
                pose=path.pose_at(min(s, path.length)),
                speed=v,
                valid=True,
            )
        )
    return points


def static_track(pose: Pose2, dt: float, horizon: int, start_time: float = 0.0):
    start_index = int(round(start_time / dt))
    return [
        TrackPoint(t=grid_time(i, dt), pose=pose, speed=0.0, valid=True)
        for i in range(start_index, horizon)
    ]


def as_trajectory(points: list[TrackPoint], dt: float) -> Trajectory:
    return Trajectory(tuple(points), timestep=dt)
