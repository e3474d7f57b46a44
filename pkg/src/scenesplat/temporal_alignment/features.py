"""Kinematic feature extraction from trajectories.

Ten fixed features summarize how an agent moves (speed, turning, path shape)
and where it sits relative to the ego vehicle.  Ego-frame quantities use the
ego pose at the first frame of the overlapping time window, so a moving ego
does not smear the location signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import AlignmentWindowError
from ..scene_model.geometry import normalize_heading, wrap_angle_diff
from ..scene_model.scenario import Trajectory, interpolate_pose

FEATURE_DIM = 10

_GRID_TOL = 1e-6


@dataclass(frozen=True)
class KinematicFeatures:
    net_heading_change: float
    total_heading_variation: float
    mean_speed: float
    initial_speed: float
    final_speed: float
    path_length: float
    straightness: float
    displacement_bearing: float
    mean_position_bearing: float
    mean_position_range: float

    def as_vector(self) -> np.ndarray:
        return np.array(
            [
                self.net_heading_change,
                self.total_heading_variation,
                self.mean_speed,
                self.initial_speed,
                self.final_speed,
                self.path_length,
                self.straightness,
                self.displacement_bearing,
                self.mean_position_bearing,
                self.mean_position_range,
            ],
            dtype=np.float64,
        )

    # Ego-frame endpoint displacement, used by the rule-based labeler.
    def __post_init__(self):
        vec = self.as_vector()
        if not np.all(np.isfinite(vec)):
            raise AlignmentWindowError("non-finite kinematic features")


def overlap_window(traj: Trajectory, ego_traj: Trajectory):
    """Valid samples of ``traj`` inside the shared time window with ego."""
    try:
        t0 = max(traj.start_time, ego_traj.start_time)
        t1 = min(traj.end_time, ego_traj.end_time)
    except AlignmentWindowError:
        raise AlignmentWindowError("a trajectory has no valid points")
    if t1 - t0 < -_GRID_TOL:
        raise AlignmentWindowError("trajectories share no time window")
    window = [p for p in traj.valid_points if t0 - _GRID_TOL <= p.t <= t1 + _GRID_TOL]
    if len(window) < 2:
        raise AlignmentWindowError(
            "need >= 2 valid samples inside the shared window"
        )
    return window


def extract_features(traj: Trajectory, ego_traj: Trajectory) -> KinematicFeatures:
    """Compute the ten-feature summary over the trajectory/ego overlap."""
    window = overlap_window(traj, ego_traj)
    ego_pose, _ = interpolate_pose(ego_traj, window[0].t)

    headings = [p.pose.heading for p in window]
    deltas = [wrap_angle_diff(b, a) for a, b in zip(headings, headings[1:])]
    net_heading = math.fsum(deltas)
    total_var = math.fsum(abs(d) for d in deltas)

    speeds = [p.speed for p in window]
    mean_speed = math.fsum(speeds) / len(speeds)

    xs = [p.pose.x for p in window]
    ys = [p.pose.y for p in window]
    path_length = math.fsum(
        math.hypot(x2 - x1, y2 - y1)
        for (x1, y1), (x2, y2) in zip(zip(xs, ys), zip(xs[1:], ys[1:]))
    )
    disp_x = xs[-1] - xs[0]
    disp_y = ys[-1] - ys[0]
    net_disp = math.hypot(disp_x, disp_y)
    straightness = min(1.0, net_disp / path_length) if path_length > 0 else 0.0

    if net_disp > 1e-12:
        disp_bearing = normalize_heading(
            math.atan2(disp_y, disp_x) - ego_pose.heading
        )
    else:
        disp_bearing = 0.0

    mean_x = math.fsum(xs) / len(xs)
    mean_y = math.fsum(ys) / len(ys)
    rel_x = mean_x - ego_pose.x
    rel_y = mean_y - ego_pose.y
    rng = math.hypot(rel_x, rel_y)
    if rng > 1e-12:
        mean_bearing = normalize_heading(
            math.atan2(rel_y, rel_x) - ego_pose.heading
        )
    else:
        mean_bearing = 0.0

    return KinematicFeatures(
        net_heading_change=net_heading,
        total_heading_variation=total_var,
        mean_speed=mean_speed,
        initial_speed=speeds[0],
        final_speed=speeds[-1],
        path_length=path_length,
        straightness=straightness,
        displacement_bearing=disp_bearing,
        mean_position_bearing=mean_bearing,
        mean_position_range=rng,
    )


def ego_frame_displacement(
    traj: Trajectory, ego_traj: Trajectory
) -> tuple[float, float]:
    """Endpoint displacement (longitudinal, lateral) in the ego frame."""
    window = overlap_window(traj, ego_traj)
    ego_pose, _ = interpolate_pose(ego_traj, window[0].t)
    dx = window[-1].pose.x - window[0].pose.x
    dy = window[-1].pose.y - window[0].pose.y
    c, s = math.cos(ego_pose.heading), math.sin(ego_pose.heading)
    return (c * dx + s * dy, -s * dx + c * dy)
