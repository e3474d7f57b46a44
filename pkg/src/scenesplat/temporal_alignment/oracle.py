"""Rule-based trajectory labeler.

Deterministic thresholds on the kinematic features supply both training
supervision and an independent check for the learned alignment.  Rules are
evaluated in a fixed order; the first match wins, so every finite trajectory
receives exactly one motion and one location label.
"""

from __future__ import annotations

import math

from ..scene_model.scenario import AgentKind, Trajectory
from .codebook import LOCATION_PROTOTYPES, LOCATION_SECTOR_CENTERS
from .features import (
    KinematicFeatures,
    ego_frame_displacement,
    extract_features,
)
from .text_encoder import angular_distance

STATIONARY_SPEED = 0.5  # m/s; below this an agent counts as not moving

_DEG = math.pi / 180.0


def oracle_motion_label(
    feat: KinematicFeatures,
    kind: AgentKind,
    lateral_displacement: float = 0.0,
    longitudinal_displacement: float = 0.0,
) -> str:
    if kind is AgentKind.PEDESTRIAN:
        if feat.mean_speed < STATIONARY_SPEED:
            return "standing"
        if feat.initial_speed > 1.0 and feat.final_speed < 0.3:
            return "stopping"
        if abs(lateral_displacement) > abs(longitudinal_displacement) and (
            abs(lateral_displacement) > 1.0
        ):
            # Ego-frame +y is left: decreasing lateral = moving left-to-right.
            if lateral_displacement < 0:
                return "crossing-left-to-right"
            return "crossing-right-to-left"
        return "walking-straight"

    if feat.mean_speed < STATIONARY_SPEED:
        return "stationary"
    net_deg = feat.net_heading_change / _DEG
    if 45.0 <= net_deg <= 135.0:
        return "turn-left"
    if -135.0 <= net_deg <= -45.0:
        return "turn-right"
    if abs(net_deg) > 150.0:
        return "u-turn"
    if feat.initial_speed > 2.0 and feat.final_speed < 0.3:
        return "stopping"
    if feat.final_speed > 2.0 and feat.initial_speed < 0.3:
        return "starting"
    return "straight"


def oracle_location_label(feat: KinematicFeatures) -> str:
    bearing = feat.mean_position_bearing
    best_name = LOCATION_PROTOTYPES[0][0]
    best_dist = math.inf
    for (name, _), center in zip(LOCATION_PROTOTYPES, LOCATION_SECTOR_CENTERS):
        d = angular_distance(bearing, center)
        # Strict < keeps boundary ties on the earlier sector in listed order.
        if d < best_dist - 1e-12:
            best_dist = d
            best_name = name
    return best_name


def oracle_label(
    traj: Trajectory, ego_traj: Trajectory, kind: AgentKind
) -> tuple[str, str]:
    """(motion prototype name, location prototype name) for a trajectory."""
    feat = extract_features(traj, ego_traj)
    if kind is AgentKind.PEDESTRIAN:
        lon, lat = ego_frame_displacement(traj, ego_traj)
        motion = oracle_motion_label(feat, kind, lat, lon)
    else:
        motion = oracle_motion_label(feat, kind)
    return motion, oracle_location_label(feat)
