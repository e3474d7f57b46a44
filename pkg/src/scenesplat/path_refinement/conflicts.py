"""Conflict prediction: sweep planned trajectories for inflated overlaps."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from ..scene_model.geometry import Pose2, boxes_collide
from ..scene_model.scenario import AgentKind, Scenario, Trajectory, grid_time
from .config import RefinementConfig


class ConflictKind(enum.Enum):
    VEH_VEH = "veh_veh"
    VEH_PED = "veh_ped"


class Resolution(enum.Enum):
    YIELD = "yield"
    DETOUR = "detour"
    STOP = "stop"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class Conflict:
    agent_a: str
    agent_b: str
    time: float
    location: tuple[float, float]
    kind: ConflictKind
    resolution: Resolution | None = None

    def resolved_as(self, resolution: Resolution) -> "Conflict":
        return replace(self, resolution=resolution)


def _pose_at_grid(traj: Trajectory, t: float):
    p = traj.point_at(t)
    if p is None or not p.valid:
        return None
    return p.pose


def pair_kind(a_kind: AgentKind, b_kind: AgentKind) -> ConflictKind | None:
    peds = (a_kind is AgentKind.PEDESTRIAN) + (b_kind is AgentKind.PEDESTRIAN)
    if peds == 2:
        return None  # pedestrian pairs are not tracked
    return ConflictKind.VEH_PED if peds == 1 else ConflictKind.VEH_VEH


def predict_conflicts(
    scene: Scenario,
    planned: dict[str, Trajectory],
    config: RefinementConfig = RefinementConfig(),
) -> list[Conflict]:
    """Earliest inflated-footprint overlap per agent pair over the horizon.

    Footprints are inflated by min_gap/2 per side, so a conflict means two
    agents come within min_gap of each other.  Deterministic order: sorted
    by (time, agent ids).
    """
    agents = sorted(scene.agents, key=lambda a: a.id)
    dims = {
        a.id: (a.length + config.min_gap, a.width + config.min_gap)
        for a in agents
    }
    radius = {
        a.id: 0.5 * math.hypot(*dims[a.id]) for a in agents
    }
    found: dict[tuple[str, str], Conflict] = {}
    for i in range(scene.horizon):
        t = grid_time(i, scene.timestep)
        poses = {}
        for a in agents:
            traj = planned.get(a.id, a.trajectory)
            pose = _pose_at_grid(traj, t)
            if pose is not None:
                poses[a.id] = pose
        ids = [a.id for a in agents if a.id in poses]
        by_id = {a.id: a for a in agents}
        for x in range(len(ids)):
            for y in range(x + 1, len(ids)):
                ia, ib = ids[x], ids[y]
                if (ia, ib) in found:
                    continue
                kind = pair_kind(by_id[ia].kind, by_id[ib].kind)
                if kind is None:
                    continue
                pa, pb = poses[ia], poses[ib]
                if math.hypot(pa.x - pb.x, pa.y - pb.y) > radius[ia] + radius[ib]:
                    continue
                if boxes_collide(dims[ia], pa, dims[ib], pb):
                    found[(ia, ib)] = Conflict(
                        agent_a=ia,
                        agent_b=ib,
                        time=t,
                        location=(0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)),
                        kind=kind,
                    )
    return sorted(found.values(), key=lambda c: (c.time, c.agent_a, c.agent_b))


def actual_overlaps(
    scene: Scenario,
    tracks: dict[str, Trajectory],
) -> list[Conflict]:
    """Uninflated footprint overlaps; the post-refinement failure signal."""
    zero_gap = RefinementConfig(min_gap=1e-9)
    return predict_conflicts(scene, tracks, zero_gap)
