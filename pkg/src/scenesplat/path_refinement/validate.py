"""Post-refinement safety metrics for one scenario."""

from __future__ import annotations

from dataclasses import dataclass

from ..scene_model.geometry import point_in_drivable
from ..scene_model.scenario import AgentKind, Scenario
from .conflicts import ConflictKind, Resolution, actual_overlaps
from .rollout import RolloutResult

_ROAD_KINDS = (AgentKind.VEHICLE, AgentKind.CYCLIST)


@dataclass(frozen=True)
class ScenarioMetrics:
    collision_veh: float
    collision_ped: float
    offroad: float
    failure: float

    def as_dict(self) -> dict:
        return {
            "collision_veh": self.collision_veh,
            "collision_ped": self.collision_ped,
            "offroad": self.offroad,
            "failure": self.failure,
        }


def validate(result: RolloutResult, scene: Scenario) -> ScenarioMetrics:
    """0/1 indicators: any vehicle/pedestrian overlap, off-road excursion,
    or unresolved conflict anywhere in the refined rollout."""
    overlaps = actual_overlaps(scene, result.refined)
    veh = any(c.kind is ConflictKind.VEH_VEH for c in overlaps)
    ped = any(c.kind is ConflictKind.VEH_PED for c in overlaps)

    offroad = False
    if scene.map.drivable_area:
        for agent in scene.agents:
            if agent.kind not in _ROAD_KINDS:
                continue
            track = result.refined.get(agent.id, agent.trajectory)
            for p in track.valid_points:
                if not point_in_drivable(p.pose.x, p.pose.y, scene.map):
                    offroad = True
                    break
            if offroad:
                break

    unresolved = any(
        c.resolution is Resolution.UNRESOLVED for c in result.conflicts
    )
    failure = veh or ped or offroad or unresolved
    return ScenarioMetrics(
        collision_veh=1.0 if veh else 0.0,
        collision_ped=1.0 if ped else 0.0,
        offroad=1.0 if offroad else 0.0,
        failure=1.0 if failure else 0.0,
    )
