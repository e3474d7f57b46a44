from .geometry import (
    Pose2,
    boxes_collide,
    footprint_polygon,
    normalize_heading,
    point_in_drivable,
    point_in_polygon,
    transform_footprint,
)
from .scenario import (
    AgentKind,
    AgentNode,
    Lane,
    MapModel,
    Scenario,
    TrackPoint,
    Trajectory,
    grid_time,
    interpolate_pose,
)
from .serialize import (
    load_scenario,
    save_scenario,
    scenario_from_document,
    scenario_to_document,
    scenario_to_text,
)

__all__ = [
    "Pose2",
    "TrackPoint",
    "Trajectory",
    "AgentKind",
    "AgentNode",
    "Lane",
    "MapModel",
    "Scenario",
    "normalize_heading",
    "transform_footprint",
    "footprint_polygon",
    "boxes_collide",
    "point_in_polygon",
    "point_in_drivable",
    "interpolate_pose",
    "grid_time",
    "scenario_to_document",
    "scenario_from_document",
    "scenario_to_text",
    "save_scenario",
    "load_scenario",
]
