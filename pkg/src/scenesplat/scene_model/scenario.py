"""Scenario data model: agent nodes, trajectories, vector map.

A Scenario is treated as an immutable value after construction; every edit
produces a new Scenario instance.  Trajectories sample a fixed timestep grid
(default 0.1 s) and each sample carries a validity flag so partially observed
agents round-trip losslessly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

from ..errors import AlignmentWindowError, InvalidInputError, OutOfRangeError
from .geometry import Pose2, normalize_heading, wrap_angle_diff

_GRID_TOL = 1e-6

DEFAULT_TIMESTEP = 0.1
DEFAULT_HORIZON = 100

# Pedestrians carry a small rigid occupancy box; deformation is out of scope.
PEDESTRIAN_FOOTPRINT = (0.5, 0.5)


def grid_time(index: int, timestep: float = DEFAULT_TIMESTEP) -> float:
    """Time of grid frame ``index``, rounded so serialization is stable."""
    return round(index * timestep, 9)


class AgentKind(enum.Enum):
    VEHICLE = "vehicle"
    CYCLIST = "cyclist"
    STATIC_OBJECT = "static_object"
    PEDESTRIAN = "pedestrian"

    @property
    def rigid(self) -> bool:
        return self is not AgentKind.PEDESTRIAN

    @property
    def dynamic(self) -> bool:
        return self is not AgentKind.STATIC_OBJECT


@dataclass(frozen=True)
class TrackPoint:
    t: float
    pose: Pose2
    speed: float
    valid: bool = True

    def __post_init__(self):
        if self.speed < 0:
            raise InvalidInputError(f"speed must be >= 0, got {self.speed}")


@dataclass(frozen=True)
class Trajectory:
    points: tuple[TrackPoint, ...]
    timestep: float = DEFAULT_TIMESTEP

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        prev = None
        for p in self.points:
            if prev is not None:
                dt = p.t - prev
                if dt <= 0:
                    raise InvalidInputError("track times must strictly increase")
                if abs(dt - self.timestep) > _GRID_TOL:
                    raise InvalidInputError(
                        f"track times must step by {self.timestep}, got {dt:.6f}"
                    )
            prev = p.t

    def __len__(self) -> int:
        return len(self.points)

    @property
    def valid_points(self) -> list[TrackPoint]:
        return [p for p in self.points if p.valid]

    @property
    def start_time(self) -> float:
        vp = self.valid_points
        if not vp:
            raise AlignmentWindowError("trajectory has no valid points")
        return vp[0].t

    @property
    def end_time(self) -> float:
        vp = self.valid_points
        if not vp:
            raise AlignmentWindowError("trajectory has no valid points")
        return vp[-1].t

    def point_at(self, t: float) -> TrackPoint | None:
        """Exact grid sample at time t, or None."""
        for p in self.points:
            if abs(p.t - t) <= _GRID_TOL:
                return p
        return None


def interpolate_pose(traj: Trajectory, t: float) -> tuple[Pose2, float]:
    """Pose and speed at time ``t``: linear x/y/speed, shortest-arc heading.

    Interpolates between the two nearest valid samples; raises when ``t``
    falls outside the valid span.
    """
    vp = traj.valid_points
    if not vp:
        raise AlignmentWindowError("trajectory has no valid points")
    if t < vp[0].t - _GRID_TOL or t > vp[-1].t + _GRID_TOL:
        raise OutOfRangeError(
            f"t={t:.3f} outside trajectory span [{vp[0].t:.3f}, {vp[-1].t:.3f}]"
        )
    lo = vp[0]
    for p in vp:
        if p.t <= t + _GRID_TOL:
            lo = p
        if p.t >= t - _GRID_TOL:
            hi = p
            break
    else:
        hi = vp[-1]
    if hi.t - lo.t <= _GRID_TOL:
        return lo.pose, lo.speed
    alpha = (t - lo.t) / (hi.t - lo.t)
    x = lo.pose.x + alpha * (hi.pose.x - lo.pose.x)
    y = lo.pose.y + alpha * (hi.pose.y - lo.pose.y)
    heading = normalize_heading(
        lo.pose.heading + alpha * wrap_angle_diff(hi.pose.heading, lo.pose.heading)
    )
    speed = lo.speed + alpha * (hi.speed - lo.speed)
    return Pose2(x, y, heading), speed


@dataclass(frozen=True)
class AgentNode:
    id: str
    kind: AgentKind
    length: float
    width: float
    height: float
    trajectory: Trajectory
    appearance_caption: str = ""
    is_ego: bool = False

    def __post_init__(self):
        if not (self.length > 0 and self.width > 0 and self.height > 0):
            raise InvalidInputError(
                f"agent {self.id}: footprint dims must be positive"
            )
        if self.kind.dynamic and len(self.trajectory.valid_points) < 2:
            raise InvalidInputError(
                f"agent {self.id}: dynamic agents need >= 2 valid track points"
            )

    @property
    def dims(self) -> tuple[float, float]:
        return (self.length, self.width)

    def pose_at(self, t: float) -> tuple[Pose2, float]:
        return interpolate_pose(self.trajectory, t)


@dataclass(frozen=True)
class Lane:
    id: str
    centerline: tuple[tuple[float, float], ...]
    width: float
    successors: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "centerline", tuple(map(tuple, self.centerline)))
        object.__setattr__(self, "successors", tuple(self.successors))
        if len(self.centerline) < 2:
            raise InvalidInputError(f"lane {self.id}: centerline needs >= 2 points")
        if self.width <= 0:
            raise InvalidInputError(f"lane {self.id}: width must be positive")


def _check_polygon(poly, what: str):
    if len(poly) < 3:
        raise InvalidInputError(f"{what}: polygon needs >= 3 vertices")


@dataclass(frozen=True)
class MapModel:
    lanes: tuple[Lane, ...] = ()
    crosswalks: tuple[tuple[tuple[float, float], ...], ...] = ()
    drivable_area: tuple[tuple[tuple[float, float], ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lanes", tuple(self.lanes))
        object.__setattr__(
            self, "crosswalks", tuple(tuple(map(tuple, p)) for p in self.crosswalks)
        )
        object.__setattr__(
            self,
            "drivable_area",
            tuple(tuple(map(tuple, p)) for p in self.drivable_area),
        )
        for poly in self.crosswalks:
            _check_polygon(poly, "crosswalk")
        for poly in self.drivable_area:
            _check_polygon(poly, "drivable_area")


@dataclass(frozen=True)
class Scenario:
    agents: tuple[AgentNode, ...]
    map: MapModel = field(default_factory=MapModel)
    horizon: int = DEFAULT_HORIZON
    timestep: float = DEFAULT_TIMESTEP
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        ids = [a.id for a in self.agents]
        if len(set(ids)) != len(ids):
            raise InvalidInputError("agent ids must be unique")
        egos = [a for a in self.agents if a.is_ego]
        if len(egos) != 1:
            raise InvalidInputError(
                f"scenario must have exactly one ego agent, found {len(egos)}"
            )
        t_max = grid_time(self.horizon - 1, self.timestep) + _GRID_TOL
        for a in self.agents:
            if abs(a.trajectory.timestep - self.timestep) > _GRID_TOL:
                raise InvalidInputError(
                    f"agent {a.id}: trajectory timestep differs from scenario"
                )
            for p in a.trajectory.points:
                if p.t < -_GRID_TOL or p.t > t_max:
                    raise InvalidInputError(
                        f"agent {a.id}: track time {p.t} outside horizon"
                    )

    @property
    def ego(self) -> AgentNode:
        return next(a for a in self.agents if a.is_ego)

    def agent(self, agent_id: str) -> AgentNode:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise InvalidInputError(f"no agent with id {agent_id!r}")

    def has_agent(self, agent_id: str) -> bool:
        return any(a.id == agent_id for a in self.agents)

    def non_ego_agents(self) -> list[AgentNode]:
        return [a for a in self.agents if not a.is_ego]

    def with_agents(self, agents) -> "Scenario":
        return replace(self, agents=tuple(agents))

    def frame_times(self) -> list[float]:
        return [grid_time(i, self.timestep) for i in range(self.horizon)]

    def fresh_agent_id(self, prefix: str = "agent") -> str:
        taken = {a.id for a in self.agents}
        n = 0
        while f"{prefix}-{n}" in taken:
            n += 1
        return f"{prefix}-{n}"


def mean_speed(traj: Trajectory) -> float:
    vp = traj.valid_points
    if not vp:
        return 0.0
    return math.fsum(p.speed for p in vp) / len(vp)
