"""Seeded synthetic scenario generation with construction labels.

Each generated scenario holds a parked ego plus one labeled agent realizing
a requested motion prototype on a map template.  The ego is placed so the
agent's mean position falls in the requested bearing sector, which makes the
construction label and the rule-based labeler agree by design.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..edit_engine.paths import (
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
from ..errors import InvalidInputError
from ..scene_model.geometry import Pose2, normalize_heading
from ..scene_model.scenario import (
    AgentKind,
    AgentNode,
    Scenario,
    TrackPoint,
    Trajectory,
)
from ..temporal_alignment.codebook import (
    LOCATION_PROTOTYPES,
    LOCATION_SECTOR_CENTERS,
)
from ..temporal_alignment.features import extract_features
from ..temporal_alignment.training import TrainingExample
from .maps import CROSSWALK_X, map_template

HORIZON = 91
TIMESTEP = 0.1

# Default placement sectors.  Three cardinals keep every prototype linearly
# reachable for the affine projector; all eight sector names are accepted.
DEFAULT_SECTORS = ("front", "left", "right")

SECTOR_CENTERS = {
    name: center
    for (name, _), center in zip(LOCATION_PROTOTYPES, LOCATION_SECTOR_CENTERS)
}
# Keep 'behind' placements on one side of the branch cut.
SECTOR_CENTERS["behind"] = math.radians(170.0)

TURN_MOTIONS = {"turn-left", "turn-right", "u-turn"}

VEHICLE_CAPTIONS = [
    "black sedan",
    "white sedan",
    "silver suv",
    "red truck",
    "blue van",
    "gray coupe",
]
PEDESTRIAN_CAPTIONS = [
    "pedestrian in a blue jacket",
    "pedestrian with a red backpack",
    "construction worker in a yellow vest",
    "pedestrian in a gray coat",
]


@dataclass(frozen=True)
class SyntheticSpec:
    seed: int = 0
    vehicle_counts: dict = field(
        default_factory=lambda: {
            "stationary": 4,
            "straight": 5,
            "turn-left": 5,
            "turn-right": 5,
            "stopping": 4,
            "starting": 4,
        }
    )
    pedestrian_counts: dict = field(
        default_factory=lambda: {
            "standing": 3,
            "walking-straight": 3,
            "crossing-left-to-right": 3,
            "crossing-right-to-left": 3,
            "stopping": 2,
        }
    )
    map_template: str = "4-way-intersection"
    noise: float = 0.0
    sectors: tuple[str, ...] = DEFAULT_SECTORS

    def __post_init__(self):
        if self.noise < 0:
            raise InvalidInputError("noise must be >= 0")
        for counts in (self.vehicle_counts, self.pedestrian_counts):
            if any(v < 0 for v in counts.values()):
                raise InvalidInputError("prototype counts must be >= 0")
        for s in self.sectors:
            if s not in SECTOR_CENTERS:
                raise InvalidInputError(f"unknown sector {s!r}")
        if self.map_template != "4-way-intersection" and any(
            self.vehicle_counts.get(m, 0) > 0 for m in TURN_MOTIONS
        ):
            raise InvalidInputError(
                f"{self.map_template!r} has no intersection; turn/u-turn "
                "prototypes need the 4-way-intersection template"
            )

    def total(self) -> int:
        return sum(self.vehicle_counts.values()) + sum(
            self.pedestrian_counts.values()
        )


@dataclass(frozen=True)
class LabeledScenario:
    scenario: Scenario
    agent_id: str
    kind: AgentKind
    motion: str
    location: str
    caption: str


def _vehicle_track(motion: str, rng: np.random.Generator):
    """(track points, ego heading) for one vehicle prototype instance."""
    dt, H = TIMESTEP, HORIZON
    duration = (H - 1) * dt
    v = float(rng.uniform(4.0, 7.0))
    if motion == "stationary":
        pose = Pose2(float(rng.uniform(-30, 30)), -1.75, 0.0)
        return static_track(pose, dt, H), 0.0
    if motion == "straight":
        start = Pose2(float(rng.uniform(-45, -25)), -1.75, 0.0)
        path = PathTrack(straight_path(start, v * duration + 5))
        return (
            sample_track(path, constant_speed_profile(v, duration, dt), 0.0, dt, H),
            0.0,
        )
    if motion in TURN_MOTIONS:
        v = float(rng.uniform(3.5, 5.0))
        lead = float(rng.uniform(8.0, 14.0))
        radius = float(rng.uniform(7.0, 9.0))
        start = Pose2(-lead - radius, -1.75, 0.0)
        if motion == "turn-left":
            sweep = math.pi / 2
        elif motion == "turn-right":
            sweep = -math.pi / 2
        else:
            sweep = math.pi
            radius = 5.0
        segments = concat_paths(
            straight_path(start, lead),
            arc_path(Pose2(start.x + lead, start.y, 0.0), radius, sweep),
        )
        segments = concat_paths(
            segments, straight_path(segments[-1], v * duration)
        )
        path = PathTrack(segments)
        return (
            sample_track(path, constant_speed_profile(v, duration, dt), 0.0, dt, H),
            0.0,
        )
    if motion == "stopping":
        v0 = float(rng.uniform(5.0, 8.0))
        start = Pose2(float(rng.uniform(-40, -20)), -1.75, 0.0)
        path = PathTrack(straight_path(start, v0 * v0 / 4.0 + 5))
        return (
            sample_track(path, decel_profile(v0, 2.0, duration, dt), 0.0, dt, H),
            0.0,
        )
    if motion == "starting":
        v1 = float(rng.uniform(5.0, 8.0))
        start = Pose2(float(rng.uniform(-40, -20)), -1.75, 0.0)
        path = PathTrack(straight_path(start, v1 * duration))
        return (
            sample_track(path, accel_profile(0.0, v1, 2.0, duration, dt), 0.0, dt, H),
            0.0,
        )
    raise InvalidInputError(f"unknown vehicle motion prototype {motion!r}")


def _pedestrian_track(motion: str, rng: np.random.Generator):
    """(track points, ego heading) for one pedestrian prototype instance."""
    dt, H = TIMESTEP, HORIZON
    duration = (H - 1) * dt
    v = float(rng.uniform(1.2, 1.8))
    walk_x = float(rng.uniform(*CROSSWALK_X))
    if motion == "standing":
        pose = Pose2(float(rng.uniform(-20, 20)), 4.5, 0.0)
        return static_track(pose, dt, H), 0.0
    if motion == "walking-straight":
        start = Pose2(float(rng.uniform(-25, -5)), 4.5, 0.0)
        path = PathTrack(straight_path(start, v * duration + 2))
        return (
            sample_track(path, constant_speed_profile(v, duration, dt), 0.0, dt, H),
            0.0,
        )
    # Crossing/stopping walk southward across the road at the crosswalk.
    start = Pose2(walk_x, 6.0, -math.pi / 2)
    cross_len = v * duration + 2.0
    if motion == "crossing-left-to-right":
        # Southbound walk seen from an east-facing ego crosses left-to-right.
        path = PathTrack(straight_path(start, cross_len))
        return (
            sample_track(path, constant_speed_profile(v, duration, dt), 0.0, dt, H),
            0.0,
        )
    if motion == "crossing-right-to-left":
        path = PathTrack(straight_path(start, cross_len))
        return (
            sample_track(path, constant_speed_profile(v, duration, dt), 0.0, dt, H),
            math.pi,
        )
    if motion == "stopping":
        path = PathTrack(straight_path(start, 12.0))
        # Walk steadily first so mean speed stays above the standing
        # threshold, then brake to rest.
        speeds = constant_speed_profile(v, 4.0, dt)[:-1] + decel_profile(
            v, 0.8, duration - 4.0, dt
        )
        return (
            sample_track(path, speeds, 0.0, dt, H),
            # Ego faces along the walk so the stop is longitudinal, not a
            # crossing.
            -math.pi / 2,
        )
    raise InvalidInputError(f"unknown pedestrian motion prototype {motion!r}")


def _jitter(points: list[TrackPoint], noise: float, rng: np.random.Generator):
    if noise <= 0:
        return points
    out = []
    for p in points:
        dx, dy = rng.normal(0.0, noise, size=2)
        out.append(
            TrackPoint(
                t=p.t,
                pose=Pose2(p.pose.x + dx, p.pose.y + dy, p.pose.heading),
                speed=p.speed,
                valid=p.valid,
            )
        )
    return out


# Placement spread inside a sector; well under the 22.5 degree half-width so
# construction labels always match the sector rule.
SECTOR_SPREAD = math.radians(8.0)


def _assemble(
    points: list[TrackPoint],
    ego_heading: float,
    sector: str,
    kind: AgentKind,
    caption: str,
    map_name: str,
    rng: np.random.Generator,
    seed: int,
) -> LabeledScenario | None:
    mean_x = sum(p.pose.x for p in points) / len(points)
    mean_y = sum(p.pose.y for p in points) / len(points)
    if sector == "behind":
        # Stay on one side of the +/-pi branch cut.
        bearing = math.radians(float(rng.uniform(160.0, 178.0)))
    else:
        bearing = SECTOR_CENTERS[sector] + float(
            rng.uniform(-SECTOR_SPREAD, SECTOR_SPREAD)
        )
    theta_world = normalize_heading(ego_heading + bearing)
    rng_m = float(rng.uniform(14.0, 32.0))
    ego_pose = Pose2(
        mean_x - rng_m * math.cos(theta_world),
        mean_y - rng_m * math.sin(theta_world),
        ego_heading,
    )
    ego = AgentNode(
        id="ego",
        kind=AgentKind.VEHICLE,
        length=4.6,
        width=1.9,
        height=1.5,
        trajectory=as_trajectory(static_track(ego_pose, TIMESTEP, HORIZON), TIMESTEP),
        appearance_caption="ego vehicle",
        is_ego=True,
    )
    dims = (0.5, 0.5, 1.8) if kind is AgentKind.PEDESTRIAN else (4.6, 1.9, 1.5)
    agent = AgentNode(
        id="a0",
        kind=kind,
        length=dims[0],
        width=dims[1],
        height=dims[2],
        trajectory=as_trajectory(points, TIMESTEP),
        appearance_caption=caption,
    )
    scenario = Scenario(
        agents=(ego, agent),
        map=map_template(map_name),
        horizon=HORIZON,
        timestep=TIMESTEP,
        seed=seed,
    )
    return scenario


def generate_corpus(spec: SyntheticSpec) -> list[LabeledScenario]:
    """Deterministic corpus: one scenario per requested prototype instance."""
    rng = np.random.default_rng(spec.seed)
    requests: list[tuple[AgentKind, str, str]] = []
    # Sectors rotate within each motion class so placement stays independent
    # of every motion-linked feature (no spurious shortcuts to learn).
    for motion, count in spec.vehicle_counts.items():
        for j in range(count):
            sector = spec.sectors[j % len(spec.sectors)]
            requests.append((AgentKind.VEHICLE, motion, sector))
    for motion, count in spec.pedestrian_counts.items():
        for j in range(count):
            sector = spec.sectors[j % len(spec.sectors)]
            requests.append((AgentKind.PEDESTRIAN, motion, sector))

    out: list[LabeledScenario] = []
    for i, (kind, motion, sector) in enumerate(requests):
        if kind is AgentKind.VEHICLE:
            points, ego_heading = _vehicle_track(motion, rng)
            caption = VEHICLE_CAPTIONS[int(rng.integers(len(VEHICLE_CAPTIONS)))]
        else:
            points, ego_heading = _pedestrian_track(motion, rng)
            caption = PEDESTRIAN_CAPTIONS[
                int(rng.integers(len(PEDESTRIAN_CAPTIONS)))
            ]
        points = _jitter(points, spec.noise, rng)
        scenario = _assemble(
            points, ego_heading, sector, kind, caption,
            spec.map_template, rng, spec.seed + i,
        )
        out.append(
            LabeledScenario(
                scenario=scenario,
                agent_id="a0",
                kind=kind,
                motion=motion,
                location=sector,
                caption=caption,
            )
        )
    return out


def training_examples(corpus: list[LabeledScenario]) -> list[TrainingExample]:
    examples = []
    for item in corpus:
        agent = item.scenario.agent(item.agent_id)
        ego = item.scenario.ego
        feat = extract_features(agent.trajectory, ego.trajectory)
        examples.append(
            TrainingExample(
                features=feat,
                motion_label=item.motion,
                location_label=item.location,
                kind=item.kind,
            )
        )
    return examples


def default_acceptance_spec(seed: int = 7) -> SyntheticSpec:
    """The 200-scenario training corpus used by the acceptance suite."""
    return SyntheticSpec(
        seed=seed,
        vehicle_counts={
            "stationary": 20,
            "straight": 24,
            "turn-left": 24,
            "turn-right": 24,
            "stopping": 20,
            "starting": 20,
        },
        pedestrian_counts={
            "standing": 14,
            "walking-straight": 14,
            "crossing-left-to-right": 14,
            "crossing-right-to-left": 14,
            "stopping": 12,
        },
        map_template="4-way-intersection",
        noise=0.05,
    )


def default_test_spec(seed: int = 1007) -> SyntheticSpec:
    """The held-out 50-scenario evaluation corpus."""
    return SyntheticSpec(
        seed=seed,
        vehicle_counts={
            "stationary": 5,
            "straight": 6,
            "turn-left": 6,
            "turn-right": 6,
            "stopping": 5,
            "starting": 5,
        },
        pedestrian_counts={
            "standing": 4,
            "walking-straight": 3,
            "crossing-left-to-right": 3,
            "crossing-right-to-left": 4,
            "stopping": 3,
        },
        map_template="4-way-intersection",
        noise=0.05,
    )
