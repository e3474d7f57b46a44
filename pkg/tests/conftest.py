from __future__ import annotations

import math

import pytest

from scenesplat.edit_engine.paths import (
    PathTrack,
    as_trajectory,
    constant_speed_profile,
    sample_track,
    static_track,
    straight_path,
)
from scenesplat.scene_model import AgentKind, AgentNode, MapModel, Pose2, Scenario
from scenesplat.service.models import default_models

DT = 0.1
H = 91


def make_ego(pose=Pose2(0.0, 0.0, 0.0)) -> AgentNode:
    return AgentNode(
        id="ego",
        kind=AgentKind.VEHICLE,
        length=4.6,
        width=1.9,
        height=1.5,
        trajectory=as_trajectory(static_track(pose, DT, H), DT),
        appearance_caption="ego vehicle",
        is_ego=True,
    )


def cruise_agent(
    agent_id: str,
    start: Pose2,
    speed: float,
    caption: str = "car",
    kind: AgentKind = AgentKind.VEHICLE,
) -> AgentNode:
    path = PathTrack(straight_path(start, speed * (H - 1) * DT + 5))
    pts = sample_track(
        path, constant_speed_profile(speed, (H - 1) * DT, DT), 0.0, DT, H
    )
    dims = (0.5, 0.5, 1.8) if kind is AgentKind.PEDESTRIAN else (4.6, 1.9, 1.5)
    return AgentNode(
        id=agent_id,
        kind=kind,
        length=dims[0],
        width=dims[1],
        height=dims[2],
        trajectory=as_trajectory(pts, DT),
        appearance_caption=caption,
    )


def simple_scene(*agents, map_model=None) -> Scenario:
    return Scenario(
        agents=(make_ego(),) + tuple(agents),
        map=map_model or MapModel(),
        horizon=H,
        timestep=DT,
    )


@pytest.fixture(scope="session")
def models():
    """Trained model bundle, shared across the whole test session."""
    return default_models()
