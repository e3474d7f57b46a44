"""Canonical scenario (de)serialization.

One structured-text (JSON) document per scenario with top-level keys
``format``, ``meta``, ``map``, ``agents``.  Floats are quantized to 9
significant digits on write, which makes save -> load -> save byte-stable.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import ScenarioFormatError
from .geometry import Pose2
from .scenario import (
    AgentKind,
    AgentNode,
    Lane,
    MapModel,
    Scenario,
    TrackPoint,
    Trajectory,
)

FORMAT_VERSION = 1


def quantize(value: float) -> float:
    """Round to 9 significant digits (the on-disk precision)."""
    return float(f"{value:.9g}")


def _qpoints(points):
    return [[quantize(x), quantize(y)] for x, y in points]


def scenario_to_document(scenario: Scenario) -> dict:
    """Build the plain-dict document (already quantized) for a scenario."""
    doc = {
        "format": FORMAT_VERSION,
        "meta": {
            "timestep": quantize(scenario.timestep),
            "horizon": scenario.horizon,
            "seed": scenario.seed,
        },
        "map": {
            "lanes": [
                {
                    "id": lane.id,
                    "centerline": _qpoints(lane.centerline),
                    "width": quantize(lane.width),
                    "successors": list(lane.successors),
                }
                for lane in scenario.map.lanes
            ],
            "crosswalks": [_qpoints(p) for p in scenario.map.crosswalks],
            "drivable_area": [_qpoints(p) for p in scenario.map.drivable_area],
        },
        "agents": [
            {
                "id": a.id,
                "kind": a.kind.value,
                "dims": [quantize(a.length), quantize(a.width), quantize(a.height)],
                "appearance_caption": a.appearance_caption,
                "ego": a.is_ego,
                "track": [
                    [
                        quantize(p.t),
                        quantize(p.pose.x),
                        quantize(p.pose.y),
                        quantize(p.pose.heading),
                        quantize(p.speed),
                        p.valid,
                    ]
                    for p in a.trajectory.points
                ],
            }
            for a in scenario.agents
        ],
    }
    return doc


def scenario_to_text(scenario: Scenario) -> str:
    return json.dumps(scenario_to_document(scenario), indent=1) + "\n"


def _require(cond: bool, msg: str):
    if not cond:
        raise ScenarioFormatError(msg)


def scenario_from_document(doc: dict) -> Scenario:
    _require(isinstance(doc, dict), "scenario document must be an object")
    _require(doc.get("format") == FORMAT_VERSION, "missing or unsupported format")
    meta = doc.get("meta")
    _require(isinstance(meta, dict), "missing meta")
    timestep = float(meta["timestep"])
    horizon = int(meta["horizon"])
    seed = int(meta.get("seed", 0))

    m = doc.get("map") or {}
    lanes = []
    for entry in m.get("lanes", []):
        lanes.append(
            Lane(
                id=str(entry["id"]),
                centerline=[(float(x), float(y)) for x, y in entry["centerline"]],
                width=float(entry["width"]),
                successors=tuple(str(s) for s in entry.get("successors", [])),
            )
        )
    map_model = MapModel(
        lanes=tuple(lanes),
        crosswalks=tuple(
            tuple((float(x), float(y)) for x, y in poly)
            for poly in m.get("crosswalks", [])
        ),
        drivable_area=tuple(
            tuple((float(x), float(y)) for x, y in poly)
            for poly in m.get("drivable_area", [])
        ),
    )

    agents = []
    try:
        for entry in doc.get("agents", []):
            dims = entry["dims"]
            points = [
                TrackPoint(
                    t=float(row[0]),
                    pose=Pose2(float(row[1]), float(row[2]), float(row[3])),
                    speed=float(row[4]),
                    valid=bool(row[5]),
                )
                for row in entry["track"]
            ]
            agents.append(
                AgentNode(
                    id=str(entry["id"]),
                    kind=AgentKind(entry["kind"]),
                    length=float(dims[0]),
                    width=float(dims[1]),
                    height=float(dims[2]),
                    trajectory=Trajectory(tuple(points), timestep=timestep),
                    appearance_caption=str(entry.get("appearance_caption", "")),
                    is_ego=bool(entry.get("ego", False)),
                )
            )
    except (KeyError, IndexError, ValueError, TypeError) as exc:
        raise ScenarioFormatError(f"malformed agent entry: {exc}") from exc

    return Scenario(
        agents=tuple(agents),
        map=map_model,
        horizon=horizon,
        timestep=timestep,
        seed=seed,
    )


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    Path(path).write_text(scenario_to_text(scenario), encoding="utf-8")


def load_scenario(path: str | Path) -> Scenario:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"not valid JSON: {exc}") from exc
    return scenario_from_document(doc)
