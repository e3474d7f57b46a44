"""Session-level operations shared by the HTTP service and the local CLI."""

from __future__ import annotations

import math
from dataclasses import replace

from ..edit_engine.apply import apply_edit
from ..edit_engine.command import parse_command
from ..errors import OutOfRangeError
from ..object_query.query import QueryRequest, query
from ..path_refinement.conflicts import predict_conflicts
from ..path_refinement.rollout import refine
from ..path_refinement.validate import validate
from ..scene_model.geometry import transform_footprint
from ..scene_model.scenario import AgentKind, Scenario, grid_time, interpolate_pose
from ..scene_model.serialize import quantize, scenario_to_document
from .config import EngineConfig
from .models import ModelBundle
from .session import SessionStore


def do_query(
    store: SessionStore,
    models: ModelBundle,
    config: EngineConfig,
    text: str,
    kind_hint: str | None = None,
    time_window: tuple[float, float] | None = None,
) -> dict:
    hint = None
    if kind_hint and kind_hint.lower() not in ("any", ""):
        hint = AgentKind(kind_hint.lower())
    result = query(
        store.scenario(),
        QueryRequest(text=text, agent_kind_hint=hint, time_window=time_window),
        models.query_models(),
        config.query,
    )
    return {
        "version": store.active_version,
        "chosen": result.chosen,
        "appearance_terms": result.appearance_terms,
        "temporal_terms": result.temporal_terms,
        "appearance_filter_empty": result.appearance_filter_empty,
        "ranked": [
            {
                "agent": s.agent_id,
                "total": s.total,
                "appearance": s.appearance,
                "motion": s.motion,
                "location": s.location,
            }
            for s in result.ranked
        ],
    }


def do_edit(
    store: SessionStore,
    models: ModelBundle,
    config: EngineConfig,
    command_text: str,
    base_version: int | None = None,
) -> dict:
    base = store.active_version if base_version is None else base_version
    version = store.version(base)
    cmd = parse_command(command_text)
    result = apply_edit(
        version.scenario, cmd, models.query_models(), models.asset_bank,
        config.query,
    )
    pending = dict(version.pending_edits)
    pending.update(result.edit_start_times)
    for agent_id in list(pending):
        if not result.new_scenario.has_agent(agent_id):
            del pending[agent_id]
    summary = f"{cmd.task.value}: {', '.join(result.edited_agent_ids) or 'none'}"
    new_version = store.commit(
        base,
        result.new_scenario,
        "edit",
        command_text,
        summary,
        pending_edits=pending,
        edit_log=result.log,
    )
    return {
        "version": new_version,
        "edited_agents": list(result.edited_agent_ids),
        "summary": summary,
        "log": list(result.log),
    }


def do_refine(
    store: SessionStore,
    config: EngineConfig,
    base_version: int | None = None,
    overrides: dict | None = None,
) -> dict:
    base = store.active_version if base_version is None else base_version
    version = store.version(base)
    ref_config = config.refinement
    if overrides:
        ref_config = replace(ref_config, **overrides)
    scenario = version.scenario
    tau_edit = {
        agent_id: scenario.agent(agent_id).trajectory
        for agent_id in version.pending_edits
        if scenario.has_agent(agent_id)
    }
    result = refine(
        scenario, tau_edit, ref_config, edit_start_times=version.pending_edits
    )
    refined_scenario = scenario.with_agents(
        [
            replace(a, trajectory=result.refined.get(a.id, a.trajectory))
            for a in scenario.agents
        ]
    )
    metrics = validate(result, refined_scenario)
    rollout_doc = result.serialize()
    rollout_doc["metrics"] = metrics.as_dict()
    rollout_doc["bypass"] = ref_config.bypass
    new_version = store.commit(
        base,
        refined_scenario,
        "refine",
        f"refine{' --bypass' if ref_config.bypass else ''}",
        f"valid={result.valid} conflicts={len(result.conflicts)}",
        pending_edits={},
        rollout=rollout_doc,
    )
    return {
        "version": new_version,
        "valid": result.valid,
        "bypass": ref_config.bypass,
        "conflicts": rollout_doc["conflicts"],
        "metrics": rollout_doc["metrics"],
        "refined": {
            agent_id: _track_rows(traj)
            for agent_id, traj in sorted(result.refined.items())
        },
    }


def _track_rows(traj) -> list:
    return [
        [
            quantize(p.t),
            quantize(p.pose.x),
            quantize(p.pose.y),
            quantize(p.pose.heading),
            quantize(p.speed),
            p.valid,
        ]
        for p in traj.points
    ]


def do_frames(store: SessionStore, t_from: float, t_to: float) -> dict:
    scenario = store.scenario()
    if t_to < t_from:
        raise OutOfRangeError("to must be >= from")
    start = max(0, math.ceil(round(t_from / scenario.timestep, 9)))
    end = min(scenario.horizon - 1, math.floor(round(t_to / scenario.timestep, 9)))
    frames = []
    for i in range(int(start), int(end) + 1):
        t = grid_time(i, scenario.timestep)
        agents = []
        for agent in scenario.agents:
            try:
                pose, speed = interpolate_pose(agent.trajectory, t)
                agents.append(
                    {
                        "id": agent.id,
                        "x": quantize(pose.x),
                        "y": quantize(pose.y),
                        "heading": quantize(pose.heading),
                        "speed": quantize(speed),
                        "valid": True,
                    }
                )
            except OutOfRangeError:
                agents.append(
                    {"id": agent.id, "x": 0.0, "y": 0.0, "heading": 0.0,
                     "speed": 0.0, "valid": False}
                )
        frames.append({"t": quantize(t), "agents": agents})
    return {"version": store.active_version, "frames": frames}


def do_conflicts(store: SessionStore, config: EngineConfig) -> dict:
    version = store.version()
    scenario = version.scenario
    conflicts = predict_conflicts(
        scenario,
        {a.id: a.trajectory for a in scenario.agents},
        config.refinement,
    )
    doc = [
        {
            "agents": [c.agent_a, c.agent_b],
            "time": quantize(c.time),
            "location": [quantize(c.location[0]), quantize(c.location[1])],
            "kind": c.kind.value,
            "resolution": None,
        }
        for c in conflicts
    ]
    return {
        "version": version.index,
        "conflicts": doc,
        "last_refinement": version.rollout,
    }


def do_export(store: SessionStore, frame: int) -> dict:
    scenario = store.scenario()
    if not 0 <= frame < scenario.horizon:
        raise OutOfRangeError(
            f"frame {frame} outside horizon [0, {scenario.horizon})"
        )
    t = grid_time(frame, scenario.timestep)
    doc = scenario_to_document(scenario)
    agents = []
    for agent in scenario.agents:
        try:
            pose, speed = interpolate_pose(agent.trajectory, t)
            corners = transform_footprint(agent.length, agent.width, pose)
            agents.append(
                {
                    "id": agent.id,
                    "kind": agent.kind.value,
                    "caption": agent.appearance_caption,
                    "ego": agent.is_ego,
                    "pose": {
                        "x": quantize(pose.x),
                        "y": quantize(pose.y),
                        "heading": quantize(pose.heading),
                    },
                    "speed": quantize(speed),
                    "corners": [[quantize(x), quantize(y)] for x, y in corners],
                    "valid": True,
                }
            )
        except OutOfRangeError:
            agents.append(
                {
                    "id": agent.id,
                    "kind": agent.kind.value,
                    "caption": agent.appearance_caption,
                    "ego": agent.is_ego,
                    "pose": None,
                    "speed": 0.0,
                    "corners": [],
                    "valid": False,
                }
            )
    return {
        "version": store.active_version,
        "frame": frame,
        "t": quantize(t),
        "map": doc["map"],
        "agents": agents,
        "tracks": {a["id"]: a["track"] for a in doc["agents"]},
    }


def do_scenario(store: SessionStore) -> dict:
    return {
        "version": store.active_version,
        "scenario": store.scenario_document(),
    }


def do_load_document(store: SessionStore, doc: dict) -> dict:
    scenario = store.scenario_from_doc(doc)
    version = store.load(scenario)
    return {"version": version, "agents": len(scenario.agents)}


def do_load_scenario(store: SessionStore, scenario: Scenario) -> dict:
    version = store.load(scenario)
    return {"version": version, "agents": len(scenario.agents)}
