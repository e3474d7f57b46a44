"""Edit application: resolve queries, retrieve assets, rewrite the scenario."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from ..errors import EditApplyError, QueryResolutionError, SceneSplatError
from ..object_query.query import QueryModels, QueryRequest, QueryWeights, query
from ..scene_model.geometry import Pose2
from ..scene_model.scenario import (
    AgentKind,
    AgentNode,
    Scenario,
    Trajectory,
    mean_speed,
)
from ..temporal_alignment.oracle import STATIONARY_SPEED
from .assets import AssetRecord, retrieve_asset
from .command import ActionKind, ActionParams, EditCommand, GroupSelector, TaskKind
from .motion import (
    DEFAULT_SPEED,
    follow_trajectory,
    remaining_path,
    resolve_anchor_position,
    synthesize_trajectory,
)

# Edits to existing agents default to the end of the observation window.
DEFAULT_EDIT_START = 1.0

_KIND_PREFIX = {
    AgentKind.VEHICLE: "veh",
    AgentKind.CYCLIST: "cyc",
    AgentKind.STATIC_OBJECT: "obj",
    AgentKind.PEDESTRIAN: "ped",
}

_SUPPORTED_ACTIONS = {
    AgentKind.VEHICLE: set(ActionKind),
    AgentKind.CYCLIST: set(ActionKind),
    AgentKind.PEDESTRIAN: {
        ActionKind.GO_STRAIGHT,
        ActionKind.STOP,
        ActionKind.ACCELERATE,
        ActionKind.DECELERATE,
        ActionKind.STATIC_PLACE,
    },
    AgentKind.STATIC_OBJECT: {ActionKind.STATIC_PLACE},
}


@dataclass(frozen=True)
class EditResult:
    new_scenario: Scenario
    edited_agent_ids: tuple[str, ...]
    initial_trajectories: dict[str, Trajectory]
    log: tuple[dict, ...]
    # Time each edited agent's new intent begins; refinement preserves
    # samples before it and gives the agent priority from it onward.
    edit_start_times: dict[str, float] = field(default_factory=dict)


def _query_hint(cmd_kind: AgentKind | None, asset: AssetRecord | None):
    if asset is not None:
        return None
    return cmd_kind


def _resolve(
    scene: Scenario,
    text: str,
    models: QueryModels,
    weights: QueryWeights,
    log: list[dict],
    role: str,
) -> str:
    try:
        result = query(scene, QueryRequest(text=text), models, weights)
    except SceneSplatError as exc:
        raise QueryResolutionError(f"{role} query {text!r} failed: {exc}") from exc
    log.append(
        {
            "step": f"{role}_query",
            "text": text,
            "chosen": result.chosen,
            "scores": [
                {
                    "agent": s.agent_id,
                    "total": round(s.total, 6),
                    "appearance": round(s.appearance, 6),
                    "motion": round(s.motion, 6),
                    "location": round(s.location, 6),
                }
                for s in result.ranked[:5]
            ],
        }
    )
    return result.chosen


def _group_members(scene: Scenario, group: GroupSelector) -> list[AgentNode]:
    def moving(a: AgentNode) -> bool:
        return mean_speed(a.trajectory) >= STATIONARY_SPEED

    members = []
    for a in scene.non_ego_agents():
        if group is GroupSelector.ALL_MOVING_VEHICLES:
            if a.kind in (AgentKind.VEHICLE, AgentKind.CYCLIST) and moving(a):
                members.append(a)
        elif group is GroupSelector.ALL_MOVING_PEDESTRIANS:
            if a.kind is AgentKind.PEDESTRIAN and moving(a):
                members.append(a)
        elif group is GroupSelector.ALL_STATIC_OBJECTS:
            if a.kind is AgentKind.STATIC_OBJECT:
                members.append(a)
    return members


def _check_action_supported(kind: AgentKind, action: ActionParams | None):
    if action is None:
        return
    if action.action not in _SUPPORTED_ACTIONS[kind]:
        raise EditApplyError(
            f"action {action.action.value} not supported for {kind.value}"
        )


def _replace_suffix(
    original: Trajectory, edited: Trajectory, start_time: float
) -> Trajectory:
    """History strictly before start_time, edited samples from it onward."""
    prefix = [p for p in original.points if p.t < start_time - 1e-9]
    suffix = [p for p in edited.points if p.t >= start_time - 1e-9]
    return Trajectory(tuple(prefix + suffix), timestep=original.timestep)


def apply_edit(
    scene: Scenario,
    cmd: EditCommand,
    models: QueryModels,
    bank: list[AssetRecord],
    weights: QueryWeights = QueryWeights(),
) -> EditResult:
    """Apply one structured edit, returning a new scenario version.

    The input scenario is never mutated; any invariant violation raises
    EditApplyError and leaves the caller's scenario as the active version.
    """
    log: list[dict] = []
    try:
        if cmd.task is TaskKind.REMOVE:
            return _apply_remove(scene, cmd, models, weights, log)
        if cmd.task is TaskKind.REPLACE:
            return _apply_replace(scene, cmd, models, bank, weights, log)
        if cmd.task is TaskKind.MODIFY:
            return _apply_modify(scene, cmd, models, weights, log)
        return _apply_add(scene, cmd, models, bank, weights, log)
    except SceneSplatError:
        raise
    except (ValueError, KeyError) as exc:
        raise EditApplyError(f"edit failed and was rolled back: {exc}") from exc


def _apply_remove(scene, cmd, models, weights, log) -> EditResult:
    if cmd.group is not None:
        targets = _group_members(scene, cmd.group)
        log.append(
            {"step": "group_select", "group": cmd.group.value,
             "members": [a.id for a in targets]}
        )
    else:
        target_id = _resolve(scene, cmd.target_query, models, weights, log, "target")
        targets = [scene.agent(target_id)]
    ids = tuple(a.id for a in targets)
    remaining = [a for a in scene.agents if a.id not in set(ids)]
    return EditResult(
        new_scenario=scene.with_agents(remaining),
        edited_agent_ids=ids,
        initial_trajectories={},
        log=tuple(log),
        edit_start_times={},
    )


def _apply_replace(scene, cmd, models, bank, weights, log) -> EditResult:
    target_id = _resolve(scene, cmd.target_query, models, weights, log, "target")
    target = scene.agent(target_id)
    asset = retrieve_asset(bank, cmd.asset.query)
    log.append({"step": "asset", "query": cmd.asset.query, "chosen": asset.id})
    scale = cmd.asset.scale
    swapped = replace(
        target,
        kind=asset.kind,
        length=asset.length * scale,
        width=asset.width * scale,
        height=asset.height * scale,
        appearance_caption=asset.caption,
    )
    agents = [swapped if a.id == target_id else a for a in scene.agents]
    return EditResult(
        new_scenario=scene.with_agents(agents),
        edited_agent_ids=(target_id,),
        initial_trajectories={target_id: swapped.trajectory},
        log=tuple(log),
        edit_start_times={target_id: DEFAULT_EDIT_START},
    )


def _apply_modify(scene, cmd, models, weights, log) -> EditResult:
    target_id = _resolve(scene, cmd.target_query, models, weights, log, "target")
    target = scene.agent(target_id)
    action = cmd.action
    _check_action_supported(target.kind, action)
    start_time = (
        action.start_time if action.start_time is not None else DEFAULT_EDIT_START
    )
    pose, speed = target.pose_at(start_time)

    if action.action is ActionKind.FOLLOW:
        if cmd.anchor_query is None:
            raise EditApplyError("follow requires an anchor query (the leader)")
        leader_id = _resolve(scene, cmd.anchor_query, models, weights, log, "anchor")
        leader = scene.agent(leader_id)
        gap = action.relative_distance if action.relative_distance is not None else 10.0
        edited = follow_trajectory(scene, leader.trajectory, gap, start_time)
        warning = None
    else:
        action = replace(action, start_time=start_time)
        ref = remaining_path(target.trajectory, start_time)
        synth = synthesize_trajectory(
            scene, pose, action, start_speed=speed, reference_path=ref
        )
        edited, warning = synth.trajectory, synth.warning
    if warning:
        log.append({"step": "warning", "message": warning})

    new_traj = _replace_suffix(target.trajectory, edited, start_time)
    agents = [
        replace(a, trajectory=new_traj) if a.id == target_id else a
        for a in scene.agents
    ]
    log.append(
        {"step": "modify", "target": target_id,
         "action": action.action.value, "start_time": start_time}
    )
    return EditResult(
        new_scenario=scene.with_agents(agents),
        edited_agent_ids=(target_id,),
        initial_trajectories={target_id: new_traj},
        log=tuple(log),
        edit_start_times={target_id: start_time},
    )


def _apply_add(scene, cmd, models, bank, weights, log) -> EditResult:
    asset = retrieve_asset(bank, cmd.asset.query)
    log.append({"step": "asset", "query": cmd.asset.query, "chosen": asset.id})
    action = cmd.action
    start_time = 0.0
    if action is not None and action.start_time is not None:
        start_time = action.start_time

    if cmd.anchor_query is not None:
        anchor_id = _resolve(scene, cmd.anchor_query, models, weights, log, "anchor")
        placement = resolve_anchor_position(
            scene, anchor_id, cmd.asset.offset, start_time, cmd.asset.rotation
        )
    else:
        x, y = action.start_position
        placement = Pose2(x, y, cmd.asset.rotation)

    scale = cmd.asset.scale
    new_id = scene.fresh_agent_id(_KIND_PREFIX[asset.kind])
    dt, horizon = scene.timestep, scene.horizon

    if action is not None and action.action is ActionKind.FOLLOW:
        if cmd.anchor_query is None:
            raise EditApplyError("follow requires an anchor query (the leader)")
        leader = scene.agent(anchor_id)
        gap = action.relative_distance if action.relative_distance is not None else 10.0
        traj = follow_trajectory(scene, leader.trajectory, gap, start_time)
    elif action is not None and action.action is not ActionKind.STATIC_PLACE:
        _check_action_supported(asset.kind, action)
        action = replace(action, start_time=start_time)
        speed = action.speed if action.speed is not None else (
            1.4 if asset.kind is AgentKind.PEDESTRIAN else DEFAULT_SPEED
        )
        synth = synthesize_trajectory(scene, placement, action, start_speed=speed)
        traj = synth.trajectory
        if synth.warning:
            log.append({"step": "warning", "message": synth.warning})
    elif asset.motion_template:
        from .paths import as_trajectory

        traj = as_trajectory(
            asset.template_points(placement, dt, horizon, start_time), dt
        )
    else:
        from .paths import as_trajectory, static_track

        traj = as_trajectory(static_track(placement, dt, horizon, start_time), dt)

    agent = AgentNode(
        id=new_id,
        kind=asset.kind,
        length=asset.length * scale,
        width=asset.width * scale,
        height=asset.height * scale,
        trajectory=traj,
        appearance_caption=asset.caption,
        is_ego=False,
    )
    log.append({"step": "add", "agent": new_id, "asset": asset.id})
    return EditResult(
        new_scenario=scene.with_agents(list(scene.agents) + [agent]),
        edited_agent_ids=(new_id,),
        initial_trajectories={new_id: traj},
        log=tuple(log),
        edit_start_times={new_id: start_time},
    )
