"""Deterministic interaction-aware rollout.

Priority-ordered re-timing: edited agents keep their intended paths, every
other agent adapts its speed along its own path (car-following against the
projected occupancy of higher-priority traffic), pedestrians stop short of
blockers and resume when clear, and vehicles may take a bounded lateral
detour around immovable blockers when the offset corridor is drivable and
clear.  The rollout is a pure function of (scenario, edited set, config):
no randomness anywhere.

Any learned multi-agent predictor with the same signature can replace
``refine`` behind the ``Predictor`` protocol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol

from ..errors import MissingHistoryError
from ..scene_model.geometry import Pose2, boxes_collide, point_in_drivable
from ..scene_model.scenario import (
    AgentKind,
    AgentNode,
    Scenario,
    TrackPoint,
    Trajectory,
    grid_time,
)
from .config import RefinementConfig
from .conflicts import (
    Conflict,
    Resolution,
    actual_overlaps,
    predict_conflicts,
)

_SCAN_STEP = 0.5  # meters between path probes
_OCC_STEP = 0.3  # seconds between occupancy projections
_STOPPED = 0.05  # m/s; below this an agent counts as standing still


@dataclass
class RolloutResult:
    refined: dict[str, Trajectory]
    conflicts: list[Conflict]
    valid: bool
    passes: int = 0

    def serialize(self) -> dict:
        return {
            "valid": self.valid,
            "passes": self.passes,
            "conflicts": [
                {
                    "agents": [c.agent_a, c.agent_b],
                    "time": c.time,
                    "location": [c.location[0], c.location[1]],
                    "kind": c.kind.value,
                    "resolution": c.resolution.value if c.resolution else None,
                }
                for c in self.conflicts
            ],
        }


class Predictor(Protocol):
    def __call__(
        self,
        scene: Scenario,
        tau_edit: dict[str, Trajectory],
        config: RefinementConfig,
    ) -> RolloutResult: ...


class _Path:
    """Arc-length view over a pose sequence with fine probing samples."""

    def __init__(self, poses: list[Pose2]):
        self.poses = poses
        self.s = [0.0]
        for a, b in zip(poses, poses[1:]):
            self.s.append(self.s[-1] + math.hypot(b.x - a.x, b.y - a.y))
        self.length = self.s[-1]

    def pose_at(self, s: float) -> Pose2:
        if s <= 0:
            return self.poses[0]
        if s >= self.length:
            return self.poses[-1]
        lo, hi = 0, len(self.s) - 1
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if self.s[mid] <= s:
                lo = mid
            else:
                hi = mid
        seg = self.s[hi] - self.s[lo]
        if seg <= 1e-12:
            return self.poses[lo]
        alpha = (s - self.s[lo]) / seg
        a, b = self.poses[lo], self.poses[hi]
        heading = a.heading + alpha * _wrap(b.heading - a.heading)
        return Pose2(a.x + alpha * (b.x - a.x), a.y + alpha * (b.y - a.y), heading)


def _wrap(x: float) -> float:
    return math.remainder(x, 2.0 * math.pi)


@dataclass
class _State:
    agent: AgentNode
    path: _Path
    plan_points: list[TrackPoint]  # planned samples from the history boundary
    plan_s: list[float]  # arc position of each planned sample
    appear_index: int  # first rolled frame this agent exists at
    edited: bool
    adapt_from: float
    immovable: bool
    priority: int = 0
    s: float = 0.0
    v: float = 0.0
    deviated: bool = False
    stopped_after_deviation: bool = False
    detoured: set = field(default_factory=set)
    caution: float = 1.0
    rolled: list[TrackPoint] = field(default_factory=list)
    pose: Pose2 = None

    @property
    def radius(self) -> float:
        return 0.5 * math.hypot(self.agent.length + 1.0, self.agent.width + 1.0)

    def plan_speed_at(self, s: float) -> float:
        if not self.plan_s:
            return 0.0
        if s >= self.plan_s[-1]:
            return self.plan_points[-1].speed
        for k in range(len(self.plan_s) - 1, -1, -1):
            if self.plan_s[k] <= s + 1e-9:
                return self.plan_points[min(k + 1, len(self.plan_points) - 1)].speed
        return self.plan_points[0].speed


def _check_history(scene: Scenario, config: RefinementConfig):
    h = config.history_steps - 1
    for a in scene.agents:
        if not a.kind.dynamic:
            continue
        valid_idx = [
            int(round(p.t / scene.timestep)) for p in a.trajectory.valid_points
        ]
        if not valid_idx:
            raise MissingHistoryError(f"agent {a.id} has no valid samples")
        first = valid_idx[0]
        if first > h:
            continue  # inserted mid-scenario; joins the rollout when it appears
        have = {i for i in valid_idx if i <= h}
        if first > 0 or len(have) < h + 1:
            raise MissingHistoryError(
                f"agent {a.id} lacks the first {config.history_steps} "
                f"history samples"
            )


def _build_state(
    agent: AgentNode,
    scene: Scenario,
    tau_edit: dict[str, Trajectory],
    edit_starts: dict[str, float],
    config: RefinementConfig,
) -> _State:
    h_time = config.history_end_time
    planned = tau_edit.get(agent.id, agent.trajectory)
    pts = [p for p in planned.valid_points if p.t >= h_time - 1e-9]
    if not pts:
        pts = planned.valid_points[-1:]
    # Path poses with duplicate positions collapsed (arc length monotone).
    poses = [pts[0].pose]
    for p in pts[1:]:
        if math.hypot(p.pose.x - poses[-1].x, p.pose.y - poses[-1].y) > 1e-9:
            poses.append(p.pose)
    # Arc position of every planned sample, aligned index-for-index with pts.
    plan_s = [0.0]
    prev = pts[0].pose
    for p in pts[1:]:
        plan_s.append(plan_s[-1] + math.hypot(p.pose.x - prev.x, p.pose.y - prev.y))
        prev = p.pose
    immovable = (not agent.kind.dynamic) or all(
        p.speed < _STOPPED for p in pts
    )
    appear = int(round(pts[0].t / scene.timestep))
    return _State(
        agent=agent,
        path=_Path(poses),
        plan_points=pts,
        plan_s=plan_s,
        appear_index=appear,
        edited=agent.id in tau_edit,
        adapt_from=edit_starts.get(agent.id, h_time),
        immovable=immovable,
    )


def _occupancy(state: _State, margin: float) -> list[Pose2]:
    """Projected poses over the yield window at the current speed."""
    if state.immovable or state.v < _STOPPED:
        return [state.pose]
    poses = [state.pose]
    tau = _OCC_STEP
    while tau <= margin + 1e-9:
        poses.append(state.path.pose_at(state.s + state.v * tau))
        tau += _OCC_STEP
    return poses


def _first_block(
    me: _State,
    scan: list[tuple[_State, list[Pose2]]],
    config: RefinementConfig,
) -> tuple[float, _State | None]:
    """Distance along my path to the first inflated overlap, and the blocker."""
    a = config.max_decel
    scan_dist = me.caution * (
        me.v * me.v / (2 * a) + me.v * config.yield_time_margin
    ) + config.min_gap + me.agent.length + 4.0
    my_dims = (me.agent.length + config.min_gap, me.agent.width + config.min_gap)
    best = (math.inf, None)
    # Quick reject on straight-line reach.
    near = []
    for other, occ in scan:
        reach = scan_dist + me.radius + other.radius + other.v * config.yield_time_margin
        if math.hypot(other.pose.x - me.pose.x, other.pose.y - me.pose.y) <= reach:
            near.append((other, occ))
    if not near:
        return best
    probes = int(scan_dist / _SCAN_STEP) + 1
    for k in range(probes):
        ds = k * _SCAN_STEP
        pose = me.path.pose_at(me.s + ds)
        for other, occ in near:
            odims = (
                other.agent.length + config.min_gap,
                other.agent.width + config.min_gap,
            )
            rr = me.radius + other.radius + config.min_gap
            for opose in occ:
                if math.hypot(opose.x - pose.x, opose.y - pose.y) > rr:
                    continue
                if boxes_collide(my_dims, pose, odims, opose):
                    return (max(0.0, ds - _SCAN_STEP), other)
    return best


# Comfort margin for detour corridors (actual clearance, not min_gap).
_DETOUR_MARGIN = 0.4


def _is_parked(state: _State) -> bool:
    """Immovable now and for the rest of its plan."""
    if state.immovable:
        return True
    if state.v >= _STOPPED:
        return False
    idx = 0
    for k, s in enumerate(state.plan_s):
        if s <= state.s + 1e-6:
            idx = k
    return all(p.speed < _STOPPED for p in state.plan_points[idx:])


def _lateral_half_extent(blocker: _State, heading: float) -> float:
    """Blocker half-extent perpendicular to the given travel heading."""
    rel = blocker.pose.heading - heading
    return 0.5 * (
        abs(math.sin(rel)) * blocker.agent.length
        + abs(math.cos(rel)) * blocker.agent.width
    )


def _try_detour(
    me: _State,
    blocker: _State,
    block_dist: float,
    others: list[_State],
    scene: Scenario,
    config: RefinementConfig,
) -> bool:
    """Shift a window of the path sideways around a parked blocker.

    The corridor is checked against actual footprints plus a comfort margin
    (squeezing inside min_gap laterally is allowed; overlap is not).  On
    success every parked obstacle the new corridor clears is marked so the
    gap scan stops braking for it.
    """
    if me.agent.kind not in (AgentKind.VEHICLE, AgentKind.CYCLIST):
        return False
    if blocker.agent.id in me.detoured:
        return False
    if not scene.map.drivable_area:
        return False  # no map data: cannot establish a drivable corridor
    s_block = me.s + block_dist
    blocker_s = s_block + 0.5 * (me.agent.length + blocker.agent.length)
    block_pose = me.path.pose_at(blocker_s)
    # Side: move away from the blocker's center, defaulting to the left.
    c, si = math.cos(block_pose.heading), math.sin(block_pose.heading)
    lat = -(blocker.pose.x - block_pose.x) * si + (blocker.pose.y - block_pose.y) * c
    side = -1.0 if lat > 0 else 1.0
    clearance = (
        0.5 * me.agent.width
        + _lateral_half_extent(blocker, block_pose.heading)
        + _DETOUR_MARGIN + 0.3
    )
    lane_width = max((l.width for l in scene.map.lanes), default=3.5)
    if clearance > lane_width:
        return False
    offset = side * clearance
    # Hold full offset across the blocker, cosine ramps on both sides.
    half_plateau = 0.5 * (me.agent.length + blocker.agent.length) + 1.0
    ramp = max(8.0, me.v * 2.0)
    p0 = blocker_s - half_plateau
    p1 = blocker_s + half_plateau
    s0 = max(0.0, p0 - ramp)
    s1 = p1 + ramp

    def weight(s: float) -> float:
        if s <= s0 or s >= s1:
            return 0.0
        if p0 <= s <= p1:
            return 1.0
        if s < p0:
            return 0.5 * (1.0 - math.cos(math.pi * (s - s0) / (p0 - s0)))
        return 0.5 * (1.0 - math.cos(math.pi * (s1 - s) / (s1 - p1)))

    def shifted(s: float) -> Pose2:
        base = me.path.pose_at(s)
        w = weight(s)
        if w == 0.0:
            return base
        dx = -math.sin(base.heading) * offset * w
        dy = math.cos(base.heading) * offset * w
        return Pose2(base.x + dx, base.y + dy, base.heading)

    # Feasibility: corridor stays drivable and clear (actual + margin) of
    # every parked obstacle.
    parked = [o for o in others if o is not me and _is_parked(o)]
    my_dims = (
        me.agent.length + 2 * _DETOUR_MARGIN,
        me.agent.width + 2 * _DETOUR_MARGIN,
    )
    cleared: set[str] = set()
    probe = me.s
    while probe <= s1 + 1e-9:
        pose = shifted(probe)
        if scene.map.drivable_area and not point_in_drivable(
            pose.x, pose.y, scene.map
        ):
            return False
        for other in parked:
            if math.hypot(other.pose.x - pose.x, other.pose.y - pose.y) > (
                me.radius + other.radius + config.min_gap
            ):
                continue
            odims = (other.agent.length, other.agent.width)
            if boxes_collide(my_dims, pose, odims, other.pose):
                return False
            inflated = (
                other.agent.length + config.min_gap,
                other.agent.width + config.min_gap,
            )
            full = (
                me.agent.length + config.min_gap,
                me.agent.width + config.min_gap,
            )
            if boxes_collide(full, pose, inflated, other.pose):
                cleared.add(other.agent.id)
        probe += _SCAN_STEP
    if blocker.agent.id not in cleared:
        cleared.add(blocker.agent.id)
    # Adopt: rebuild the path with the shifted window.
    new_poses = []
    s = 0.0
    while s < me.path.length:
        new_poses.append(shifted(s))
        s += _SCAN_STEP
    new_poses.append(shifted(me.path.length))
    me.path = _Path(new_poses)
    # Poses before s0 are untouched, so the current arc position carries over.
    me.detoured.update(cleared)
    me.deviated = True
    return True


def _rollout_pass(
    scene: Scenario,
    states: dict[str, _State],
    order: list[str],
    config: RefinementConfig,
    end_index: int,
) -> None:
    dt = scene.timestep
    h = config.history_steps - 1
    a_max = config.max_decel
    for st in states.values():
        start = max(st.appear_index, h)
        st.rolled = [
            p for p in st.plan_points if p.t <= grid_time(start, dt) + 1e-9
        ]
        if st.rolled:
            last = st.rolled[-1]
            idx = min(len(st.plan_points) - 1, len(st.rolled) - 1)
            st.s = st.plan_s[idx]
            st.v = last.speed
            st.pose = last.pose
        else:
            st.s = 0.0
            st.v = st.plan_points[0].speed
            st.pose = st.plan_points[0].pose
        st.deviated = False
        st.stopped_after_deviation = False
        st.detoured = set()

    for k in range(h + 1, end_index + 1):
        t = grid_time(k, dt)
        for agent_id in order:
            st = states[agent_id]
            if k <= st.appear_index:
                continue
            plan_idx = k - max(st.appear_index, h)
            if st.immovable or not st.agent.kind.dynamic:
                if plan_idx < len(st.plan_points):
                    p = st.plan_points[plan_idx]
                    st.rolled.append(p)
                    st.pose, st.v = p.pose, p.speed
                    st.s = st.plan_s[plan_idx]
                continue
            if t <= st.adapt_from + 1e-9:
                # Still inside this agent's own intent window: follow the plan.
                if plan_idx < len(st.plan_points):
                    p = st.plan_points[plan_idx]
                    st.rolled.append(p)
                    st.pose, st.v = p.pose, p.speed
                    st.s = st.plan_s[plan_idx]
                continue

            scan_members = []
            for other_id in order:
                if other_id == agent_id or other_id in st.detoured:
                    continue
                other = states[other_id]
                if k <= other.appear_index:
                    continue
                if (
                    other.immovable
                    or other.priority < st.priority
                    or other.v < _STOPPED
                ):
                    scan_members.append(
                        (other, _occupancy(other, config.yield_time_margin * st.caution))
                    )
            block_dist, blocker = _first_block(st, scan_members, config)

            if (
                blocker is not None
                and _is_parked(blocker)
                and block_dist < st.v * st.v / (2 * a_max) + config.min_gap + 3.0
            ):
                if _try_detour(
                    st, blocker, block_dist, list(states.values()), scene, config
                ):
                    block_dist, blocker = _first_block(st, scan_members, config)

            if not st.deviated and plan_idx < len(st.plan_points):
                planned_next = st.plan_points[plan_idx]
                advance = st.plan_s[plan_idx] - st.s
                # Keep the plan only while stopping room remains after the
                # planned step (Gipps-style criterion).
                stopping = planned_next.speed**2 / (2.0 * a_max)
                safe = (
                    block_dist == math.inf
                    or advance + stopping + 0.25 <= block_dist
                )
                if safe:
                    st.rolled.append(planned_next)
                    st.pose, st.v = planned_next.pose, planned_next.speed
                    st.s = st.plan_s[plan_idx]
                    continue
                st.deviated = True

            v_goal = st.plan_speed_at(st.s)
            if block_dist != math.inf:
                gap = max(0.0, block_dist - 0.25 - st.v * dt)
                v_safe = math.sqrt(2.0 * a_max * gap)
            else:
                v_safe = math.inf
            v_next = min(v_goal, v_safe, st.v + a_max * dt)
            v_next = max(v_next, st.v - a_max * dt, 0.0)
            st.s += 0.5 * (st.v + v_next) * dt
            if st.s >= st.path.length:
                st.s = st.path.length
                v_next = 0.0
            pose = st.path.pose_at(st.s)
            if v_next < _STOPPED and st.deviated:
                st.stopped_after_deviation = True
            st.v = v_next
            st.pose = pose
            st.rolled.append(TrackPoint(t=t, pose=pose, speed=v_next, valid=True))


def _classify(
    conflict: Conflict, states: dict[str, _State]
) -> Resolution:
    a = states.get(conflict.agent_a)
    b = states.get(conflict.agent_b)
    candidates = [s for s in (a, b) if s is not None and s.deviated]
    if not candidates:
        return Resolution.YIELD
    adapter = max(candidates, key=lambda s: s.priority)
    if adapter.detoured:
        return Resolution.DETOUR
    if adapter.stopped_after_deviation:
        return Resolution.STOP
    return Resolution.YIELD


def refine(
    scene: Scenario,
    tau_edit: dict[str, Trajectory],
    config: RefinementConfig = RefinementConfig(),
    edit_start_times: dict[str, float] | None = None,
) -> RolloutResult:
    """Roll out refined futures for every agent given the edited intents.

    With ``bypass`` set, planned trajectories pass through verbatim and
    conflicts are only reported (each marked unresolved).  Otherwise agents
    adapt in priority order until the scene is overlap-free or the pass
    budget runs out; anything still overlapping is marked unresolved and
    invalidates the result.
    """
    planned = {
        a.id: tau_edit.get(a.id, a.trajectory) for a in scene.agents
    }
    conflicts = predict_conflicts(scene, planned, config)
    if config.bypass:
        return RolloutResult(
            refined=dict(planned),
            conflicts=[c.resolved_as(Resolution.UNRESOLVED) for c in conflicts],
            valid=not conflicts,
            passes=0,
        )

    _check_history(scene, config)
    edit_starts = edit_start_times or {}
    states = {
        a.id: _build_state(a, scene, tau_edit, edit_starts, config)
        for a in scene.agents
    }

    first_conflict: dict[str, float] = {}
    for c in conflicts:
        for aid in (c.agent_a, c.agent_b):
            first_conflict.setdefault(aid, c.time)
    edited_ids = sorted(tau_edit)
    others = sorted(
        (aid for aid in states if aid not in tau_edit),
        key=lambda aid: (first_conflict.get(aid, math.inf), aid),
    )
    order = edited_ids + others
    for rank, aid in enumerate(order):
        states[aid].priority = rank

    end_index = min(
        scene.horizon - 1, (config.history_steps - 1) + config.horizon_steps
    )

    def assemble(st: _State) -> Trajectory:
        source = planned[st.agent.id]
        first_t = st.rolled[0].t if st.rolled else math.inf
        prefix = [p for p in source.points if p.t < first_t - 1e-9]
        return Trajectory(tuple(prefix + st.rolled), timestep=scene.timestep)

    passes = 0
    overlaps: list[Conflict] = []
    refined: dict[str, Trajectory] = {}
    for passes in range(1, config.max_passes + 1):
        _rollout_pass(scene, states, order, config, end_index)
        refined = {aid: assemble(st) for aid, st in states.items()}
        overlaps = actual_overlaps(scene, refined)
        if not overlaps:
            break
        # Escalate caution on the lowest-priority adaptable side of each
        # residual overlap; if nothing can adapt further, give up.
        escalated = False
        for c in overlaps:
            adaptable = [
                states[aid]
                for aid in (c.agent_a, c.agent_b)
                if not states[aid].immovable and states[aid].agent.kind.dynamic
            ]
            if not adaptable:
                continue
            low = max(adaptable, key=lambda s: s.priority)
            if low.caution < 8.0:
                low.caution *= 1.5
                escalated = True
        if not escalated:
            break

    resolved = []
    overlap_pairs = {(c.agent_a, c.agent_b) for c in overlaps}
    seen_pairs = set()
    for c in conflicts:
        pair = (c.agent_a, c.agent_b)
        seen_pairs.add(pair)
        if pair in overlap_pairs:
            resolved.append(c.resolved_as(Resolution.UNRESOLVED))
        else:
            resolved.append(c.resolved_as(_classify(c, states)))
    for c in overlaps:
        if (c.agent_a, c.agent_b) not in seen_pairs:
            resolved.append(c.resolved_as(Resolution.UNRESOLVED))

    return RolloutResult(
        refined=refined,
        conflicts=resolved,
        valid=not any(
            c.resolution is Resolution.UNRESOLVED for c in resolved
        ),
        passes=passes,
    )
