"""Benchmark runners: querying accuracy, task completion, motion safety."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..edit_engine.apply import apply_edit
from ..edit_engine.assets import AssetRecord
from ..edit_engine.command import parse_command
from ..errors import SceneSplatError
from ..object_query.query import QueryModels, QueryRequest, QueryWeights, query
from ..path_refinement.config import RefinementConfig
from ..path_refinement.rollout import refine
from ..path_refinement.validate import validate
from ..scene_model.scenario import AgentKind, Scenario, Trajectory


@dataclass(frozen=True)
class QueryCase:
    scenario: Scenario
    prompt: str
    expected_id: str
    kind: AgentKind


@dataclass(frozen=True)
class TaskCase:
    category: str  # add_veh | add_obj | add_ped | modify_veh | modify_ped | remove
    scenario: Scenario
    command: str


@dataclass(frozen=True)
class ConflictCase:
    name: str
    scenario: Scenario
    edited: dict[str, Trajectory]


@dataclass
class QueryAccuracyTable:
    vehicle: tuple[int, int] = (0, 0)
    pedestrian: tuple[int, int] = (0, 0)

    @property
    def total(self) -> tuple[int, int]:
        return (
            self.vehicle[0] + self.pedestrian[0],
            self.vehicle[1] + self.pedestrian[1],
        )

    @staticmethod
    def _acc(pair: tuple[int, int]) -> float:
        return pair[0] / pair[1] if pair[1] else 0.0

    def as_dict(self) -> dict:
        return {
            "vehicle": {"correct": self.vehicle[0], "total": self.vehicle[1],
                        "accuracy": self._acc(self.vehicle)},
            "pedestrian": {"correct": self.pedestrian[0],
                           "total": self.pedestrian[1],
                           "accuracy": self._acc(self.pedestrian)},
            "total": {"correct": self.total[0], "total": self.total[1],
                      "accuracy": self._acc(self.total)},
        }


TASK_CATEGORIES = (
    "add_veh", "add_obj", "add_ped", "modify_veh", "modify_ped", "remove",
)


@dataclass
class TaskCompletionTable:
    completed: dict = field(default_factory=dict)
    attempted: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def rate(self, category: str) -> float:
        n = self.attempted.get(category, 0)
        return self.completed.get(category, 0) / n if n else 0.0

    def as_dict(self) -> dict:
        out = {}
        for cat in TASK_CATEGORIES:
            if self.attempted.get(cat, 0):
                out[cat] = {
                    "completed": self.completed.get(cat, 0),
                    "attempted": self.attempted[cat],
                    "rate": self.rate(cat),
                }
        total_c = sum(self.completed.values())
        total_a = sum(self.attempted.values())
        out["total"] = {
            "completed": total_c,
            "attempted": total_a,
            "rate": total_c / total_a if total_a else 0.0,
        }
        if self.failures:
            out["failures"] = self.failures
        return out


@dataclass
class MotionMetricsTable:
    per_scenario: dict = field(default_factory=dict)  # mode -> {name: metrics}

    def rates(self, mode: str) -> dict:
        rows = self.per_scenario.get(mode, {})
        if not rows:
            return {k: 0.0 for k in
                    ("collision_veh", "collision_ped", "offroad", "failure")}
        n = len(rows)
        return {
            key: sum(m.as_dict()[key] for m in rows.values()) / n
            for key in ("collision_veh", "collision_ped", "offroad", "failure")
        }

    def as_dict(self) -> dict:
        return {
            mode: {
                "rates": self.rates(mode),
                "scenarios": {
                    name: m.as_dict() for name, m in sorted(rows.items())
                },
            }
            for mode, rows in sorted(self.per_scenario.items())
        }


@dataclass
class BenchmarkReport:
    querying: QueryAccuracyTable | None = None
    tasks: TaskCompletionTable | None = None
    motion: MotionMetricsTable | None = None

    def as_dict(self) -> dict:
        doc = {}
        if self.querying is not None:
            doc["querying"] = self.querying.as_dict()
        if self.tasks is not None:
            doc["tasks"] = self.tasks.as_dict()
        if self.motion is not None:
            doc["motion"] = self.motion.as_dict()
        return doc

    def serialize(self) -> str:
        return json.dumps(self.as_dict(), indent=1, sort_keys=True) + "\n"


def run_query_benchmark(
    cases: list[QueryCase],
    models: QueryModels,
    weights: QueryWeights = QueryWeights(),
) -> QueryAccuracyTable:
    table = QueryAccuracyTable()
    veh = [0, 0]
    ped = [0, 0]
    for case in cases:
        bucket = ped if case.kind is AgentKind.PEDESTRIAN else veh
        bucket[1] += 1
        result = query(case.scenario, QueryRequest(text=case.prompt), models, weights)
        if result.chosen == case.expected_id:
            bucket[0] += 1
    table.vehicle = tuple(veh)
    table.pedestrian = tuple(ped)
    return table


def run_task_benchmark(
    cases: list[TaskCase],
    models: QueryModels,
    bank: list[AssetRecord],
    config: RefinementConfig = RefinementConfig(),
) -> TaskCompletionTable:
    """Completion = parse + apply + refine all succeed with a valid rollout.

    Malformed or failing commands count as not completed; they never crash
    the run.
    """
    table = TaskCompletionTable()
    for case in cases:
        table.attempted[case.category] = table.attempted.get(case.category, 0) + 1
        try:
            cmd = parse_command(case.command)
            edit = apply_edit(case.scenario, cmd, models, bank)
            tau = dict(edit.initial_trajectories)
            result = refine(edit.new_scenario, tau, config)
            if result.valid:
                table.completed[case.category] = (
                    table.completed.get(case.category, 0) + 1
                )
            else:
                table.failures.append(
                    {"category": case.category, "command": case.command,
                     "reason": "rollout invalid"}
                )
        except SceneSplatError as exc:
            table.failures.append(
                {"category": case.category, "command": case.command,
                 "reason": f"{type(exc).__name__}: {exc}"}
            )
    return table


def run_motion_benchmark(
    suite: list[ConflictCase],
    config: RefinementConfig = RefinementConfig(),
) -> MotionMetricsTable:
    """Run every scenario refined and bypassed, collecting safety metrics."""
    table = MotionMetricsTable(per_scenario={"refined": {}, "bypass": {}})
    bypass_cfg = RefinementConfig(
        horizon_steps=config.horizon_steps,
        history_steps=config.history_steps,
        timestep=config.timestep,
        min_gap=config.min_gap,
        yield_time_margin=config.yield_time_margin,
        max_decel=config.max_decel,
        bypass=True,
        max_passes=config.max_passes,
    )
    for case in suite:
        refined = refine(case.scenario, case.edited, config)
        bypassed = refine(case.scenario, case.edited, bypass_cfg)
        table.per_scenario["refined"][case.name] = validate(refined, case.scenario)
        table.per_scenario["bypass"][case.name] = validate(bypassed, case.scenario)
    return table


def _fmt_pct(x: float) -> str:
    return f"{100.0 * x:5.1f}"


def render_tables(report: BenchmarkReport) -> str:
    """Aligned plain-text tables in the querying/tasks/motion layouts."""
    lines: list[str] = []
    if report.querying is not None:
        q = report.querying.as_dict()
        lines.append("Object querying accuracy")
        lines.append(f"{'':14}{'Acc.':>8}{'N':>6}")
        for row in ("vehicle", "pedestrian", "total"):
            lines.append(
                f"{row:14}{q[row]['accuracy']:8.2f}{q[row]['total']:6d}"
            )
        lines.append("")
    if report.tasks is not None:
        t = report.tasks.as_dict()
        lines.append("Task completion (%)")
        header = [c for c in TASK_CATEGORIES if c in t] + ["total"]
        lines.append("".join(f"{h:>12}" for h in header))
        lines.append(
            "".join(f"{_fmt_pct(t[h]['rate']):>12}" for h in header)
        )
        lines.append("")
    if report.motion is not None:
        lines.append("Motion generation failure rates (%)")
        lines.append(
            f"{'mode':10}{'Coll.Veh':>10}{'Coll.Ped':>10}"
            f"{'Off-road':>10}{'Failure':>10}"
        )
        for mode in ("refined", "bypass"):
            if mode not in report.motion.per_scenario:
                continue
            r = report.motion.rates(mode)
            lines.append(
                f"{mode:10}{_fmt_pct(r['collision_veh']):>10}"
                f"{_fmt_pct(r['collision_ped']):>10}"
                f"{_fmt_pct(r['offroad']):>10}"
                f"{_fmt_pct(r['failure']):>10}"
            )
        lines.append("")
    return "\n".join(lines)
