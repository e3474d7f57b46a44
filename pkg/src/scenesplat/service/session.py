"""Versioned scenario session with optimistic concurrency and undo.

History is append-only: every mutation adds a version, undo only moves the
active pointer.  Mutations carry the base version they were computed
against; a mismatch with the active version raises VersionConflictError so
lost updates are impossible.  With a directory attached, state persists
across CLI invocations.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import NoScenarioError, ScenarioFormatError, VersionConflictError
from ..scene_model.scenario import Scenario
from ..scene_model.serialize import (
    load_scenario,
    save_scenario,
    scenario_from_document,
    scenario_to_document,
)


@dataclass
class SessionVersion:
    index: int
    scenario: Scenario
    label: str  # load | edit | refine
    pending_edits: dict[str, float] = field(default_factory=dict)
    rollout: dict | None = None
    edit_log: list = field(default_factory=list)


class SessionStore:
    def __init__(self, directory: str | Path | None = None):
        self._versions: list[SessionVersion] = []
        self._active: int | None = None
        self._log: list[dict] = []
        self._lock = threading.Lock()
        self._dir = Path(directory) if directory else None
        if self._dir is not None and (self._dir / "session.json").exists():
            self._restore()

    # ------------------------------------------------------------- state
    @property
    def active_version(self) -> int:
        if self._active is None:
            raise NoScenarioError("no scenario loaded")
        return self._active

    def has_scenario(self) -> bool:
        return self._active is not None

    def version(self, index: int | None = None) -> SessionVersion:
        if self._active is None:
            raise NoScenarioError("no scenario loaded")
        idx = self._active if index is None else index
        if not 0 <= idx < len(self._versions):
            raise VersionConflictError(f"unknown version {idx}")
        return self._versions[idx]

    def scenario(self) -> Scenario:
        return self.version().scenario

    @property
    def command_log(self) -> list[dict]:
        return list(self._log)

    # ---------------------------------------------------------- mutation
    def load(self, scenario: Scenario) -> int:
        with self._lock:
            self._versions = [
                SessionVersion(index=0, scenario=scenario, label="load")
            ]
            self._active = 0
            self._log = []
            self._record("load", "scenario loaded")
            self._persist()
            return 0

    def commit(
        self,
        base_version: int | None,
        scenario: Scenario,
        label: str,
        command_text: str,
        summary: str,
        pending_edits: dict[str, float] | None = None,
        rollout: dict | None = None,
        edit_log: list | None = None,
    ) -> int:
        """Append a new version; base must match the active pointer."""
        with self._lock:
            if self._active is None:
                raise NoScenarioError("no scenario loaded")
            if base_version is not None and base_version != self._active:
                raise VersionConflictError(
                    f"base version {base_version} is stale "
                    f"(active is {self._active})"
                )
            version = SessionVersion(
                index=len(self._versions),
                scenario=scenario,
                label=label,
                pending_edits=dict(pending_edits or {}),
                rollout=rollout,
                edit_log=list(edit_log or []),
            )
            self._versions.append(version)
            self._active = version.index
            self._record(command_text, summary)
            self._persist()
            return version.index

    def undo(self, base_version: int | None = None) -> int:
        with self._lock:
            if self._active is None:
                raise NoScenarioError("no scenario loaded")
            if base_version is not None and base_version != self._active:
                raise VersionConflictError(
                    f"base version {base_version} is stale "
                    f"(active is {self._active})"
                )
            if self._active == 0:
                raise VersionConflictError("nothing to undo: at version 0")
            self._active -= 1
            self._record("undo", f"active version -> {self._active}")
            self._persist()
            return self._active

    # ------------------------------------------------------- persistence
    def _record(self, command: str, summary: str):
        self._log.append(
            {"command": command, "summary": summary, "timestamp": time.time()}
        )

    def _persist(self):
        if self._dir is None:
            return
        self._dir.mkdir(parents=True, exist_ok=True)
        for v in self._versions:
            path = self._dir / f"scenario_v{v.index:04d}.json"
            if not path.exists():
                save_scenario(v.scenario, path)
        meta = {
            "active": self._active,
            "log": self._log,
            "versions": [
                {
                    "index": v.index,
                    "label": v.label,
                    "pending_edits": v.pending_edits,
                    "rollout": v.rollout,
                    "edit_log": v.edit_log,
                }
                for v in self._versions
            ],
        }
        (self._dir / "session.json").write_text(
            json.dumps(meta, indent=1) + "\n", encoding="utf-8"
        )

    def _restore(self):
        try:
            meta = json.loads(
                (self._dir / "session.json").read_text(encoding="utf-8")
            )
            versions = []
            for entry in meta["versions"]:
                idx = int(entry["index"])
                scenario = load_scenario(self._dir / f"scenario_v{idx:04d}.json")
                versions.append(
                    SessionVersion(
                        index=idx,
                        scenario=scenario,
                        label=str(entry.get("label", "load")),
                        pending_edits={
                            str(k): float(v)
                            for k, v in entry.get("pending_edits", {}).items()
                        },
                        rollout=entry.get("rollout"),
                        edit_log=list(entry.get("edit_log", [])),
                    )
                )
            self._versions = versions
            self._active = int(meta["active"]) if versions else None
            self._log = list(meta.get("log", []))
        except (json.JSONDecodeError, KeyError, ValueError, OSError) as exc:
            raise ScenarioFormatError(f"corrupt session directory: {exc}") from exc

    # ----------------------------------------------------------- export
    def scenario_document(self, index: int | None = None) -> dict:
        return scenario_to_document(self.version(index).scenario)

    @staticmethod
    def scenario_from_doc(doc: dict) -> Scenario:
        return scenario_from_document(doc)
