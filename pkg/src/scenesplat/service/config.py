"""Engine-wide defaults, overridable from a JSON file.

The SCENESPLAT_CONFIG environment variable points at the defaults file; any
missing key keeps its built-in value.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..errors import ScenarioFormatError
from ..object_query.query import QueryWeights
from ..path_refinement.config import RefinementConfig
from ..temporal_alignment.training import TrainingConfig

ENV_VAR = "SCENESPLAT_CONFIG"


@dataclass(frozen=True)
class EngineConfig:
    training: TrainingConfig = field(default_factory=TrainingConfig)
    query: QueryWeights = field(default_factory=QueryWeights)
    refinement: RefinementConfig = field(default_factory=RefinementConfig)
    temperature: float = 0.1


def _merge(cls_default, overrides: dict):
    return replace(cls_default, **overrides) if overrides else cls_default


def load_engine_config(path: str | Path | None = None) -> EngineConfig:
    """Built-in defaults merged with the JSON file (if any)."""
    if path is None:
        path = os.environ.get(ENV_VAR)
    base = EngineConfig()
    if not path:
        return base
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return EngineConfig(
            training=_merge(base.training, doc.get("training", {})),
            query=_merge(base.query, doc.get("query", {})),
            refinement=_merge(base.refinement, doc.get("refinement", {})),
            temperature=float(doc.get("temperature", base.temperature)),
        )
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise ScenarioFormatError(f"bad config file {path}: {exc}") from exc
