from .config import RefinementConfig
from .conflicts import Conflict, ConflictKind, Resolution, predict_conflicts
from .rollout import RolloutResult, refine
from .validate import ScenarioMetrics, validate

__all__ = [
    "RefinementConfig",
    "Conflict",
    "ConflictKind",
    "Resolution",
    "predict_conflicts",
    "RolloutResult",
    "refine",
    "ScenarioMetrics",
    "validate",
]
