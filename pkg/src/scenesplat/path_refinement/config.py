"""Refinement parameters."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvalidInputError


@dataclass(frozen=True)
class RefinementConfig:
    horizon_steps: int = 80
    history_steps: int = 11
    timestep: float = 0.1
    min_gap: float = 2.0
    yield_time_margin: float = 1.5
    max_decel: float = 4.0
    bypass: bool = False
    max_passes: int = 10

    def __post_init__(self):
        if self.history_steps < 2:
            raise InvalidInputError("history_steps must be >= 2")
        for name in ("horizon_steps", "timestep", "min_gap",
                     "yield_time_margin", "max_decel", "max_passes"):
            if getattr(self, name) <= 0:
                raise InvalidInputError(f"{name} must be positive")

    @property
    def history_end_time(self) -> float:
        return round((self.history_steps - 1) * self.timestep, 9)
