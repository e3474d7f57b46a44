"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class LoadRequest(BaseModel):
    scenario: dict


class LoadResponse(BaseModel):
    version: int
    agents: int


class QueryBody(BaseModel):
    text: str = Field(min_length=1)
    kind_hint: str | None = None
    time_window: tuple[float, float] | None = None


class RankedEntry(BaseModel):
    agent: str
    total: float
    appearance: float
    motion: float
    location: float


class QueryResponse(BaseModel):
    version: int
    chosen: str
    appearance_terms: str
    temporal_terms: str
    appearance_filter_empty: bool
    ranked: list[RankedEntry]


class EditBody(BaseModel):
    command: str = Field(min_length=1)
    base_version: int | None = None


class EditResponse(BaseModel):
    version: int
    edited_agents: list[str]
    summary: str
    log: list[dict]


class RefineBody(BaseModel):
    base_version: int | None = None
    bypass: bool = False
    overrides: dict = Field(default_factory=dict)


class RefineResponse(BaseModel):
    version: int
    valid: bool
    bypass: bool
    conflicts: list[dict]
    metrics: dict
    refined: dict[str, list]


class UndoBody(BaseModel):
    base_version: int | None = None


class VersionResponse(BaseModel):
    version: int


class ScenarioResponse(BaseModel):
    version: int
    scenario: dict


class FramesResponse(BaseModel):
    version: int
    frames: list[dict]


class ConflictsResponse(BaseModel):
    version: int
    conflicts: list[dict]
    last_refinement: dict | None


class ErrorBody(BaseModel):
    error: str
    message: str
    position: int | None = None
