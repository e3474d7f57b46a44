"""Free-text object grounding: appearance filter, then temporal similarity."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import AlignmentWindowError, InvalidInputError, NoCandidatesError
from ..scene_model.scenario import AgentKind, AgentNode, Scenario, Trajectory
from ..temporal_alignment.codebook import Codebook
from ..temporal_alignment.features import extract_features
from ..temporal_alignment.projector import (
    DEFAULT_TEMPERATURE,
    aggregate,
    embed_trajectory,
)
from ..temporal_alignment.text_encoder import cosine, encode_text
from ..temporal_alignment.training import ProjectorPair, family_of
from .lexicon import split_query


@dataclass(frozen=True)
class QueryRequest:
    text: str
    agent_kind_hint: AgentKind | None = None
    time_window: tuple[float, float] | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise InvalidInputError("query text must be non-empty")


@dataclass(frozen=True)
class QueryWeights:
    tau_app: float = 0.15
    w_motion: float = 0.5
    w_location: float = 0.5


@dataclass(frozen=True)
class QueryModels:
    """Trained projector pairs plus the codebooks they align to."""

    projectors: dict[str, ProjectorPair]
    motion_books: dict[str, Codebook]
    location_book: Codebook
    temperature: float = DEFAULT_TEMPERATURE


@dataclass(frozen=True)
class AgentScore:
    agent_id: str
    total: float
    appearance: float
    motion: float
    location: float


@dataclass(frozen=True)
class QueryResult:
    ranked: tuple[AgentScore, ...]
    chosen: str
    appearance_terms: str
    temporal_terms: str
    appearance_filter_empty: bool = False


def _slice(traj: Trajectory, window: tuple[float, float]) -> Trajectory:
    t0, t1 = window
    points = [p for p in traj.points if t0 - 1e-9 <= p.t <= t1 + 1e-9]
    if len(points) < 2:
        return traj
    return Trajectory(tuple(points), timestep=traj.timestep)


def _temporal_vectors(
    agent: AgentNode, ego: AgentNode, models: QueryModels,
    window: tuple[float, float] | None,
) -> tuple[np.ndarray, np.ndarray] | None:
    family = family_of(agent.kind)
    pair = models.projectors.get(family)
    if pair is None:
        return None
    traj = _slice(agent.trajectory, window) if window else agent.trajectory
    ego_traj = _slice(ego.trajectory, window) if window else ego.trajectory
    try:
        feat = extract_features(traj, ego_traj)
    except AlignmentWindowError:
        return None
    z_m = embed_trajectory(feat, pair.motion)
    z_l = embed_trajectory(feat, pair.location)
    f_motion, _ = aggregate(z_m, models.motion_books[family], models.temperature)
    f_location, _ = aggregate(z_l, models.location_book, models.temperature)
    return f_motion, f_location


def _kind_matches(agent: AgentNode, hint: AgentKind | None) -> bool:
    if hint is None:
        return True
    return agent.kind is hint


def query(
    scene: Scenario,
    req: QueryRequest,
    models: QueryModels,
    weights: QueryWeights = QueryWeights(),
) -> QueryResult:
    """Rank non-ego agents against a free-text query and choose the best.

    Appearance similarity gates the candidate set (threshold tau_app; when
    nothing passes, every agent stays and the result is flagged), then motion
    and location similarities are added.  Deterministic: ties break on the
    smallest agent id.
    """
    agents = [a for a in scene.non_ego_agents() if _kind_matches(a, req.agent_kind_hint)]
    if not agents:
        raise NoCandidatesError("scene has no matching non-ego agents")

    appearance_terms, temporal_terms = split_query(req.text)
    app_q = encode_text(appearance_terms) if appearance_terms else None
    temp_q = encode_text(temporal_terms) if temporal_terms else None

    app_scores = {
        a.id: (cosine(app_q, encode_text(a.appearance_caption)) if app_q is not None else 0.0)
        for a in agents
    }
    filter_empty = False
    if app_q is not None:
        candidates = [a for a in agents if app_scores[a.id] >= weights.tau_app]
        if not candidates:
            candidates = agents
            filter_empty = True
    else:
        candidates = agents

    scored = []
    ego = scene.ego
    for a in candidates:
        motion_score = 0.0
        location_score = 0.0
        if temp_q is not None:
            vecs = _temporal_vectors(a, ego, models, req.time_window)
            if vecs is not None:
                motion_score = cosine(temp_q, vecs[0])
                location_score = cosine(temp_q, vecs[1])
        total = (
            app_scores[a.id]
            + weights.w_motion * motion_score
            + weights.w_location * location_score
        )
        scored.append(
            AgentScore(
                agent_id=a.id,
                total=total,
                appearance=app_scores[a.id],
                motion=motion_score,
                location=location_score,
            )
        )
    scored.sort(key=lambda s: (-s.total, s.agent_id))
    return QueryResult(
        ranked=tuple(scored),
        chosen=scored[0].agent_id,
        appearance_terms=appearance_terms,
        temporal_terms=temporal_terms,
        appearance_filter_empty=filter_empty,
    )
