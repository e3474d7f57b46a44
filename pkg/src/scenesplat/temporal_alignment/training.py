"""Mini-batch gradient descent for the trajectory projectors.

Each agent family (vehicle-like rigid agents, pedestrians) trains a pair of
projectors: one aligned to its motion codebook, one to the shared location
codebook.  Keeping the two heads separate stops token overlap between the
codebooks (e.g. "left" appearing in both a turn prototype and a sector
prototype) from corrupting either argmax.  Features are standardized
internally for conditioning; the standardization is folded back into the
returned affine projectors, so the public ``embed_trajectory`` contract is
unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DivergenceError, UnknownLabelError
from ..scene_model.scenario import AgentKind
from .codebook import Codebook
from .features import FEATURE_DIM, KinematicFeatures
from .loss import temporal_loss, chain_through_embedding
from .projector import Projector
from .text_encoder import EMBED_DIM

INIT_SCALE = 0.01

FAMILIES = ("vehicle", "pedestrian")


def family_of(kind: AgentKind) -> str:
    return "pedestrian" if kind is AgentKind.PEDESTRIAN else "vehicle"


@dataclass(frozen=True)
class ProjectorPair:
    motion: Projector
    location: Projector


@dataclass(frozen=True)
class TrainingExample:
    features: KinematicFeatures
    motion_label: str
    location_label: str
    kind: AgentKind

    @property
    def family(self) -> str:
        return family_of(self.kind)


@dataclass(frozen=True)
class TrainingConfig:
    learning_rate: float = 0.05
    epochs: int = 300
    batch_size: int = 16
    lambda_align: float = 1.0
    lambda_commit: float = 0.1
    seed: int = 0


@dataclass
class TrainingResult:
    projectors: dict[str, ProjectorPair]
    loss_curves: dict[str, list[float]] = field(default_factory=dict)


def _standardize_stats(features: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mu = features.mean(axis=0)
    sigma = features.std(axis=0)
    sigma = np.where(sigma < 1e-8, 1.0, sigma)
    return mu, sigma


def _fold(w_std: np.ndarray, b_std: np.ndarray, mu, sigma) -> Projector:
    w = w_std / sigma[None, :]
    b = b_std - w @ mu
    return Projector(weights=w, bias=b)


def _unfold(proj: Projector, mu, sigma) -> tuple[np.ndarray, np.ndarray]:
    w_std = proj.weights * sigma[None, :]
    b_std = proj.bias + proj.weights @ mu
    return w_std, b_std


class _Head:
    """One projector head being trained in standardized feature space."""

    def __init__(self, init: Projector, mu, sigma):
        self.init = init
        w, b = _unfold(init, mu, sigma)
        self.w = w
        self.b = b
        self.mu = mu
        self.sigma = sigma
        self.changed = False

    def embed(self, f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        u = self.w @ f + self.b
        n = float(np.linalg.norm(u))
        if n < 1e-12:
            raise DivergenceError("projector output collapsed during training")
        return u / n, u

    def step(self, grad_w, grad_b, scale: float):
        if scale == 0.0 or (not np.any(grad_w) and not np.any(grad_b)):
            return
        self.w = self.w - scale * grad_w
        self.b = self.b - scale * grad_b
        self.changed = True

    def result(self) -> Projector:
        if not self.changed:
            return self.init
        return _fold(self.w, self.b, self.mu, self.sigma)


def _train_family(
    examples: list[TrainingExample],
    motion_book: Codebook,
    location_book: Codebook,
    config: TrainingConfig,
    init: ProjectorPair,
    rng: np.random.Generator,
) -> tuple[ProjectorPair, list[float]]:
    for ex in examples:
        motion_book.index_of(ex.motion_label)
        location_book.index_of(ex.location_label)

    feats = np.stack([ex.features.as_vector() for ex in examples])
    labels = [(ex.motion_label, ex.location_label) for ex in examples]
    mu, sigma = _standardize_stats(feats)
    std_feats = (feats - mu) / sigma

    head_m = _Head(init.motion, mu, sigma)
    head_l = _Head(init.location, mu, sigma)
    n = len(examples)
    curve: list[float] = []

    for _ in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            gwm = np.zeros_like(head_m.w)
            gbm = np.zeros_like(head_m.b)
            gwl = np.zeros_like(head_l.w)
            gbl = np.zeros_like(head_l.b)
            for idx in batch:
                f = std_feats[idx]
                z_m, _ = head_m.embed(f)
                z_l, _ = head_l.embed(f)
                loss, grad_zm, grad_zl = temporal_loss(
                    z_m,
                    z_l,
                    labels[idx],
                    motion_book,
                    location_book,
                    config.lambda_align,
                    config.lambda_commit,
                )
                if not math.isfinite(loss):
                    raise DivergenceError(
                        f"non-finite loss on example {idx} (labels {labels[idx]})"
                    )
                epoch_loss += loss
                dwm, dbm = chain_through_embedding(
                    grad_zm, f, Projector(head_m.w, head_m.b)
                )
                dwl, dbl = chain_through_embedding(
                    grad_zl, f, Projector(head_l.w, head_l.b)
                )
                gwm += dwm
                gbm += dbm
                gwl += dwl
                gbl += dbl
            scale = config.learning_rate / len(batch)
            head_m.step(gwm, gbm, scale)
            head_l.step(gwl, gbl, scale)
        curve.append(epoch_loss / n)

    return ProjectorPair(head_m.result(), head_l.result()), curve


def seeded_pair(seed: int) -> ProjectorPair:
    rng = np.random.default_rng(seed)
    def one():
        return Projector(
            weights=rng.normal(0.0, INIT_SCALE, size=(EMBED_DIM, FEATURE_DIM)),
            bias=rng.normal(0.0, INIT_SCALE, size=EMBED_DIM),
        )
    return ProjectorPair(one(), one())


def train_projectors(
    corpus: list[TrainingExample],
    motion_books: dict[str, Codebook],
    location_book: Codebook,
    config: TrainingConfig = TrainingConfig(),
    init: dict[str, ProjectorPair] | None = None,
) -> TrainingResult:
    """Train motion+location projector pairs per agent family in the corpus.

    ``motion_books`` maps family ("vehicle" / "pedestrian") to its motion
    codebook.  Deterministic for a fixed config seed; with learning rate 0 or
    uniformly zero gradients the input projectors come back unchanged.
    """
    if not corpus:
        raise UnknownLabelError("empty training corpus")
    rng = np.random.default_rng(config.seed)
    result = TrainingResult(projectors={})
    for offset, family in enumerate(FAMILIES):
        examples = [ex for ex in corpus if ex.family == family]
        if not examples:
            continue
        start = (
            init[family]
            if init and family in init
            else seeded_pair(config.seed + offset)
        )
        pair, curve = _train_family(
            examples, motion_books[family], location_book, config, start, rng
        )
        result.projectors[family] = pair
        result.loss_curves[family] = curve
    return result
