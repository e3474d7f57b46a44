"""Trajectory embedding: affine projector plus codebook aggregation.

The projector maps the ten kinematic features to the shared text-embedding
space; aggregation turns an embedding into a convex combination of codebook
prototypes (softmax over cosine similarities).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DegenerateEmbeddingError, InvalidInputError, ScenarioFormatError
from .codebook import Codebook
from .features import FEATURE_DIM, KinematicFeatures
from .text_encoder import EMBED_DIM

DEFAULT_TEMPERATURE = 0.1


@dataclass(frozen=True)
class Projector:
    """Affine map feature-space -> embedding-space: z = normalize(W f + b)."""

    weights: np.ndarray  # (d, m)
    bias: np.ndarray  # (d,)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        b = np.asarray(self.bias, dtype=np.float64)
        if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
            raise InvalidInputError("projector weights/bias shapes disagree")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
            raise InvalidInputError("projector parameters must be finite")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)

    @staticmethod
    def seeded(seed: int, dim: int = EMBED_DIM, m: int = FEATURE_DIM) -> "Projector":
        rng = np.random.default_rng(seed)
        return Projector(
            weights=rng.normal(0.0, 0.1, size=(dim, m)),
            bias=rng.normal(0.0, 0.1, size=dim),
        )


@dataclass(frozen=True)
class TemporalFeature:
    """Convex-combination features over the motion and location codebooks."""

    f_motion: np.ndarray
    f_location: np.ndarray
    motion_weights: np.ndarray
    location_weights: np.ndarray


def embed_trajectory(
    feat: KinematicFeatures | np.ndarray, proj: Projector
) -> np.ndarray:
    """z = normalize(W f + b); raises if the affine output is (near) zero."""
    f = feat.as_vector() if isinstance(feat, KinematicFeatures) else np.asarray(feat)
    if not np.all(np.isfinite(f)):
        raise InvalidInputError("non-finite features")
    u = proj.weights @ f + proj.bias
    norm = float(np.linalg.norm(u))
    if norm < 1e-12:
        raise DegenerateEmbeddingError("projector output collapsed to zero")
    return u / norm


def softmax_weights(similarities: np.ndarray, temperature: float) -> np.ndarray:
    if temperature <= 0:
        raise InvalidInputError("temperature must be > 0")
    s = similarities / temperature
    s = s - np.max(s)
    e = np.exp(s)
    return e / np.sum(e)


def aggregate(
    z: np.ndarray, book: Codebook, temperature: float = DEFAULT_TEMPERATURE
) -> tuple[np.ndarray, np.ndarray]:
    """Convex combination of prototypes weighted by softmaxed cosine to z.

    Returns (feature, weights); weights lie on the simplex and the feature is
    exactly ``weights @ prototype_matrix``.
    """
    if len(book) == 0:
        raise InvalidInputError("empty codebook")
    protos = book.matrix()
    zn = z / max(float(np.linalg.norm(z)), 1e-12)
    sims = protos @ zn  # prototypes are unit vectors
    weights = softmax_weights(sims, temperature)
    feature = weights @ protos
    return feature, weights


def temporal_feature(
    z: np.ndarray,
    motion_book: Codebook,
    location_book: Codebook,
    temperature: float = DEFAULT_TEMPERATURE,
) -> TemporalFeature:
    f_m, w_m = aggregate(z, motion_book, temperature)
    f_l, w_l = aggregate(z, location_book, temperature)
    return TemporalFeature(
        f_motion=f_m, f_location=f_l, motion_weights=w_m, location_weights=w_l
    )


def save_projector(proj: Projector, path: str | Path, config: dict | None = None):
    """Serialize with 17 significant digits plus the training config used."""
    doc = {
        "weights": [[float(f"{v:.17g}") for v in row] for row in proj.weights],
        "bias": [float(f"{v:.17g}") for v in proj.bias],
        "config": config or {},
    }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def load_projector(path: str | Path) -> tuple[Projector, dict]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        proj = Projector(
            weights=np.array(doc["weights"], dtype=np.float64),
            bias=np.array(doc["bias"], dtype=np.float64),
        )
        return proj, dict(doc.get("config", {}))
    except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
        raise ScenarioFormatError(f"malformed projector file: {exc}") from exc
