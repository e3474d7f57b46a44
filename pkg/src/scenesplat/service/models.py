"""Model bundle: codebooks plus trained projector pairs, with a disk cache.

Training is deterministic, so the cache key hashes everything that shapes
the result (codebook descriptions, corpus spec, training config); a cache
hit is bit-identical to retraining.
"""

from __future__ import annotations

import hashlib
import json
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..edit_engine.assets import AssetRecord, default_asset_bank
from ..errors import ScenarioFormatError
from ..eval_harness.generate import (
    default_acceptance_spec,
    generate_corpus,
    training_examples,
)
from ..object_query.query import QueryModels
from ..temporal_alignment.codebook import (
    Codebook,
    default_location_codebook,
    default_pedestrian_motion_codebook,
    default_vehicle_motion_codebook,
)
from ..temporal_alignment.projector import Projector
from ..temporal_alignment.training import (
    ProjectorPair,
    TrainingConfig,
    train_projectors,
)


@dataclass(frozen=True)
class ModelBundle:
    motion_books: dict[str, Codebook]
    location_book: Codebook
    projectors: dict[str, ProjectorPair]
    asset_bank: list[AssetRecord]
    temperature: float = 0.1

    def query_models(self) -> QueryModels:
        return QueryModels(
            projectors=self.projectors,
            motion_books=self.motion_books,
            location_book=self.location_book,
            temperature=self.temperature,
        )


def _proj_doc(proj: Projector) -> dict:
    return {
        "weights": [[float(f"{v:.17g}") for v in row] for row in proj.weights],
        "bias": [float(f"{v:.17g}") for v in proj.bias],
    }


def _proj_from(doc: dict) -> Projector:
    return Projector(
        weights=np.array(doc["weights"], dtype=np.float64),
        bias=np.array(doc["bias"], dtype=np.float64),
    )


def save_bundle_projectors(
    projectors: dict[str, ProjectorPair], path: Path, config: dict
) -> None:
    doc = {
        "config": config,
        "projectors": {
            family: {
                "motion": _proj_doc(pair.motion),
                "location": _proj_doc(pair.location),
            }
            for family, pair in sorted(projectors.items())
        },
    }
    path.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def load_bundle_projectors(path: Path) -> dict[str, ProjectorPair]:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
        return {
            family: ProjectorPair(
                motion=_proj_from(entry["motion"]),
                location=_proj_from(entry["location"]),
            )
            for family, entry in doc["projectors"].items()
        }
    except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
        raise ScenarioFormatError(f"malformed projector bundle: {exc}") from exc


def _cache_key(config: TrainingConfig, books) -> str:
    payload = {
        "training": [
            config.learning_rate,
            config.epochs,
            config.batch_size,
            config.lambda_align,
            config.lambda_commit,
            config.seed,
        ],
        "books": [
            [(p.name, p.description) for p in book.prototypes] for book in books
        ],
    }
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True).encode("utf-8")
    ).hexdigest()[:16]


def default_models(
    training: TrainingConfig = TrainingConfig(),
    temperature: float = 0.1,
    cache_dir: str | Path | None = None,
) -> ModelBundle:
    """Train (or load cached) projectors over the built-in seeded corpus."""
    motion_books = {
        "vehicle": default_vehicle_motion_codebook(),
        "pedestrian": default_pedestrian_motion_codebook(),
    }
    location_book = default_location_codebook()
    key = _cache_key(
        training,
        [motion_books["vehicle"], motion_books["pedestrian"], location_book],
    )
    cache_root = Path(cache_dir) if cache_dir else Path(tempfile.gettempdir())
    cache_path = cache_root / f"scenesplat-models-{key}.json"

    projectors = None
    if cache_path.exists():
        try:
            projectors = load_bundle_projectors(cache_path)
        except ScenarioFormatError:
            projectors = None
    if projectors is None:
        corpus = generate_corpus(default_acceptance_spec(seed=training.seed))
        result = train_projectors(
            training_examples(corpus),
            motion_books,
            location_book,
            training,
        )
        projectors = result.projectors
        try:
            save_bundle_projectors(
                projectors,
                cache_path,
                {"seed": training.seed, "epochs": training.epochs,
                 "learning_rate": training.learning_rate},
            )
        except OSError:
            pass  # cache is best-effort
    return ModelBundle(
        motion_books=motion_books,
        location_book=location_book,
        projectors=projectors,
        asset_bank=default_asset_bank(),
        temperature=temperature,
    )
