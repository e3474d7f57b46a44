"""Prototype codebooks: named canonical behaviors with text embeddings.

Vehicles and pedestrians keep separate motion codebooks; one location
codebook (eight ego-relative compass sectors) is shared.  Embeddings come
from the deterministic text encoder and are recomputed when a codebook file
is loaded, so files carry only names and descriptions.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ScenarioFormatError, UnknownLabelError
from .text_encoder import encode_text


class CodebookKind(enum.Enum):
    VEHICLE_MOTION = "vehicle_motion"
    PEDESTRIAN_MOTION = "pedestrian_motion"
    LOCATION = "location"


@dataclass(frozen=True)
class Prototype:
    name: str
    description: str
    embedding: np.ndarray


@dataclass(frozen=True)
class Codebook:
    kind: CodebookKind
    prototypes: tuple[Prototype, ...]

    def __post_init__(self):
        names = [p.name for p in self.prototypes]
        if len(set(names)) != len(names):
            raise ScenarioFormatError(f"duplicate prototype names in {self.kind}")

    def __len__(self) -> int:
        return len(self.prototypes)

    @property
    def names(self) -> list[str]:
        return [p.name for p in self.prototypes]

    def index_of(self, name: str) -> int:
        for i, p in enumerate(self.prototypes):
            if p.name == name:
                return i
        raise UnknownLabelError(f"{self.kind.value} has no prototype {name!r}")

    def matrix(self) -> np.ndarray:
        """Prototype embeddings stacked row-wise, shape (K, d)."""
        return np.stack([p.embedding for p in self.prototypes])


def _build(kind: CodebookKind, entries: list[tuple[str, str]]) -> Codebook:
    return Codebook(
        kind=kind,
        prototypes=tuple(
            Prototype(name, desc, encode_text(desc)) for name, desc in entries
        ),
    )


# Descriptions are short on purpose: every token is load-bearing for the
# hashed-embedding geometry, and filler words drag prototype pairs together.
VEHICLE_MOTION_PROTOTYPES = [
    ("stationary", "stationary parked"),
    ("straight", "driving straight"),
    ("turn-left", "turning left leftward"),
    ("turn-right", "turning right rightward"),
    ("u-turn", "u turn"),
    ("stopping", "stopping slowing"),
    ("starting", "starting accelerating"),
]

PEDESTRIAN_MOTION_PROTOTYPES = [
    ("standing", "standing waiting"),
    ("walking-straight", "walking straight"),
    ("crossing-left-to-right", "crossing rightward right"),
    ("crossing-right-to-left", "crossing leftward left"),
    ("stopping", "stopping slowing"),
]

LOCATION_PROTOTYPES = [
    ("front", "front"),
    ("front-left", "front left diagonal sector"),
    ("left", "left"),
    ("rear-left", "rear left diagonal sector"),
    ("behind", "behind"),
    ("rear-right", "rear right diagonal sector"),
    ("right", "right"),
    ("front-right", "front right diagonal sector"),
]

# Sector centers (radians, ego frame, CCW from +x = straight ahead), matching
# LOCATION_PROTOTYPES order.
LOCATION_SECTOR_CENTERS = [
    0.0,
    np.pi / 4,
    np.pi / 2,
    3 * np.pi / 4,
    np.pi,
    -3 * np.pi / 4,
    -np.pi / 2,
    -np.pi / 4,
]


def default_vehicle_motion_codebook() -> Codebook:
    return _build(CodebookKind.VEHICLE_MOTION, VEHICLE_MOTION_PROTOTYPES)


def default_pedestrian_motion_codebook() -> Codebook:
    return _build(CodebookKind.PEDESTRIAN_MOTION, PEDESTRIAN_MOTION_PROTOTYPES)


def default_location_codebook() -> Codebook:
    return _build(CodebookKind.LOCATION, LOCATION_PROTOTYPES)


def save_codebook(book: Codebook, path: str | Path) -> None:
    doc = {
        "kind": book.kind.value,
        "prototypes": [
            {"name": p.name, "description": p.description} for p in book.prototypes
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def load_codebook(path: str | Path) -> Codebook:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        kind = CodebookKind(doc["kind"])
        entries = [(e["name"], e["description"]) for e in doc["prototypes"]]
    except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
        raise ScenarioFormatError(f"malformed codebook file: {exc}") from exc
    return _build(kind, entries)
