"""Captioned asset bank and similarity-based retrieval."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from ..errors import AssetNotFoundError, ScenarioFormatError
from ..scene_model.geometry import Pose2
from ..scene_model.scenario import AgentKind, TrackPoint
from ..temporal_alignment.text_encoder import cosine, encode_text


@dataclass(frozen=True)
class AssetRecord:
    id: str
    kind: AgentKind
    length: float
    width: float
    height: float
    caption: str
    # Relative track for dynamic assets: rows of (t, x, y, heading, speed)
    # in the asset's placement frame (origin = placement pose).
    motion_template: tuple[tuple[float, float, float, float, float], ...] = ()

    def __post_init__(self):
        if not (self.length > 0 and self.width > 0 and self.height > 0):
            raise ScenarioFormatError(f"asset {self.id}: dims must be positive")

    def template_points(
        self, placement: Pose2, dt: float, horizon: int, start_time: float
    ) -> list[TrackPoint]:
        """Compose the relative template into world coordinates."""
        points = []
        start_index = int(round(start_time / dt))
        rows = list(self.motion_template)
        for i in range(start_index, horizon):
            k = i - start_index
            row = rows[min(k, len(rows) - 1)]
            _, x, y, heading, speed = row
            wx, wy = placement.transform_point(x, y)
            points.append(
                TrackPoint(
                    t=round(i * dt, 9),
                    pose=Pose2(wx, wy, placement.heading + heading),
                    speed=speed if k < len(rows) else 0.0,
                    valid=True,
                )
            )
        return points


def retrieve_asset(
    bank: list[AssetRecord],
    query: str,
    kind_filter: AgentKind | None = None,
) -> AssetRecord:
    """Best caption match by cosine similarity; ties break on smallest id."""
    if not bank:
        raise AssetNotFoundError("asset bank is empty")
    candidates = [
        a for a in bank if kind_filter is None or a.kind is kind_filter
    ]
    if not candidates:
        raise AssetNotFoundError(
            f"no assets of kind {kind_filter.value!r} in the bank"
        )
    q = encode_text(query)
    scored = [(cosine(q, encode_text(a.caption)), a) for a in candidates]
    best_score = max(s for s, _ in scored)
    tied = [a for s, a in scored if abs(s - best_score) < 1e-12]
    return min(tied, key=lambda a: a.id)


def _walk_template(speed: float, duration: float, dt: float):
    """Straight relative walk along +x, used by shipped pedestrian assets."""
    n = int(round(duration / dt)) + 1
    return tuple(
        (round(i * dt, 9), speed * i * dt, 0.0, 0.0, speed) for i in range(n)
    )


def default_asset_bank() -> list[AssetRecord]:
    walk = _walk_template(1.4, 8.0, 0.1)
    return [
        AssetRecord("veh-sedan-black", AgentKind.VEHICLE, 4.6, 1.9, 1.5,
                    "black sedan"),
        AssetRecord("veh-sedan-white", AgentKind.VEHICLE, 4.6, 1.9, 1.5,
                    "white sedan"),
        AssetRecord("veh-suv-gray", AgentKind.VEHICLE, 4.8, 2.0, 1.8,
                    "gray suv"),
        AssetRecord("veh-truck-red", AgentKind.VEHICLE, 8.5, 2.5, 3.2,
                    "red truck"),
        AssetRecord("veh-bus-city", AgentKind.VEHICLE, 12.0, 2.6, 3.1,
                    "city bus"),
        AssetRecord("veh-bulldozer", AgentKind.VEHICLE, 5.5, 2.8, 3.0,
                    "yellow bulldozer construction"),
        AssetRecord("cyc-rider", AgentKind.CYCLIST, 1.8, 0.7, 1.7,
                    "cyclist riding a bicycle"),
        AssetRecord("obj-cone", AgentKind.STATIC_OBJECT, 0.4, 0.4, 0.7,
                    "orange traffic cone"),
        AssetRecord("obj-barrier", AgentKind.STATIC_OBJECT, 2.0, 0.6, 1.1,
                    "concrete barrier"),
        AssetRecord("obj-sign", AgentKind.STATIC_OBJECT, 0.5, 0.5, 2.2,
                    "traffic sign pole"),
        AssetRecord("ped-backpack", AgentKind.PEDESTRIAN, 0.5, 0.5, 1.8,
                    "pedestrian walking with a red backpack",
                    motion_template=walk),
        AssetRecord("ped-worker", AgentKind.PEDESTRIAN, 0.5, 0.5, 1.8,
                    "construction worker in a yellow vest",
                    motion_template=walk),
        AssetRecord("ped-standing", AgentKind.PEDESTRIAN, 0.5, 0.5, 1.8,
                    "pedestrian standing"),
    ]


def save_asset_bank(bank: list[AssetRecord], path: str | Path) -> None:
    doc = [
        {
            "id": a.id,
            "kind": a.kind.value,
            "dims": [a.length, a.width, a.height],
            "caption": a.caption,
            "motion_template": [list(row) for row in a.motion_template],
        }
        for a in bank
    ]
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def load_asset_bank(path: str | Path) -> list[AssetRecord]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return [
            AssetRecord(
                id=str(e["id"]),
                kind=AgentKind(e["kind"]),
                length=float(e["dims"][0]),
                width=float(e["dims"][1]),
                height=float(e["dims"][2]),
                caption=str(e["caption"]),
                motion_template=tuple(
                    tuple(float(v) for v in row)
                    for row in e.get("motion_template", [])
                ),
            )
            for e in doc
        ]
    except (json.JSONDecodeError, KeyError, IndexError, ValueError, TypeError) as exc:
        raise ScenarioFormatError(f"malformed asset bank: {exc}") from exc
