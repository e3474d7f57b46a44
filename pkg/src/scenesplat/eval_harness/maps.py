"""Built-in vector-map templates for synthetic scenarios."""

from __future__ import annotations

from ..errors import InvalidInputError
from ..scene_model.scenario import Lane, MapModel

ROAD_HALF_WIDTH = 3.5
ROAD_EXTENT = 70.0
LANE_WIDTH = 3.5
LANE_OFFSET = 1.75


def _ew_road() -> tuple[list[Lane], tuple]:
    lanes = [
        Lane(
            id="east",
            centerline=[(-ROAD_EXTENT, -LANE_OFFSET), (ROAD_EXTENT, -LANE_OFFSET)],
            width=LANE_WIDTH,
        ),
        Lane(
            id="west",
            centerline=[(ROAD_EXTENT, LANE_OFFSET), (-ROAD_EXTENT, LANE_OFFSET)],
            width=LANE_WIDTH,
        ),
    ]
    drivable = (
        (-ROAD_EXTENT, -ROAD_HALF_WIDTH),
        (ROAD_EXTENT, -ROAD_HALF_WIDTH),
        (ROAD_EXTENT, ROAD_HALF_WIDTH),
        (-ROAD_EXTENT, ROAD_HALF_WIDTH),
    )
    return lanes, drivable


def straight_road() -> MapModel:
    lanes, drivable = _ew_road()
    return MapModel(lanes=tuple(lanes), drivable_area=(drivable,))


def four_way_intersection() -> MapModel:
    lanes, ew = _ew_road()
    lanes += [
        Lane(
            id="north",
            centerline=[(LANE_OFFSET, -ROAD_EXTENT), (LANE_OFFSET, ROAD_EXTENT)],
            width=LANE_WIDTH,
        ),
        Lane(
            id="south",
            centerline=[(-LANE_OFFSET, ROAD_EXTENT), (-LANE_OFFSET, -ROAD_EXTENT)],
            width=LANE_WIDTH,
        ),
    ]
    ns = (
        (-ROAD_HALF_WIDTH, -ROAD_EXTENT),
        (ROAD_HALF_WIDTH, -ROAD_EXTENT),
        (ROAD_HALF_WIDTH, ROAD_EXTENT),
        (-ROAD_HALF_WIDTH, ROAD_EXTENT),
    )
    return MapModel(lanes=tuple(lanes), drivable_area=(ew, ns))


CROSSWALK_X = (8.0, 11.0)


def crosswalk_road() -> MapModel:
    lanes, drivable = _ew_road()
    crosswalk = (
        (CROSSWALK_X[0], -ROAD_HALF_WIDTH - 1.5),
        (CROSSWALK_X[1], -ROAD_HALF_WIDTH - 1.5),
        (CROSSWALK_X[1], ROAD_HALF_WIDTH + 1.5),
        (CROSSWALK_X[0], ROAD_HALF_WIDTH + 1.5),
    )
    return MapModel(
        lanes=tuple(lanes), drivable_area=(drivable,), crosswalks=(crosswalk,)
    )


MAP_TEMPLATES = {
    "straight-road": straight_road,
    "4-way-intersection": four_way_intersection,
    "crosswalk-road": crosswalk_road,
}


def map_template(name: str) -> MapModel:
    try:
        return MAP_TEMPLATES[name]()
    except KeyError:
        raise InvalidInputError(
            f"unknown map template {name!r}; choose from {sorted(MAP_TEMPLATES)}"
        )
