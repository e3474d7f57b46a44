"""Structured edit commands and their line-oriented grammar.

Grammar (case-insensitive keys, floats in decimal notation):

    <task> [target="..."] [anchor="..."] [group=<id>] [asset="..."]
           [action=<id>] [speed=<f>] [start_time=<f>]
           [offset=<behind|ahead|left|right>:<f>] [at=<x>,<y>] [to=<x>,<y>]
           [scale=<f>] [rotation=<deg>] [direction=<deg>] [radius=<f>]
           [distance=<f>]

``parse_command`` and ``format_command`` round-trip: formatting a parsed
command and parsing it again yields an equal EditCommand.  Angle values
(rotation, direction) are quantized to 1e-6 degrees at the grammar boundary
so the degree<->radian conversion is an exact fixed point.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field, replace

from ..errors import CommandConstraintError, CommandSyntaxError


class TaskKind(enum.Enum):
    ADD = "add"
    REMOVE = "remove"
    REPLACE = "replace"
    MODIFY = "modify"


class ActionKind(enum.Enum):
    GO_STRAIGHT = "go_straight"
    TURN_LEFT = "turn_left"
    TURN_RIGHT = "turn_right"
    STOP = "stop"
    ACCELERATE = "accelerate"
    DECELERATE = "decelerate"
    FOLLOW = "follow"
    STATIC_PLACE = "static_place"
    REVERSE = "reverse"


class GroupSelector(enum.Enum):
    ALL_MOVING_VEHICLES = "all_moving_vehicles"
    ALL_MOVING_PEDESTRIANS = "all_moving_pedestrians"
    ALL_STATIC_OBJECTS = "all_static_objects"


@dataclass(frozen=True)
class AssetParams:
    query: str
    scale: float = 1.0
    rotation: float = 0.0  # radians, applied on top of the anchor heading
    offset: tuple[float, float] = (0.0, 0.0)  # (longitudinal, lateral) meters


@dataclass(frozen=True)
class ActionParams:
    action: ActionKind
    speed: float | None = None
    start_time: float | None = None
    relative_distance: float | None = None
    start_position: tuple[float, float] | None = None
    end_position: tuple[float, float] | None = None
    direction: float | None = None  # radians
    radius: float | None = None  # turn radius, meters


@dataclass(frozen=True)
class EditCommand:
    task: TaskKind
    target_query: str | None = None
    anchor_query: str | None = None
    group: GroupSelector | None = None
    asset: AssetParams | None = None
    action: ActionParams | None = None

    def __post_init__(self):
        if self.task is TaskKind.ADD:
            if self.asset is None:
                raise CommandConstraintError("add requires asset parameters")
            if self.anchor_query is None and (
                self.action is None or self.action.start_position is None
            ):
                raise CommandConstraintError(
                    "add requires an anchor query or an explicit at=<x>,<y>"
                )
        elif self.task is TaskKind.REMOVE:
            if self.target_query is None and self.group is None:
                raise CommandConstraintError(
                    "remove requires a target query or a group selector"
                )
        elif self.task is TaskKind.MODIFY:
            if self.target_query is None or self.action is None:
                raise CommandConstraintError(
                    "modify requires a target query and an action"
                )
        elif self.task is TaskKind.REPLACE:
            if self.target_query is None or self.asset is None:
                raise CommandConstraintError(
                    "replace requires a target query and asset parameters"
                )


_FLOAT_RE = re.compile(r"-?\d+(\.\d+)?$")
_OFFSET_DIRECTIONS = {
    "behind": (-1.0, 0.0),
    "ahead": (1.0, 0.0),
    "left": (0.0, 1.0),
    "right": (0.0, -1.0),
}

_KNOWN_KEYS = (
    "target",
    "anchor",
    "group",
    "asset",
    "action",
    "speed",
    "start_time",
    "offset",
    "at",
    "to",
    "scale",
    "rotation",
    "direction",
    "radius",
    "distance",
)


def _angle_radians(deg: float) -> float:
    return math.radians(round(deg, 6))


def _angle_degrees(rad: float) -> float:
    return round(math.degrees(rad), 6)


def _parse_float(text: str, key: str, pos: int) -> float:
    if not _FLOAT_RE.match(text):
        raise CommandSyntaxError(
            f"{key}: expected a decimal number, got {text!r}", pos
        )
    return float(text)


def _parse_point(text: str, key: str, pos: int) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise CommandSyntaxError(f"{key}: expected <x>,<y>, got {text!r}", pos)
    return (
        _parse_float(parts[0], key, pos),
        _parse_float(parts[1], key, pos),
    )


def _tokenize(text: str) -> list[tuple[str, int]]:
    """Split into (token, start_position) respecting double quotes."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        while i < n and text[i].isspace():
            i += 1
        if i >= n:
            break
        start = i
        buf = []
        in_quotes = False
        while i < n and (in_quotes or not text[i].isspace()):
            ch = text[i]
            if ch == '"':
                in_quotes = not in_quotes
            buf.append(ch)
            i += 1
        if in_quotes:
            raise CommandSyntaxError("unterminated quote", start)
        tokens.append(("".join(buf), start))
    return tokens


def _unquote(value: str) -> str:
    if len(value) >= 2 and value[0] == '"' and value[-1] == '"':
        return value[1:-1]
    return value


def parse_command(text: str) -> EditCommand:
    """Parse one command line into an EditCommand.

    Raises CommandSyntaxError (with the offending position) on bad syntax and
    CommandConstraintError when the parsed command violates a task invariant.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise CommandSyntaxError("empty command", 0)
    task_text, task_pos = tokens[0]
    try:
        task = TaskKind(task_text.lower())
    except ValueError:
        raise CommandSyntaxError(
            f"unknown task {task_text!r} (expected add/remove/replace/modify)",
            task_pos,
        )

    fields: dict[str, tuple[str, int]] = {}
    for tok, pos in tokens[1:]:
        if "=" not in tok:
            raise CommandSyntaxError(f"expected key=value, got {tok!r}", pos)
        key, _, value = tok.partition("=")
        key = key.lower()
        if key not in _KNOWN_KEYS:
            raise CommandSyntaxError(f"unknown key {key!r}", pos)
        if key in fields:
            raise CommandSyntaxError(f"duplicate key {key!r}", pos)
        fields[key] = (value, pos)

    def take(key: str) -> tuple[str, int] | None:
        return fields.pop(key, None)

    target = take("target")
    anchor = take("anchor")
    group_field = take("group")
    group = None
    if group_field:
        value, pos = group_field
        try:
            group = GroupSelector(value.lower())
        except ValueError:
            raise CommandSyntaxError(f"unknown group {value!r}", pos)

    asset = None
    asset_field = take("asset")
    scale = take("scale")
    rotation = take("rotation")
    offset_field = take("offset")
    if asset_field:
        offset = (0.0, 0.0)
        if offset_field:
            value, pos = offset_field
            direction, _, amount = value.partition(":")
            if direction.lower() not in _OFFSET_DIRECTIONS:
                raise CommandSyntaxError(
                    f"offset direction must be one of "
                    f"{sorted(_OFFSET_DIRECTIONS)}, got {direction!r}",
                    pos,
                )
            magnitude = _parse_float(amount, "offset", pos)
            ux, uy = _OFFSET_DIRECTIONS[direction.lower()]
            offset = (ux * magnitude, uy * magnitude)
        asset = AssetParams(
            query=_unquote(asset_field[0]),
            scale=_parse_float(scale[0], "scale", scale[1]) if scale else 1.0,
            rotation=_angle_radians(
                _parse_float(rotation[0], "rotation", rotation[1])
            )
            if rotation
            else 0.0,
            offset=offset,
        )
    elif offset_field or scale or rotation:
        stray = offset_field or scale or rotation
        raise CommandSyntaxError(
            "offset/scale/rotation require an asset=...", stray[1]
        )

    action = None
    action_field = take("action")
    speed = take("speed")
    start_time = take("start_time")
    distance = take("distance")
    at_field = take("at")
    to_field = take("to")
    direction_field = take("direction")
    radius = take("radius")
    if action_field:
        value, pos = action_field
        try:
            action_kind = ActionKind(value.lower())
        except ValueError:
            raise CommandSyntaxError(f"unknown action {value!r}", pos)
        action = ActionParams(
            action=action_kind,
            speed=_parse_float(speed[0], "speed", speed[1]) if speed else None,
            start_time=_parse_float(start_time[0], "start_time", start_time[1])
            if start_time
            else None,
            relative_distance=_parse_float(distance[0], "distance", distance[1])
            if distance
            else None,
            start_position=_parse_point(at_field[0], "at", at_field[1])
            if at_field
            else None,
            end_position=_parse_point(to_field[0], "to", to_field[1])
            if to_field
            else None,
            direction=_angle_radians(
                _parse_float(direction_field[0], "direction", direction_field[1])
            )
            if direction_field
            else None,
            radius=_parse_float(radius[0], "radius", radius[1])
            if radius
            else None,
        )
    elif at_field and task is TaskKind.ADD:
        # Explicit placement without an action: implied static placement.
        action = ActionParams(
            action=ActionKind.STATIC_PLACE,
            start_position=_parse_point(at_field[0], "at", at_field[1]),
            start_time=_parse_float(start_time[0], "start_time", start_time[1])
            if start_time
            else None,
        )
    elif speed or start_time or distance or at_field or to_field or direction_field or radius:
        stray = (
            speed or start_time or distance or at_field or to_field
            or direction_field or radius
        )
        raise CommandSyntaxError(
            "speed/start_time/distance/at/to/direction/radius require an "
            "action=...",
            stray[1],
        )

    return EditCommand(
        task=task,
        target_query=_unquote(target[0]) if target else None,
        anchor_query=_unquote(anchor[0]) if anchor else None,
        group=group,
        asset=asset,
        action=action,
    )


def _fmt_float(x: float) -> str:
    # %.17g keeps the exact double; strip exponent forms the grammar rejects.
    s = f"{x:.17g}"
    if "e" in s or "E" in s:
        s = f"{x:.17f}".rstrip("0").rstrip(".")
        if s in ("", "-"):
            s = "0"
    return s


def format_command(cmd: EditCommand) -> str:
    """Render a command back into the grammar (inverse of parse_command)."""
    parts = [cmd.task.value]
    if cmd.target_query is not None:
        parts.append(f'target="{cmd.target_query}"')
    if cmd.anchor_query is not None:
        parts.append(f'anchor="{cmd.anchor_query}"')
    if cmd.group is not None:
        parts.append(f"group={cmd.group.value}")
    if cmd.asset is not None:
        parts.append(f'asset="{cmd.asset.query}"')
        lon, lat = cmd.asset.offset
        if lon or lat:
            if lat == 0.0:
                direction, mag = ("ahead", lon) if lon > 0 else ("behind", -lon)
            elif lon == 0.0:
                direction, mag = ("left", lat) if lat > 0 else ("right", -lat)
            else:
                raise CommandConstraintError(
                    "grammar offsets are axis-aligned; got a diagonal offset"
                )
            parts.append(f"offset={direction}:{_fmt_float(mag)}")
        if cmd.asset.scale != 1.0:
            parts.append(f"scale={_fmt_float(cmd.asset.scale)}")
        if cmd.asset.rotation != 0.0:
            parts.append(f"rotation={_fmt_float(_angle_degrees(cmd.asset.rotation))}")
    if cmd.action is not None:
        a = cmd.action
        implied_static = (
            cmd.task is TaskKind.ADD
            and a.action is ActionKind.STATIC_PLACE
            and a.start_position is not None
            and a.speed is None
            and a.relative_distance is None
            and a.end_position is None
            and a.direction is None
            and a.radius is None
        )
        if not implied_static:
            parts.append(f"action={a.action.value}")
        if a.speed is not None:
            parts.append(f"speed={_fmt_float(a.speed)}")
        if a.start_time is not None:
            parts.append(f"start_time={_fmt_float(a.start_time)}")
        if a.relative_distance is not None:
            parts.append(f"distance={_fmt_float(a.relative_distance)}")
        if a.start_position is not None:
            x, y = a.start_position
            parts.append(f"at={_fmt_float(x)},{_fmt_float(y)}")
        if a.end_position is not None:
            x, y = a.end_position
            parts.append(f"to={_fmt_float(x)},{_fmt_float(y)}")
        if a.direction is not None:
            parts.append(f"direction={_fmt_float(_angle_degrees(a.direction))}")
        if a.radius is not None:
            parts.append(f"radius={_fmt_float(a.radius)}")
    return " ".join(parts)
