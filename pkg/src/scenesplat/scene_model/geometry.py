"""Ground-plane geometric primitives: poses, oriented boxes, polygons.

All headings are CCW-positive radians with 0 along +x, normalized to
(-pi, pi].  The +y direction is "left" of a heading-0 agent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import InvalidInputError

TWO_PI = 2.0 * math.pi

# Point-on-edge tolerance for polygon boundary tests (meters).
_EDGE_EPS = 1e-9


def normalize_heading(heading: float) -> float:
    """Wrap a heading into (-pi, pi].  Idempotent."""
    h = math.remainder(heading, TWO_PI)
    if h <= -math.pi:
        h += TWO_PI
    return h


def wrap_angle_diff(a: float, b: float) -> float:
    """Shortest signed arc from heading ``b`` to heading ``a``."""
    return normalize_heading(a - b)


@dataclass(frozen=True)
class Pose2:
    """2D pose: position in meters, heading in radians (CCW, 0 = +x)."""

    x: float
    y: float
    heading: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "heading", normalize_heading(self.heading))

    def transform_point(self, px: float, py: float) -> tuple[float, float]:
        """Map a point from this pose's local frame to the world frame."""
        c, s = math.cos(self.heading), math.sin(self.heading)
        return (self.x + c * px - s * py, self.y + s * px + c * py)

    def inverse_transform_point(self, wx: float, wy: float) -> tuple[float, float]:
        """Map a world point into this pose's local frame."""
        c, s = math.cos(self.heading), math.sin(self.heading)
        dx, dy = wx - self.x, wy - self.y
        return (c * dx + s * dy, -s * dx + c * dy)

    def compose(self, local: "Pose2") -> "Pose2":
        """Compose: interpret ``local`` in this pose's frame."""
        x, y = self.transform_point(local.x, local.y)
        return Pose2(x, y, self.heading + local.heading)


def transform_footprint(
    length: float, width: float, pose: Pose2
) -> list[tuple[float, float]]:
    """Place a canonical length x width box (centered at origin) at ``pose``.

    Returns the 4 corners in counter-clockwise order, starting front-left.
    """
    if not (length > 0 and width > 0):
        raise InvalidInputError(f"box dims must be positive, got {length}x{width}")
    if not all(math.isfinite(v) for v in (pose.x, pose.y, pose.heading)):
        raise InvalidInputError("pose components must be finite")
    hl, hw = 0.5 * length, 0.5 * width
    canonical = ((hl, hw), (-hl, hw), (-hl, -hw), (hl, -hw))
    return [pose.transform_point(px, py) for px, py in canonical]


def footprint_polygon(agent_length: float, agent_width: float, pose: Pose2):
    """Alias kept for call sites that read better with noun phrasing."""
    return transform_footprint(agent_length, agent_width, pose)


def _project(corners, ax: float, ay: float) -> tuple[float, float]:
    lo = hi = corners[0][0] * ax + corners[0][1] * ay
    for cx, cy in corners[1:]:
        d = cx * ax + cy * ay
        if d < lo:
            lo = d
        elif d > hi:
            hi = d
    return lo, hi


def boxes_collide(
    a_dims: tuple[float, float],
    a_pose: Pose2,
    b_dims: tuple[float, float],
    b_pose: Pose2,
) -> bool:
    """Separating-axis overlap test for two oriented boxes.

    Touching edges count as a collision (closed-interval overlap).
    """
    ca = transform_footprint(a_dims[0], a_dims[1], a_pose)
    cb = transform_footprint(b_dims[0], b_dims[1], b_pose)
    # Two unique edge normals per rectangle.
    axes = []
    for pose in (a_pose, b_pose):
        c, s = math.cos(pose.heading), math.sin(pose.heading)
        axes.append((c, s))
        axes.append((-s, c))
    for ax, ay in axes:
        lo_a, hi_a = _project(ca, ax, ay)
        lo_b, hi_b = _project(cb, ax, ay)
        if hi_a < lo_b or hi_b < lo_a:
            return False
    return True


def separation_margin(
    a_dims: tuple[float, float],
    a_pose: Pose2,
    b_dims: tuple[float, float],
    b_pose: Pose2,
) -> float:
    """Signed SAT margin: max over axes of (gap), negative when overlapping.

    Positive => separated by that distance along the best axis; negative =>
    every axis shows at least |margin| of projected overlap.
    """
    ca = transform_footprint(a_dims[0], a_dims[1], a_pose)
    cb = transform_footprint(b_dims[0], b_dims[1], b_pose)
    axes = []
    for pose in (a_pose, b_pose):
        c, s = math.cos(pose.heading), math.sin(pose.heading)
        axes.append((c, s))
        axes.append((-s, c))
    best = -math.inf
    for ax, ay in axes:
        lo_a, hi_a = _project(ca, ax, ay)
        lo_b, hi_b = _project(cb, ax, ay)
        gap = max(lo_b - hi_a, lo_a - hi_b)
        if gap > best:
            best = gap
    return best


def _on_segment(px, py, x1, y1, x2, y2) -> bool:
    cross = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
    scale = max(abs(x2 - x1), abs(y2 - y1), 1.0)
    if abs(cross) > _EDGE_EPS * scale:
        return False
    return (
        min(x1, x2) - _EDGE_EPS <= px <= max(x1, x2) + _EDGE_EPS
        and min(y1, y2) - _EDGE_EPS <= py <= max(y1, y2) + _EDGE_EPS
    )


def point_in_polygon(px: float, py: float, polygon) -> bool:
    """Even-odd rule point containment; boundary points count as inside."""
    n = len(polygon)
    inside = False
    for i in range(n):
        x1, y1 = polygon[i]
        x2, y2 = polygon[(i + 1) % n]
        if _on_segment(px, py, x1, y1, x2, y2):
            return True
        if (y1 > py) != (y2 > py):
            x_cross = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if px < x_cross:
                inside = not inside
    return inside


def point_in_drivable(px: float, py: float, map_model) -> bool:
    """True iff the point lies in (or on the boundary of) any drivable polygon."""
    return any(point_in_polygon(px, py, poly) for poly in map_model.drivable_area)


def polyline_length(points) -> float:
    total = 0.0
    for (x1, y1), (x2, y2) in zip(points, points[1:]):
        total += math.hypot(x2 - x1, y2 - y1)
    return total


def segment_intersection(p1, p2, p3, p4):
    """Intersection point of two closed segments, or None."""
    x1, y1 = p1
    x2, y2 = p2
    x3, y3 = p3
    x4, y4 = p4
    d = (x2 - x1) * (y4 - y3) - (y2 - y1) * (x4 - x3)
    if abs(d) < 1e-12:
        return None
    t = ((x3 - x1) * (y4 - y3) - (y3 - y1) * (x4 - x3)) / d
    u = ((x3 - x1) * (y2 - y1) - (y3 - y1) * (x2 - x1)) / d
    if -1e-12 <= t <= 1 + 1e-12 and -1e-12 <= u <= 1 + 1e-12:
        return (x1 + t * (x2 - x1), y1 + t * (y2 - y1))
    return None
