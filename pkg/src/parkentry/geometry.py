"""
Planar primitives used by every collision check.

Boundary contact counts both as intersection and as containment. Predicates
are evaluated in plain floating point; containment allows an absolute slack of
``EPS`` so that frames constructed flush against a slot edge count as inside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

EPS = 1e-9


@dataclass(frozen=True, slots=True)
class Point2:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y

    def __add__(self, other: Point2) -> Point2:
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point2) -> Point2:
        return Point2(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> Point2:
        return Point2(self.x * k, self.y * k)

    def dot(self, other: Point2) -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: Point2) -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def rotated(self, angle: float) -> Point2:
        c, s = math.cos(angle), math.sin(angle)
        return Point2(c * self.x - s * self.y, s * self.x + c * self.y)


@dataclass(frozen=True, slots=True)
class Segment2:
    a: Point2
    b: Point2

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError("degenerate segment")

    def length(self) -> float:
        return (self.b - self.a).norm()


@dataclass(frozen=True, slots=True)
class OrientedRect:
    """Rectangle given by four corners in counterclockwise order."""

    corners: Tuple[Point2, Point2, Point2, Point2]

    def __post_init__(self) -> None:
        if len(self.corners) != 4:
            raise ValueError("rectangle needs exactly four corners")
        c = self.corners
        edges = [c[(i + 1) % 4] - c[i] for i in range(4)]
        for i in range(4):
            e, f = edges[i], edges[(i + 1) % 4]
            if e.norm() <= EPS:
                raise ValueError("degenerate rectangle edge")
            if abs(e.dot(f)) > EPS * max(1.0, e.norm() * f.norm()):
                raise ValueError("rectangle edges are not orthogonal")
            if e.cross(f) <= 0.0:
                raise ValueError("rectangle corners are not counterclockwise")
        if abs(edges[0].norm() - edges[2].norm()) > EPS or abs(edges[1].norm() - edges[3].norm()) > EPS:
            raise ValueError("opposite rectangle sides differ in length")

    @classmethod
    def from_pose(cls, x: float, y: float, theta: float,
                  front: float, rear: float, half_width: float) -> OrientedRect:
        """Rectangle spanning ``[-rear, front] x [-half_width, half_width]`` in a posed frame."""
        body = (
            Point2(-rear, -half_width),
            Point2(front, -half_width),
            Point2(front, half_width),
            Point2(-rear, half_width),
        )
        origin = Point2(x, y)
        return cls(tuple(origin + p.rotated(theta) for p in body))

    def edges(self) -> list[Segment2]:
        c = self.corners
        return [Segment2(c[i], c[(i + 1) % 4]) for i in range(4)]

    def side_lengths(self) -> tuple[float, float]:
        c = self.corners
        return (c[1] - c[0]).norm(), (c[2] - c[1]).norm()

    def contains_point(self, p: Point2, eps: float = EPS) -> bool:
        # inside every edge's left half-plane, measured as a distance
        c = self.corners
        for i in range(4):
            a, b = c[i], c[(i + 1) % 4]
            edge = b - a
            if edge.cross(p - a) / edge.norm() < -eps:
                return False
        return True


def _orient(a: Point2, b: Point2, c: Point2) -> float:
    return (b - a).cross(c - a)


def _on_segment(a: Point2, b: Point2, p: Point2) -> bool:
    # assumes p collinear with a-b
    return (min(a.x, b.x) <= p.x <= max(a.x, b.x)
            and min(a.y, b.y) <= p.y <= max(a.y, b.y))


def segments_intersect(s1: Segment2, s2: Segment2) -> bool:
    """True when the closed segments share a point (touching and overlap included)."""
    p, q, r, t = s1.a, s1.b, s2.a, s2.b
    d1 = _orient(r, t, p)
    d2 = _orient(r, t, q)
    d3 = _orient(p, q, r)
    d4 = _orient(p, q, t)
    if ((d1 > 0 > d2) or (d1 < 0 < d2)) and ((d3 > 0 > d4) or (d3 < 0 < d4)):
        return True
    if d1 == 0 and _on_segment(r, t, p):
        return True
    if d2 == 0 and _on_segment(r, t, q):
        return True
    if d3 == 0 and _on_segment(p, q, r):
        return True
    if d4 == 0 and _on_segment(p, q, t):
        return True
    return False


def rect_intersects_segment(r: OrientedRect, s: Segment2) -> bool:
    """True when the segment meets the rectangle's closed interior or boundary."""
    if r.contains_point(s.a, eps=0.0) or r.contains_point(s.b, eps=0.0):
        return True
    return any(segments_intersect(e, s) for e in r.edges())


def rect_contains_rect(outer: OrientedRect, inner: OrientedRect, eps: float = EPS) -> bool:
    # convexity: all four corners inside is sufficient
    return all(outer.contains_point(p, eps=eps) for p in inner.corners)


def rect_intersects_rect(a: OrientedRect, b: OrientedRect) -> bool:
    """Closed-set overlap of two rectangles."""
    if any(a.contains_point(p, eps=0.0) for p in b.corners):
        return True
    if any(b.contains_point(p, eps=0.0) for p in a.corners):
        return True
    return any(segments_intersect(e, f) for e in a.edges() for f in b.edges())


def shrink_rect(r: OrientedRect, margin: float) -> OrientedRect:
    """Move every side of ``r`` inward by ``margin``."""
    c = r.corners
    u = c[1] - c[0]
    v = c[3] - c[0]
    lu, lv = u.norm(), v.norm()
    if 2 * margin >= min(lu, lv):
        raise ValueError("margin too large for rectangle")
    du = u.scaled(margin / lu)
    dv = v.scaled(margin / lv)
    return OrientedRect((
        c[0] + du + dv,
        c[1] - du + dv,
        c[2] - du - dv,
        c[3] + du - dv,
    ))


def wrap_angle(angle: float) -> float:
    """Map an angle into (-pi, pi]."""
    a = math.fmod(angle + math.pi, 2.0 * math.pi)
    if a <= 0.0:
        a += 2.0 * math.pi
    return a - math.pi


def as_points(coords: Sequence[Sequence[float]]) -> list[Point2]:
    return [Point2(float(x), float(y)) for x, y in coords]
