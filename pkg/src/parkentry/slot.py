"""
Parallel parking slot geometry and possible entry positions.

Conventions: ``p`` is the slot corner on the entry side and ``delta`` the
direction of the entry side from ``p``. For a right-side slot the interior
lies to the left of the entry direction (``u(delta)`` rotated by +pi/2); a
left-side slot is the mirror image through the entry line. Entry positions of
a right-side slot pin the car's front-right frame corner to ``p``, reverse
with ``phi = +phi_max`` and have headings in ``[delta + pi, delta + 3pi/2]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernel
from .geometry import EPS, OrientedRect, Point2, Segment2, rect_contains_rect, rect_intersects_segment, shrink_rect
from .vehicle import CarDimensions, CarState


class Side(str, enum.Enum):
    RIGHT = "right"
    LEFT = "left"

    @property
    def hand(self) -> int:
        return 1 if self is Side.RIGHT else -1


@dataclass(frozen=True)
class ParkingSlot:
    p: Point2
    delta: float
    W: float
    L: float
    side: Side = Side.RIGHT

    def __post_init__(self) -> None:
        if not (self.W > 0 and self.L > 0):
            raise ValueError("slot width and length must be positive")
        object.__setattr__(self, "side", Side(self.side))

    @classmethod
    def axis_aligned(cls, W: float, L: float, side: Side | str = Side.RIGHT) -> ParkingSlot:
        return cls(Point2(0.0, 0.0), 0.0, W, L, Side(side))

    def fits(self, dims: CarDimensions) -> bool:
        """Whether the slot satisfies ``W > w`` and ``L >= d_f + d_r`` for this car."""
        return self.W > dims.w and self.L >= dims.length - EPS

    def check_fits(self, dims: CarDimensions) -> None:
        if self.W <= dims.w:
            raise ValueError(f"slot width {self.W} must exceed car width {dims.w}")
        if self.L < dims.length - EPS:
            raise ValueError(f"slot length {self.L} is shorter than the car ({dims.length})")

    def local_frame(self) -> kernel.LocalFrame:
        return kernel.LocalFrame(self.p.x, self.p.y, self.delta, self.side.hand, self.L, self.W)


@dataclass(frozen=True)
class SlotGeometry:
    entry_corners: tuple[Point2, Point2]
    inner_corners: tuple[Point2, Point2]
    obstacle_sides: tuple[Segment2, Segment2, Segment2]
    slot_rect: OrientedRect


class FrameStatus(str, enum.Enum):
    FREE = "free"
    CONTACT = "contact"
    INSIDE = "inside"


def interior_normal(slot: ParkingSlot) -> Point2:
    return Point2(math.cos(slot.delta), math.sin(slot.delta)).rotated(slot.side.hand * math.pi / 2)


def slot_geometry(slot: ParkingSlot) -> SlotGeometry:
    u = Point2(math.cos(slot.delta), math.sin(slot.delta))
    n = interior_normal(slot)
    p0 = slot.p
    p1 = p0 + u.scaled(slot.L)
    q0 = p0 + n.scaled(slot.W)
    q1 = p1 + n.scaled(slot.W)
    if slot.side is Side.RIGHT:
        rect = OrientedRect((p0, p1, q1, q0))
    else:
        rect = OrientedRect((p0, q0, q1, p1))
    sides = (Segment2(p0, q0), Segment2(p1, q1), Segment2(q0, q1))
    return SlotGeometry((p0, p1), (q0, q1), sides, rect)


def classify_frame(f: OrientedRect, g: SlotGeometry) -> FrameStatus:
    if rect_contains_rect(g.slot_rect, f):
        return FrameStatus.INSIDE
    if any(rect_intersects_segment(f, side) for side in g.obstacle_sides):
        return FrameStatus.CONTACT
    return FrameStatus.FREE


def penetrates(f: OrientedRect, g: SlotGeometry, margin: float = EPS) -> bool:
    """Obstacle contact beyond mere boundary touching (frame shrunk by ``margin``)."""
    core = shrink_rect(f, margin)
    return any(rect_intersects_segment(core, side) for side in g.obstacle_sides)


def pinned_corner(dims: CarDimensions, slot: ParkingSlot) -> Point2:
    """Body-frame corner pinned to ``p``: front-right for right slots, front-left for left slots."""
    return Point2(dims.d_f, -slot.side.hand * dims.w / 2)


def entry_heading_count(delta_theta: float) -> int:
    if not delta_theta > 0:
        raise ValueError("delta_theta must be positive")
    return int(math.floor((math.pi / 2) / delta_theta + 1e-9)) + 1


def entry_headings(slot: ParkingSlot, delta_theta: float) -> np.ndarray:
    """Unwrapped candidate headings, ordered by their index ``m``."""
    m = np.arange(entry_heading_count(delta_theta))
    return slot.delta + slot.side.hand * (math.pi + m * delta_theta)


@dataclass(frozen=True)
class EntrySeeds:
    """Possible entry positions as arrays; ``index`` is ``m`` in ``delta + pi + m * delta_theta``."""

    index: np.ndarray
    heading: np.ndarray  # unwrapped
    x: np.ndarray
    y: np.ndarray
    theta: np.ndarray  # wrapped to (-pi, pi]
    s: int
    phi: float

    def __len__(self) -> int:
        return int(self.index.size)

    def state(self, i: int) -> CarState:
        return CarState(float(self.x[i]), float(self.y[i]), float(self.theta[i]), self.s, self.phi)


def entry_seeds(dims: CarDimensions, slot: ParkingSlot, delta_theta: float) -> EntrySeeds:
    headings = entry_headings(slot, delta_theta)
    corner = pinned_corner(dims, slot)
    c, s = np.cos(headings), np.sin(headings)
    x = slot.p.x - (c * corner.x - s * corner.y)
    y = slot.p.y - (s * corner.x + c * corner.y)
    theta = kernel.wrap(headings)

    # condition (iii): no penetration of a non-entry side; touching at p is inherent to the pinning
    lf = slot.local_frame()
    u, v, psi = lf.to_local(x, y, theta)
    m = EPS
    clear = ~kernel.obstacle_contact(u, v, psi, dims.d_f - m, dims.d_r - m, dims.w / 2 - m, slot.L, slot.W)
    idx = np.flatnonzero(clear)
    return EntrySeeds(
        index=idx,
        heading=headings[idx],
        x=x[idx],
        y=y[idx],
        theta=theta[idx],
        s=-1,
        phi=slot.side.hand * dims.phi_max,
    )


def possible_entry_positions(dims: CarDimensions, slot: ParkingSlot, delta_theta: float) -> list[CarState]:
    slot.check_fits(dims)
    seeds = entry_seeds(dims, slot, delta_theta)
    return [seeds.state(i) for i in range(len(seeds))]
