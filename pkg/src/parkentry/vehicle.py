"""Car dimensions, car state and the discrete kinematic step."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .geometry import OrientedRect, wrap_angle


@dataclass(frozen=True)
class CarDimensions:
    w: float  # body width without mirrors [m]
    d_f: float  # rear axle center to front [m]
    d_r: float  # rear axle center to rear [m]
    b: float  # wheelbase [m]
    phi_max: float  # maximum steering angle [rad]

    def __post_init__(self) -> None:
        for name in ("w", "d_f", "d_r", "b", "phi_max"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"car dimension {name} must be positive, got {value}")
        if self.b >= self.d_f + self.d_r:
            raise ValueError("wheelbase must be shorter than the car")
        if self.phi_max >= math.pi / 2:
            raise ValueError("phi_max must be below pi/2")

    @property
    def length(self) -> float:
        return self.d_f + self.d_r

    @classmethod
    def from_degrees(cls, w: float, d_f: float, d_r: float, b: float, phi_max_deg: float) -> CarDimensions:
        return cls(w, d_f, d_r, b, math.radians(phi_max_deg))


@dataclass(frozen=True)
class CarState:
    x: float
    y: float
    theta: float
    s: int = 1
    phi: float = 0.0

    def __post_init__(self) -> None:
        if self.s not in (-1, 1):
            raise ValueError(f"direction must be -1 or +1, got {self.s}")

    def with_motion(self, s: int, phi: float) -> CarState:
        return replace(self, s=s, phi=phi)

    def pose(self) -> tuple[float, float, float]:
        return self.x, self.y, self.theta


@dataclass(frozen=True)
class SimParams:
    delta: float = 0.005  # step distance [m]
    gamma_cap: int = 120  # hard bound on direction changes
    max_arc: float = 1.0  # per-move travel bound, in full revolutions

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.gamma_cap < 0:
            raise ValueError("gamma_cap must be non-negative")
        if not 0 < self.max_arc <= 1:
            raise ValueError("max_arc must lie in (0, 1]")


def kinematic_step(c: CarState, dims: CarDimensions, params: SimParams) -> CarState:
    """Advance the car by one step distance keeping direction and steering."""
    d = c.s * params.delta
    return CarState(
        x=c.x + d * math.cos(c.theta),
        y=c.y + d * math.sin(c.theta),
        theta=wrap_angle(c.theta + d / dims.b * math.tan(c.phi)),
        s=c.s,
        phi=c.phi,
    )


def frame_of(c: CarState, dims: CarDimensions) -> OrientedRect:
    return OrientedRect.from_pose(c.x, c.y, c.theta, dims.d_f, dims.d_r, dims.w / 2)


def min_turning_radius(dims: CarDimensions) -> float:
    return dims.b / math.tan(dims.phi_max)


def curb_to_curb(dims: CarDimensions) -> float:
    """Diameter of the circle traced by the outer front wheel at full lock."""
    r = min_turning_radius(dims)
    return 2.0 * math.hypot(r + dims.w / 2, dims.b)


def move_radius(dims: CarDimensions, phi: float) -> float:
    """Radius of the rear-axle circle for steering ``phi``; straight moves use the minimum radius."""
    t = abs(math.tan(phi))
    if t == 0.0:
        return min_turning_radius(dims)
    return dims.b / t
