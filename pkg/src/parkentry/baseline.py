"""
Reversed-trials baseline: drive out of the slot from a goal position.

Starting at a goal, the car moves forward at full lock with the nose turning
toward the road, and alternates direction (flipping the steering sign) at
every obstacle contact until its frame no longer overlaps the slot. The
number of direction changes used is the cost of parking along the reversed
path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernel
from .geometry import Point2, rect_contains_rect, wrap_angle
from .planner import find_entry_positions, trace_branch
from .slot import ParkingSlot, interior_normal, slot_geometry
from .vehicle import CarDimensions, CarState, SimParams, frame_of, min_turning_radius


@dataclass(frozen=True)
class BaselineResult:
    goal: CarState
    gamma: int
    path: tuple[CarState, ...]
    exited: bool


@dataclass(frozen=True)
class ComparisonRow:
    L: float
    gamma_aligned: Optional[int]
    gamma_ours: Optional[int]
    gamma_planner: Optional[int] = None  # minimal direction changes of the entry search itself


def aligned_goal(dims: CarDimensions, slot: ParkingSlot) -> CarState:
    """
    Goal flush with the entry side and with the lateral side opposite ``p``.

    The car faces ``p`` (heading ``delta + pi``); the flank nearest the road
    lies on the entry line and the rear face lies on the far lateral side.
    """
    slot.check_fits(dims)
    u = Point2(math.cos(slot.delta), math.sin(slot.delta))
    n = interior_normal(slot)
    c = slot.p + u.scaled(slot.L - dims.d_r) + n.scaled(dims.w / 2)
    return CarState(c.x, c.y, wrap_angle(slot.delta + math.pi), 1, 0.0)


def outward_steer(goal: CarState, dims: CarDimensions, slot: ParkingSlot) -> float:
    """Steering for a forward move that turns the nose toward the road."""
    n = interior_normal(slot)
    turn_left = Point2(-math.sin(goal.theta), math.cos(goal.theta))
    return dims.phi_max if turn_left.dot(n) <= 0 else -dims.phi_max


def reversed_trials(dims: CarDimensions, slot: ParkingSlot, goal: CarState,
                    params: SimParams = SimParams(), *, record: bool = True) -> BaselineResult:
    g = slot_geometry(slot)
    if not rect_contains_rect(g.slot_rect, frame_of(goal, dims)):
        raise ValueError("goal frame is not inside the slot")
    start = goal.with_motion(1, outward_steer(goal, dims, slot))
    tr = trace_branch(start, dims, slot, params, mode="exit", record=record)
    exited = tr.status == kernel.Status.EXITED
    gamma = tr.gamma if exited else min(tr.gamma, params.gamma_cap)
    return BaselineResult(goal, gamma, tr.path, exited)


def reversed_trials_batch(dims: CarDimensions, slot: ParkingSlot, goals: Sequence[CarState],
                          params: SimParams = SimParams()) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`reversed_trials` without paths: ``(gamma, exited)`` arrays."""
    if not goals:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=bool)
    x = np.array([c.x for c in goals])
    y = np.array([c.y for c in goals])
    th = np.array([c.theta for c in goals])
    phi = np.array([outward_steer(c, dims, slot) for c in goals])
    out = kernel.run_branches(
        x, y, th, np.ones(len(goals)), phi, slot.local_frame(),
        front=dims.d_f, rear=dims.d_r, hw=dims.w / 2, wheelbase=dims.b,
        delta=params.delta, max_arc=params.max_arc, gamma_limit=params.gamma_cap,
        straight_radius=min_turning_radius(dims), mode="exit",
    )
    return out.gamma, out.status == kernel.Status.EXITED


def compare_direction_changes(dims: CarDimensions, W: float, L_range: Sequence[float],
                              params: SimParams = SimParams(), *, delta_theta: float = 1e-4,
                              side: str = "right") -> list[ComparisonRow]:
    """
    Direction changes of the reversed-trials baseline from the aligned goal
    versus the best over goals found by :func:`find_entry_positions`.
    """
    rows = []
    for L in L_range:
        slot = ParkingSlot(Point2(0.0, 0.0), 0.0, W, float(L), side)
        if not slot.fits(dims):
            rows.append(ComparisonRow(float(L), None, None))
            continue
        g_al, ex_al = reversed_trials_batch(dims, slot, [aligned_goal(dims, slot)], params)
        aligned = int(g_al[0]) if ex_al[0] else None
        ours = None
        results = find_entry_positions(dims, slot, params, delta_theta, min_only=True)
        planner = results[0].gamma if results else None
        if results:
            gam, ex = reversed_trials_batch(dims, slot, [r.goal for r in results], params)
            if ex.any():
                ours = int(gam[ex].min())
        rows.append(ComparisonRow(float(L), aligned, ours, planner))
    return rows
