"""
Search for optimal slot entry positions.

From every possible entry position the car reverses at full lock until the
frame would touch an obstacle side. If the stopped frame lies inside the slot
a goal is reached; otherwise the direction and the steering sign are flipped
(one direction change) and the next move starts. A branch therefore has a
single successor, so processing branches level by level in the number of
direction changes is the same as simulating every seed independently and
keeping those with the fewest changes.

Two engines share these semantics: :func:`trace_branch` follows one seed
with the exact geometry predicates and records the path, while
:func:`find_entry_positions` runs all seeds at once through
:mod:`parkentry.kernel`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import kernel
from .geometry import rect_intersects_rect, rect_intersects_segment
from .slot import (FrameStatus, ParkingSlot, SlotGeometry, classify_frame, entry_seeds, penetrates,
                   slot_geometry)
from .vehicle import CarDimensions, CarState, SimParams, frame_of, kinematic_step, min_turning_radius, move_radius


class MoveKind(str, enum.Enum):
    CONTACT_STOP = "contact_stop"
    INSIDE_REACHED = "inside_reached"
    NO_CONTACT = "no_contact"
    EXITED = "exited"


@dataclass(frozen=True)
class MoveOutcome:
    end_state: CarState
    kind: MoveKind
    steps: int
    path: tuple[CarState, ...] = ()


@dataclass(frozen=True)
class BranchState:
    current: CarState
    origin: CarState
    s: int
    phi: float
    gamma: int


@dataclass(frozen=True)
class PlanResult:
    entry: CarState
    goal: CarState
    gamma: int
    heading: float  # unwrapped entry heading, delta + pi + m * delta_theta for right slots
    path: tuple[CarState, ...] = field(default=(), compare=False, repr=False)


def simulate_move(start: CarState, s: int, phi: float, dims: CarDimensions, g: SlotGeometry,
                  params: SimParams, *, stop_when_outside: bool = False,
                  inside_every_step: bool = False, record: bool = False) -> MoveOutcome:
    """
    Apply kinematic steps with fixed ``(s, phi)`` until the next step would touch an obstacle.

    The returned state is the last collision-free one. A move whose arc length
    exceeds ``max_arc`` revolutions without contact ends as ``no_contact``.
    ``stop_when_outside`` ends the move as soon as the frame no longer overlaps
    the slot rectangle; ``inside_every_step`` ends it as soon as the frame is
    inside the slot.
    """
    if penetrates(frame_of(start, dims), g):
        raise ValueError("start state is in contact with the slot")
    budget = params.max_arc * 2.0 * math.pi * move_radius(dims, phi)
    c = start.with_motion(s, phi)
    path = [c] if record else []
    steps = 0
    while True:
        nxt = kinematic_step(c, dims, params)
        f = frame_of(nxt, dims)
        status = classify_frame(f, g)
        if status is FrameStatus.CONTACT or (status is FrameStatus.INSIDE and _touches_obstacle(f, g)):
            return MoveOutcome(c, MoveKind.CONTACT_STOP, steps, tuple(path))
        c = nxt
        steps += 1
        if record:
            path.append(c)
        if stop_when_outside and not rect_intersects_rect(f, g.slot_rect):
            return MoveOutcome(c, MoveKind.EXITED, steps, tuple(path))
        if inside_every_step and status is FrameStatus.INSIDE:
            return MoveOutcome(c, MoveKind.INSIDE_REACHED, steps, tuple(path))
        if steps * params.delta > budget:
            return MoveOutcome(c, MoveKind.NO_CONTACT, steps, tuple(path))


def _touches_obstacle(f, g: SlotGeometry) -> bool:
    return any(rect_intersects_segment(f, side) for side in g.obstacle_sides)


@dataclass(frozen=True)
class Trace:
    status: kernel.Status
    gamma: int
    end: CarState
    path: tuple[CarState, ...]


def trace_branch(start: CarState, dims: CarDimensions, slot: ParkingSlot, params: SimParams, *,
                 gamma_limit: Optional[int] = None, mode: str = "park",
                 inside_every_step: bool = False, record: bool = True) -> Trace:
    """Follow one seed move by move; the scalar counterpart of :func:`kernel.run_branches`."""
    g = slot_geometry(slot)
    limit = params.gamma_cap if gamma_limit is None else min(gamma_limit, params.gamma_cap)
    branch = BranchState(start, start, start.s, start.phi, 0)
    path: list[CarState] = [start]
    prev_zero = False
    while True:
        out = simulate_move(branch.current, branch.s, branch.phi, dims, g, params,
                            stop_when_outside=(mode == "exit"),
                            inside_every_step=inside_every_step and mode == "park",
                            record=record)
        if record:
            path.extend(out.path[1:])
        end = out.end_state
        if out.kind is MoveKind.EXITED:
            return Trace(kernel.Status.EXITED, branch.gamma, end, tuple(path))
        if out.kind is MoveKind.INSIDE_REACHED:
            return Trace(kernel.Status.GOAL, branch.gamma, end, tuple(path))
        if out.kind is MoveKind.NO_CONTACT:
            return Trace(kernel.Status.NO_CONTACT, branch.gamma, end, tuple(path))
        if mode == "park" and classify_frame(frame_of(end, dims), g) is FrameStatus.INSIDE:
            return Trace(kernel.Status.GOAL, branch.gamma, end, tuple(path))
        zero = out.steps == 0
        if zero and prev_zero:
            return Trace(kernel.Status.STUCK, branch.gamma, end, tuple(path))
        prev_zero = zero
        branch = BranchState(end, branch.origin, -branch.s, -branch.phi, branch.gamma + 1)
        if branch.gamma > limit:
            return Trace(kernel.Status.CAPPED, branch.gamma, end, tuple(path))


def _run_seeds(dims: CarDimensions, slot: ParkingSlot, params: SimParams, delta_theta: float,
               gamma_limit: int, prune: bool, inside_every_step: bool, until_first_goal: bool = False):
    seeds = entry_seeds(dims, slot, delta_theta)
    n = len(seeds)
    out = kernel.run_branches(
        seeds.x, seeds.y, seeds.theta, np.full(n, seeds.s), np.full(n, seeds.phi), slot.local_frame(),
        front=dims.d_f, rear=dims.d_r, hw=dims.w / 2, wheelbase=dims.b,
        delta=params.delta, max_arc=params.max_arc, gamma_limit=gamma_limit,
        straight_radius=min_turning_radius(dims), mode="park", prune=prune,
        inside_every_step=inside_every_step, until_first_goal=until_first_goal,
    )
    return seeds, out


def seed_gammas(dims: CarDimensions, slot: ParkingSlot, params: SimParams, delta_theta: float,
                gamma_max: Optional[int] = None, inside_every_step: bool = False):
    """Per-seed outcome without pruning: ``(seeds, BranchOutcome)``."""
    slot.check_fits(dims)
    limit = params.gamma_cap if gamma_max is None else min(gamma_max, params.gamma_cap)
    return _run_seeds(dims, slot, params, delta_theta, limit, False, inside_every_step)


def is_feasible(dims: CarDimensions, slot: ParkingSlot, gamma_max: int, params: SimParams = SimParams(),
                delta_theta: float = 1e-4) -> bool:
    """Whether any entry position parks within ``gamma_max`` direction changes."""
    if not slot.fits(dims):
        return False
    limit = min(int(gamma_max), params.gamma_cap)
    _, out = _run_seeds(dims, slot, params, delta_theta, limit, False, False, until_first_goal=True)
    return bool((out.status == kernel.Status.GOAL).any())


def find_entry_positions(dims: CarDimensions, slot: ParkingSlot, params: SimParams = SimParams(),
                         delta_theta: float = 1e-4, gamma_max: Optional[int] = None,
                         min_only: bool = True, *, inside_every_step: bool = False,
                         with_paths: bool = False) -> list[PlanResult]:
    """
    Entry/goal pairs for a slot.

    With ``min_only`` the result holds every entry position whose number of
    direction changes equals the global minimum (``gamma_max`` is ignored);
    otherwise it holds every entry position that parks within ``gamma_max``
    changes (unbounded means ``params.gamma_cap``). An empty list means the
    slot is infeasible under these limits.
    """
    slot.check_fits(dims)
    if min_only:
        limit = params.gamma_cap
    else:
        limit = params.gamma_cap if gamma_max is None else min(int(gamma_max), params.gamma_cap)
        if limit < 0:
            raise ValueError("gamma_max must be non-negative")
    seeds, out = _run_seeds(dims, slot, params, delta_theta, limit, min_only, inside_every_step)
    ok = out.status == kernel.Status.GOAL
    if min_only and ok.any():
        ok &= out.gamma == out.gamma[ok].min()
    results = []
    for i in np.flatnonzero(ok):
        entry = seeds.state(i)
        goal = CarState(float(out.x[i]), float(out.y[i]), float(out.theta[i]),
                        int(out.s[i]), float(out.s[i] * seeds.s * seeds.phi))
        path: tuple[CarState, ...] = ()
        if with_paths:
            tr = trace_branch(entry, dims, slot, params, gamma_limit=limit,
                              inside_every_step=inside_every_step)
            path = tr.path
        results.append(PlanResult(entry, goal, int(out.gamma[i]), float(seeds.heading[i]), path))
    results.sort(key=lambda r: (r.heading, r.gamma))
    return results


def attach_paths(results: list[PlanResult], dims: CarDimensions, slot: ParkingSlot,
                 params: SimParams = SimParams()) -> list[PlanResult]:
    """Copies of ``results`` with the rear-axle path traced from each entry."""
    return [replace(r, path=trace_branch(r.entry, dims, slot, params).path) for r in results]


def minimal_gamma(results: list[PlanResult]) -> Optional[int]:
    return min((r.gamma for r in results), default=None)
