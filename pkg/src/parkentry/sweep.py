"""Minimum slot dimensions and entry-heading ranges over slot-size grids."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Optional, Sequence

import numpy as np

from . import kernel
from .planner import is_feasible, seed_gammas
from .slot import ParkingSlot, Side, entry_heading_count
from .vehicle import CarDimensions, SimParams


@dataclass(frozen=True)
class SweepParams:
    delta_w: float = 0.01
    delta_l: float = 0.01
    w_extra_max: float = 1.5
    l_extra_max: float = 4.0
    delta_theta: float = 1e-4
    gamma_max_list: tuple[int, ...] = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 30, 40, 50, 100)

    def __post_init__(self) -> None:
        if min(self.delta_w, self.delta_l, self.delta_theta) <= 0:
            raise ValueError("sweep steps must be positive")
        if self.w_extra_max < 0 or self.l_extra_max < 0:
            raise ValueError("sweep extras must be non-negative")
        object.__setattr__(self, "gamma_max_list", tuple(int(g) for g in self.gamma_max_list))

    @classmethod
    def desk(cls, **overrides) -> SweepParams:
        """Coarse grid suitable for interactive runs."""
        base = dict(delta_w=0.05, delta_l=0.05, delta_theta=1e-3)
        base.update(overrides)
        return cls(**base)

    def widths(self, dims: CarDimensions) -> list[float]:
        k = int(math.floor(self.w_extra_max / self.delta_w + 1e-9))
        return [dims.w + i * self.delta_w for i in range(1, k + 1)]

    def lengths(self, dims: CarDimensions) -> list[float]:
        j = int(math.floor(self.l_extra_max / self.delta_l + 1e-9))
        return [dims.length + i * self.delta_l for i in range(0, j + 1)]


@dataclass(frozen=True)
class FeasibilityCurve:
    gamma_max: int
    points: tuple[tuple[float, float], ...]  # (W, L_min), sorted by W

    def l_min(self, W: float, tol: float = 1e-9) -> Optional[float]:
        for w, length in self.points:
            if abs(w - W) <= tol:
                return length
        return None

    def min_extra_length(self, dims: CarDimensions) -> Optional[float]:
        if not self.points:
            return None
        return min(length for _, length in self.points) - dims.length


@dataclass(frozen=True)
class HeadingSubranges:
    slot_dims: tuple[float, float]
    gamma_max: int
    subranges: tuple[tuple[float, float], ...]
    feasible_index: tuple[int, ...] = field(default=(), repr=False)

    def __len__(self) -> int:
        return len(self.subranges)

    def width(self) -> float:
        """Total angular extent of all subranges."""
        return sum(hi - lo for lo, hi in self.subranges)


def _slot(W: float, L: float, side: Side) -> ParkingSlot:
    return ParkingSlot.axis_aligned(W, L, side)


def _scan_width(W: float, dims: CarDimensions, gamma_max: int, lengths: Sequence[float],
                delta_theta: float, params: SimParams, side: Side) -> Optional[float]:
    for L in lengths:
        if is_feasible(dims, _slot(W, L, side), gamma_max, params, delta_theta):
            return L
    return None


def min_slot_dims(dims: CarDimensions, gamma_max: int, sp: SweepParams = SweepParams(),
                  params: SimParams = SimParams(), *, side: Side = Side.RIGHT,
                  workers: int = 1) -> FeasibilityCurve:
    """
    For each tested width, the shortest grid length that admits an entry position.

    Widths start one step above the car width; lengths start at the car
    length. Widths without any feasible length up to ``l_extra_max`` are left
    out of the curve.
    """
    if gamma_max < 0:
        raise ValueError("gamma_max must be non-negative")
    widths = sp.widths(dims)
    scan = partial(_scan_width, dims=dims, gamma_max=gamma_max, lengths=sp.lengths(dims),
                   delta_theta=sp.delta_theta, params=params, side=Side(side))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            found = list(pool.map(scan, widths))
    else:
        found = [scan(W) for W in widths]
    points = tuple((W, L) for W, L in zip(widths, found) if L is not None)
    return FeasibilityCurve(gamma_max, points)


def feasible_headings(dims: CarDimensions, slot: ParkingSlot, gamma_max: int, delta_theta: float,
                      params: SimParams = SimParams()) -> np.ndarray:
    """Sorted heading indices ``m`` of entry positions that park within ``gamma_max`` changes."""
    if not slot.fits(dims):
        return np.zeros(0, dtype=np.int64)
    seeds, out = seed_gammas(dims, slot, params, delta_theta, gamma_max)
    return np.sort(seeds.index[out.status == kernel.Status.GOAL])


def runs_of(indices: Sequence[int]) -> list[tuple[int, int]]:
    """Maximal runs of consecutive integers in a sorted sequence."""
    runs: list[tuple[int, int]] = []
    for m in indices:
        m = int(m)
        if runs and m == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], m)
        else:
            runs.append((m, m))
    return runs


def heading_subranges(dims: CarDimensions, slot: ParkingSlot, gamma_max: int,
                      sp: SweepParams = SweepParams(), params: SimParams = SimParams()) -> HeadingSubranges:
    idx = feasible_headings(dims, slot, gamma_max, sp.delta_theta, params)
    hand = slot.side.hand
    ranges = []
    for lo, hi in runs_of(idx):
        a = slot.delta + hand * (math.pi + lo * sp.delta_theta)
        b = slot.delta + hand * (math.pi + hi * sp.delta_theta)
        ranges.append((min(a, b), max(a, b)))
    ranges.sort()
    return HeadingSubranges((slot.W, slot.L), gamma_max, tuple(ranges), tuple(int(m) for m in idx))


def feasibility_grid(dims: CarDimensions, widths: Sequence[float], lengths: Sequence[float], gamma_max: int,
                     delta_theta: float, params: SimParams = SimParams(),
                     side: Side = Side.RIGHT) -> np.ndarray:
    """Boolean matrix ``[width, length]`` of slot feasibility, every cell evaluated."""
    grid = np.zeros((len(widths), len(lengths)), dtype=bool)
    for i, W in enumerate(widths):
        for j, L in enumerate(lengths):
            grid[i, j] = is_feasible(dims, _slot(W, L, side), gamma_max, params, delta_theta)
    return grid


def length_monotonicity_violations(grid: np.ndarray) -> list[tuple[int, int]]:
    """Cells ``(i, j)`` that are feasible while ``(i, j + 1)`` is not."""
    bad = grid[:, :-1] & ~grid[:, 1:]
    return [(int(i), int(j)) for i, j in zip(*np.nonzero(bad))]


def heading_bitmask(feasible_index: Sequence[int], delta_theta: float) -> np.ndarray:
    mask = np.zeros(entry_heading_count(delta_theta), dtype=bool)
    mask[np.asarray(feasible_index, dtype=np.int64)] = True
    return mask


def curves_for(dims: CarDimensions, sp: SweepParams, params: SimParams = SimParams(), *,
               side: Side = Side.RIGHT, workers: int = 1) -> list[FeasibilityCurve]:
    return [min_slot_dims(dims, g, sp, params, side=side, workers=workers) for g in sp.gamma_max_list]
