"""Optimal entry positions and minimum slot sizes for parallel parking."""

from .geometry import OrientedRect, Point2, Segment2
from .planner import PlanResult, find_entry_positions, is_feasible, minimal_gamma
from .slot import ParkingSlot, Side
from .sweep import SweepParams, heading_subranges, min_slot_dims
from .vehicle import CarDimensions, CarState, SimParams

__all__ = [
    "CarDimensions", "CarState", "OrientedRect", "ParkingSlot", "PlanResult", "Point2", "Segment2",
    "Side", "SimParams", "SweepParams", "find_entry_positions", "heading_subranges", "is_feasible",
    "min_slot_dims", "minimal_gamma",
]
