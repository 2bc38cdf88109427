import math

import numpy as np
import pytest

from parkentry import kernel
from parkentry.geometry import Point2, rect_contains_rect, rect_intersects_segment, shrink_rect
from parkentry.planner import (MoveKind, attach_paths, find_entry_positions, is_feasible, minimal_gamma,
                               seed_gammas, simulate_move, trace_branch)
from parkentry.presets import BUILTIN
from parkentry.slot import ParkingSlot, Side, entry_seeds, slot_geometry
from parkentry.vehicle import CarState, SimParams, frame_of, kinematic_step

ZOE = BUILTIN["zoe"].dims
MID = BUILTIN["mid-sized"].dims
P = SimParams()


def _depth(c: CarState, slot: ParkingSlot) -> float:
    # signed distance of the rear-axle centre from the entry line, positive inside
    n = Point2(-math.sin(slot.delta), math.cos(slot.delta)).scaled(slot.side.hand)
    return (Point2(c.x, c.y) - slot.p).dot(n)


# --- simulate_move ----------------------------------------------------------------

def test_move_far_from_slot_never_contacts():
    g = slot_geometry(ParkingSlot.axis_aligned(2.0, 5.0))
    out = simulate_move(CarState(100.0, 100.0, 0.0), -1, ZOE.phi_max, ZOE, g, P)
    assert out.kind is MoveKind.NO_CONTACT
    arc = out.steps * P.delta
    assert 2 * math.pi * ZOE.b / math.tan(ZOE.phi_max) < arc <= 2 * math.pi * ZOE.b / math.tan(ZOE.phi_max) + P.delta


def test_first_move_goes_deeper():
    slot = ParkingSlot.axis_aligned(2.0, 5.8)
    g = slot_geometry(slot)
    seeds = entry_seeds(ZOE, slot, 1e-2)
    start = seeds.state(len(seeds) // 2)
    out = simulate_move(start, -1, ZOE.phi_max, ZOE, g, P)
    assert out.kind is MoveKind.CONTACT_STOP
    assert _depth(out.end_state, slot) > _depth(start, slot)


@pytest.mark.parametrize("h", [0.3, 0.517, 1.0])
def test_straight_move_step_count(h):
    W = 6.0
    slot = ParkingSlot.axis_aligned(W, 8.0)
    g = slot_geometry(slot)
    # facing the inner side, front face at distance h from it
    start = CarState(4.0, W - h - ZOE.d_f, math.pi / 2)
    out = simulate_move(start, 1, 0.0, ZOE, g, P)
    assert out.kind is MoveKind.CONTACT_STOP
    assert abs(out.steps - math.floor(h / P.delta)) <= 1


def test_move_rejects_start_in_contact():
    g = slot_geometry(ParkingSlot.axis_aligned(2.0, 5.0))
    with pytest.raises(ValueError):
        simulate_move(CarState(4.5, 1.0, 0.0), 1, 0.0, ZOE, g, P)


def test_move_end_state_is_collision_free():
    slot = ParkingSlot.axis_aligned(2.0, 4.6)
    g = slot_geometry(slot)
    seeds = entry_seeds(ZOE, slot, 5e-2)
    for i in range(len(seeds)):
        out = simulate_move(seeds.state(i), -1, ZOE.phi_max, ZOE, g, P)
        f = frame_of(out.end_state, ZOE)
        assert not any(_penetrates(f, side) for side in g.obstacle_sides)


def _penetrates(f, side) -> bool:
    return rect_intersects_segment(shrink_rect(f, 1e-9), side)


# --- engines agree ----------------------------------------------------------------

@pytest.mark.parametrize("dims,W,L,dth", [(ZOE, 2.2, 5.0, 1e-2), (ZOE, 2.0, 4.6, 2e-2), (MID, 2.2, 5.1, 2e-2)])
def test_scalar_trace_matches_kernel(dims, W, L, dth):
    slot = ParkingSlot.axis_aligned(W, L)
    seeds, out = seed_gammas(dims, slot, P, dth, 30)
    assert len(seeds) > 10
    for i in range(len(seeds)):
        tr = trace_branch(seeds.state(i), dims, slot, P, gamma_limit=30, record=False)
        assert tr.status == out.status[i]
        assert tr.gamma == out.gamma[i]
        if tr.status == kernel.Status.GOAL:
            assert (tr.end.x, tr.end.y, tr.end.theta) == pytest.approx(
                (out.x[i], out.y[i], out.theta[i]), abs=1e-9)


# --- planner behaviour ------------------------------------------------------------

def test_benchmark_midsized():
    res = find_entry_positions(MID, ParkingSlot.axis_aligned(2.2, 5.1), P, 1e-4)
    assert minimal_gamma(res) == 10
    assert all(r.gamma == 10 for r in res)


def test_benchmark_zoe():
    assert minimal_gamma(find_entry_positions(ZOE, ParkingSlot.axis_aligned(2.0, 4.5), P, 1e-4)) == 19


def test_car_wider_than_slot_is_rejected():
    with pytest.raises(ValueError):
        find_entry_positions(ZOE, ParkingSlot.axis_aligned(1.5, 6.0), P, 1e-3)
    assert not is_feasible(ZOE, ParkingSlot.axis_aligned(1.5, 6.0), 10)


def test_long_slot_single_backward_move():
    res = find_entry_positions(ZOE, ParkingSlot.axis_aligned(2.0, 7.0), P, 1e-3)
    assert minimal_gamma(res) == 0


def test_min_only_equals_min_of_relaxed():
    for W, L in [(2.0, 4.6), (2.2, 5.0), (2.5, 4.4)]:
        slot = ParkingSlot.axis_aligned(W, L)
        best = find_entry_positions(ZOE, slot, P, 1e-3)
        relaxed = find_entry_positions(ZOE, slot, P, 1e-3, gamma_max=P.gamma_cap, min_only=False)
        g = minimal_gamma(relaxed)
        assert minimal_gamma(best) == g
        assert {r.heading for r in best} == {r.heading for r in relaxed if r.gamma == g}


def test_relaxed_sets_grow_with_gamma_max():
    slot = ParkingSlot.axis_aligned(2.2, 4.8)
    prev: set = set()
    for k in range(0, 16, 3):
        cur = {r.heading for r in find_entry_positions(ZOE, slot, P, 1e-3, gamma_max=k, min_only=False)}
        assert prev <= cur
        prev = cur
    assert prev


@pytest.mark.parametrize("side", list(Side))
def test_goals_inside_slot(side):
    slot = ParkingSlot(Point2(-1.0, 2.5), 0.4, 2.0, 4.8, side)
    g = slot_geometry(slot)
    res = find_entry_positions(ZOE, slot, P, 1e-3, gamma_max=20, min_only=False)
    assert res
    for r in res:
        assert rect_contains_rect(g.slot_rect, frame_of(r.goal, ZOE))


def test_path_replays_kinematic_model():
    slot = ParkingSlot.axis_aligned(2.2, 5.1)
    res = attach_paths(find_entry_positions(MID, slot, P, 1e-3)[:2], MID, slot, P)
    for r in res:
        path = r.path
        assert path[0] == r.entry
        flips = 0
        for a, b in zip(path, path[1:]):
            if b.s != a.s:
                flips += 1
                a = a.with_motion(b.s, b.phi)
            assert kinematic_step(a, MID, P) == b
        assert flips == r.gamma
        end = path[-1]
        assert (end.x, end.y, end.theta) == (r.goal.x, r.goal.y, r.goal.theta)


def test_deterministic():
    slot = ParkingSlot.axis_aligned(2.0, 4.7)
    a = find_entry_positions(ZOE, slot, P, 1e-3)
    b = find_entry_positions(ZOE, slot, P, 1e-3)
    assert a == b


def test_half_step_stability():
    half = SimParams(delta=P.delta / 2)
    for dims, W, L in [(MID, 2.2, 5.1), (ZOE, 2.0, 4.5)]:
        slot = ParkingSlot.axis_aligned(W, L)
        g1 = minimal_gamma(find_entry_positions(dims, slot, P, 1e-4))
        g2 = minimal_gamma(find_entry_positions(dims, slot, half, 1e-4))
        assert abs(g1 - g2) <= 1


def test_results_sorted_by_heading():
    res = find_entry_positions(ZOE, ParkingSlot.axis_aligned(2.3, 4.9), P, 1e-3, gamma_max=12, min_only=False)
    keys = [(r.heading, r.gamma) for r in res]
    assert keys == sorted(keys)
    assert np.all(np.diff([r.heading for r in res]) > 0)


def test_cap_below_minimum_is_infeasible():
    slot = ParkingSlot.axis_aligned(2.0, 4.5)
    assert find_entry_positions(ZOE, slot, SimParams(gamma_cap=10), 1e-3) == []
    assert not is_feasible(ZOE, slot, 10, P, 1e-4)
    assert is_feasible(ZOE, slot, 19, P, 1e-4)
