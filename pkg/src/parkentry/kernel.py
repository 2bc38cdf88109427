"""
Vectorized branch simulation.

Every array argument holds one entry per branch. States are integrated in
world coordinates with exactly the same arithmetic as
:func:`parkentry.vehicle.kinematic_step`; collision and containment tests run
in slot-local coordinates where the slot is ``[0, L] x [0, W]`` and the
obstacles are the sides ``u = 0``, ``u = L`` and ``v = W``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .geometry import EPS

TWO_PI = 2.0 * math.pi


class Status(IntEnum):
    RUNNING = 0
    GOAL = 1  # frame inside the slot at a stop
    EXITED = 2  # frame left the slot rectangle
    NO_CONTACT = 3  # a move travelled its full arc budget without contact
    STUCK = 4  # two consecutive moves could not take a single step
    CAPPED = 5  # direction-change limit exceeded
    PRUNED = 6  # a goal with fewer direction changes is already known


@dataclass(frozen=True)
class LocalFrame:
    """Rigid (or mirrored, ``hand=-1``) map from world to slot-local coordinates."""

    px: float
    py: float
    delta: float
    hand: int
    L: float
    W: float

    @property
    def ux(self) -> float:
        return math.cos(self.delta)

    @property
    def uy(self) -> float:
        return math.sin(self.delta)

    @property
    def nx(self) -> float:
        return -self.hand * math.sin(self.delta)

    @property
    def ny(self) -> float:
        return self.hand * math.cos(self.delta)

    def to_local(self, x, y, theta):
        dx = x - self.px
        dy = y - self.py
        u = dx * self.ux + dy * self.uy
        v = dx * self.nx + dy * self.ny
        psi = self.hand * (theta - self.delta)
        return u, v, psi


def wrap(theta):
    a = np.fmod(theta + math.pi, TWO_PI)
    a = np.where(a <= 0.0, a + TWO_PI, a)
    return a - math.pi


_BODY = ((1, 1), (1, -1), (-1, -1), (-1, 1))  # (front/rear, left/right) sign pairs


def corners(u, v, psi, front, rear, hw):
    """Local corner coordinates, shape ``(4, n)`` each."""
    c, s = np.cos(psi), np.sin(psi)
    cu, cv = [], []
    for fs, ls in _BODY:
        ax = front if fs > 0 else -rear
        ay = ls * hw
        cu.append(u + c * ax - s * ay)
        cv.append(v + s * ax + c * ay)
    return np.stack(cu), np.stack(cv)


def obstacle_contact(u, v, psi, front, rear, hw, L, W):
    """Closed-set intersection of the car box with any of the three slot obstacle sides."""
    c, s = np.cos(psi), np.sin(psi)
    cu, cv = corners(u, v, psi, front, rear, hw)
    umin, umax = cu.min(axis=0), cu.max(axis=0)
    vmax = cv.max(axis=0)

    # slot corners in body coordinates
    def body(eu, ev):
        du, dv = eu - u, ev - v
        return du * c + dv * s, -du * s + dv * c

    b00 = body(0.0, 0.0)
    b0W = body(0.0, W)
    bL0 = body(L, 0.0)
    bLW = body(L, W)

    def overlaps_box(p, q):
        sep_x = ((p[0] > front) & (q[0] > front)) | ((p[0] < -rear) & (q[0] < -rear))
        sep_y = ((p[1] > hw) & (q[1] > hw)) | ((p[1] < -hw) & (q[1] < -hw))
        return ~(sep_x | sep_y)

    hit_near = (umin <= 0.0) & (umax >= 0.0) & overlaps_box(b00, b0W)
    hit_far = (umin <= L) & (umax >= L) & overlaps_box(bL0, bLW)
    hit_inner = (vmax >= W) & (cv.min(axis=0) <= W) & overlaps_box(b0W, bLW)
    return hit_near | hit_far | hit_inner


def inside_slot(u, v, psi, front, rear, hw, L, W, eps=EPS):
    cu, cv = corners(u, v, psi, front, rear, hw)
    return ((cu.min(axis=0) >= -eps) & (cu.max(axis=0) <= L + eps)
            & (cv.min(axis=0) >= -eps) & (cv.max(axis=0) <= W + eps))


def overlaps_slot(u, v, psi, front, rear, hw, L, W):
    """Closed-set overlap of the car box with the slot rectangle (separating axes)."""
    cu, cv = corners(u, v, psi, front, rear, hw)
    sep = (cu.min(axis=0) > L) | (cu.max(axis=0) < 0.0) | (cv.min(axis=0) > W) | (cv.max(axis=0) < 0.0)
    c, s = np.cos(psi), np.sin(psi)
    bx, by = [], []
    for eu, ev in ((0.0, 0.0), (L, 0.0), (L, W), (0.0, W)):
        du, dv = eu - u, ev - v
        bx.append(du * c + dv * s)
        by.append(-du * s + dv * c)
    bx, by = np.stack(bx), np.stack(by)
    sep |= (bx.min(axis=0) > front) | (bx.max(axis=0) < -rear)
    sep |= (by.min(axis=0) > hw) | (by.max(axis=0) < -hw)
    return ~sep


@dataclass
class BranchOutcome:
    status: np.ndarray
    gamma: np.ndarray
    x: np.ndarray
    y: np.ndarray
    theta: np.ndarray
    s: np.ndarray  # direction of the last move


def run_branches(x, y, theta, s, phi, frame: LocalFrame, *, front, rear, hw, wheelbase,
                 delta, max_arc, gamma_limit, straight_radius, mode="park", prune=False,
                 inside_every_step=False, until_first_goal=False) -> BranchOutcome:
    """
    Alternate maximum-steering moves for every branch until it terminates.

    ``mode="park"`` ends a branch when its frame is inside the slot at a
    contact stop; ``mode="exit"`` ends it as soon as the frame no longer
    overlaps the slot rectangle. Each direction change flips both ``s`` and
    ``phi``. With ``prune`` set, branches whose direction-change count
    exceeds the best goal found so far are dropped. ``until_first_goal``
    returns as soon as any branch reaches a goal (remaining branches keep
    status ``RUNNING``).
    """
    x = np.array(x, dtype=float)
    y = np.array(y, dtype=float)
    theta = np.array(theta, dtype=float)
    s = np.array(s, dtype=float)
    tphi = np.tan(np.array(phi, dtype=float))
    n = x.size
    status = np.zeros(n, dtype=np.int8)
    gamma = np.zeros(n, dtype=np.int64)
    steps = np.zeros(n, dtype=np.int64)
    prev_zero = np.zeros(n, dtype=bool)
    with np.errstate(divide="ignore"):
        radius = np.where(tphi == 0.0, straight_radius, wheelbase / np.abs(tphi))
    step_budget = max_arc * TWO_PI * radius
    best = math.inf
    L, W = frame.L, frame.W
    geom = dict(front=front, rear=rear, hw=hw, L=L, W=W)

    while True:
        idx = np.flatnonzero(status == Status.RUNNING)
        if idx.size == 0:
            break
        xi, yi, ti, si = x[idx], y[idx], theta[idx], s[idx]
        d = si * delta
        nx = xi + d * np.cos(ti)
        ny = yi + d * np.sin(ti)
        nt = wrap(ti + d / wheelbase * tphi[idx])
        u, v, psi = frame.to_local(nx, ny, nt)
        hit = obstacle_contact(u, v, psi, **geom)

        free = ~hit
        fi = idx[free]
        x[fi], y[fi], theta[fi] = nx[free], ny[free], nt[free]
        steps[fi] += 1
        if mode == "exit":
            gone = ~overlaps_slot(u[free], v[free], psi[free], **geom)
            status[fi[gone]] = Status.EXITED
        elif inside_every_step:
            done = inside_slot(u[free], v[free], psi[free], **geom)
            status[fi[done]] = Status.GOAL
        over = fi[(steps[fi] * delta > step_budget[fi]) & (status[fi] == Status.RUNNING)]
        status[over] = Status.NO_CONTACT

        hi = idx[hit]
        if hi.size:
            if mode == "park":
                hu, hv, hpsi = frame.to_local(x[hi], y[hi], theta[hi])
                done = inside_slot(hu, hv, hpsi, **geom)
                status[hi[done]] = Status.GOAL
                hi = hi[~done]
            zero = steps[hi] == 0
            stuck = zero & prev_zero[hi]
            status[hi[stuck]] = Status.STUCK
            hi, zero = hi[~stuck], zero[~stuck]
            prev_zero[hi] = zero
            gamma[hi] += 1
            s[hi] = -s[hi]
            tphi[hi] = -tphi[hi]
            steps[hi] = 0
            status[hi[gamma[hi] > gamma_limit]] = Status.CAPPED

        if until_first_goal and (status == Status.GOAL).any():
            break
        if prune:
            goals = status == Status.GOAL
            if goals.any():
                best = min(best, int(gamma[goals].min()))
                status[(status == Status.RUNNING) & (gamma > best)] = Status.PRUNED

    return BranchOutcome(status=status, gamma=gamma, x=x, y=y, theta=theta, s=s.astype(np.int64))
