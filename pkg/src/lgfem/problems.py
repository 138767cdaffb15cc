"""Benchmark transport problems: a smooth rotating hump and a slotted
cylinder, both advected by the rigid rotation u = 2*pi*(-x2, x1) on
[-1, 1]^2. The exact solution is the initial condition composed with the
backward rotation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .characteristics import VelocityField, rigid_rotation
from .mesh import Rect

HUMP_CENTER = np.array([0.5, 0.0])
HUMP_RADIUS = 1.0 / 3.0
CYL_CENTER = np.array([0.5, 0.0])
CYL_RADIUS = 0.25
SLOT_HALF_WIDTH = 0.05
SLOT_DEPTH = 0.35


def hump_ic(x: np.ndarray) -> np.ndarray:
    """Smooth hump cos^3(1.5*pi*r) on r <= 1/3 about (0.5, 0), else 0.

    The profile and its first two radial derivatives vanish at the support
    edge, so the hump is C^2 on the whole domain.
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    pts = x[None, :] if single else x
    r = np.linalg.norm(pts - HUMP_CENTER, axis=1)
    vals = np.where(r <= HUMP_RADIUS, np.cos(1.5 * np.pi * np.minimum(r, HUMP_RADIUS)) ** 3, 0.0)
    return float(vals[0]) if single else vals


def slotted_cylinder_ic(x: np.ndarray, slot_side: str = "bottom") -> np.ndarray:
    """Indicator of the disk of radius 0.25 about (0.5, 0) minus a slot.

    The slot is the strip |x1 - 0.5| < 0.05 cut 0.35 deep into the disk from
    the side named by slot_side ("bottom": open below, removed for
    x2 < 0.10; "top": mirrored).
    """
    if slot_side not in ("bottom", "top"):
        raise ValueError(f"slot_side must be 'bottom' or 'top', got {slot_side!r}")
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    pts = x[None, :] if single else x
    d = pts - CYL_CENTER
    inside = (d[:, 0] ** 2 + d[:, 1] ** 2) <= CYL_RADIUS**2
    in_strip = np.abs(d[:, 0]) < SLOT_HALF_WIDTH
    if slot_side == "bottom":
        in_reach = pts[:, 1] < CYL_CENTER[1] - CYL_RADIUS + SLOT_DEPTH
    else:
        in_reach = pts[:, 1] > CYL_CENTER[1] + CYL_RADIUS - SLOT_DEPTH
    vals = (inside & ~(in_strip & in_reach)).astype(np.float64)
    return float(vals[0]) if single else vals


@dataclass(frozen=True)
class Problem:
    """A benchmark: domain, advecting velocity, and initial condition."""

    tag: str
    domain: Rect
    velocity: VelocityField
    ic: Callable[[np.ndarray], np.ndarray]


def make_problem(tag: str, slot_side: str = "bottom") -> Problem:
    domain = Rect(-1.0, -1.0, 1.0, 1.0)
    velocity = rigid_rotation(2.0 * np.pi)
    if tag == "rotating_hump":
        return Problem(tag, domain, velocity, hump_ic)
    if tag == "slotted_cylinder":
        return Problem(tag, domain, velocity,
                       lambda x, side=slot_side: slotted_cylinder_ic(x, side))
    raise ValueError(f"unknown problem {tag!r}")


def exact_solution(problem: Problem, x: np.ndarray, t: float) -> np.ndarray:
    """Initial condition carried along the rotation: c(x, t) = c0(R(-wt) x)."""
    if t == 0.0:
        return problem.ic(x)
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    pts = x[None, :] if single else x
    ang = -problem.velocity.omega * t
    c, s = np.cos(ang), np.sin(ang)
    back = np.stack([c * pts[:, 0] - s * pts[:, 1],
                     s * pts[:, 0] + c * pts[:, 1]], axis=1)
    vals = problem.ic(back)
    return float(vals if np.ndim(vals) == 0 else vals[0]) if single else vals
