"""Seed splitting and constraint-respecting triangle sampling.

Per-trial seeds come from ``mix(seed, i)``: add ``(i + 1)`` times the 64-bit
golden-ratio increment to the seed and pass the sum through the splitmix64
finalizer. Every draw within one trial uses a ``random.Random`` seeded with
that value, so a trial is reproducible on its own.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

from .geom import Point, Triangle

MASK64 = (1 << 64) - 1
GOLDEN64 = 0x9E3779B97F4A7C15
MAX_ATTEMPTS = 10_000
SCALENE_MARGIN = math.radians(2.0)


def splitmix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix(seed: int, i: int) -> int:
    """The i-th child seed of ``seed``; total on all integers, result in [0, 2**64)."""
    return splitmix64((seed & MASK64) + (i + 1) * GOLDEN64)


class UnsatisfiableConstraintsError(ValueError):
    pass


@dataclass(frozen=True)
class TriangleConstraints:
    """Constraints on a triangle whose vertices are indexed 0, 1, 2.

    ``isosceles`` is the index of the apex vertex (its two sides are equal).
    ``orders`` holds pairs of sides ``(i, j), (k, l)`` meaning |ViVj| < |VkVl|.
    """

    acute: bool = False
    obtuse_at: Optional[int] = None
    scalene: bool = False
    isosceles: Optional[int] = None
    min_angle: float = 0.0
    orders: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = field(default_factory=tuple)

    def admits(self, angles: tuple[float, float, float]) -> bool:
        if min(angles) <= self.min_angle or min(angles) <= 0.0:
            return False
        if self.acute and max(angles) >= math.pi / 2:
            return False
        if self.obtuse_at is not None and angles[self.obtuse_at] <= math.pi / 2:
            return False
        if self.scalene:
            a0, a1, a2 = angles
            if min(abs(a0 - a1), abs(a1 - a2), abs(a0 - a2)) < SCALENE_MARGIN:
                return False
        for lo, hi in self.orders:
            # a side is proportional to the sine of the opposite angle
            if _opposite_sine(angles, lo) >= _opposite_sine(angles, hi):
                return False
        return True


def _opposite_sine(angles, side: tuple[int, int]) -> float:
    (k,) = {0, 1, 2} - set(side)
    return math.sin(angles[k])


def _draw_angles(c: TriangleConstraints, rng: random.Random) -> tuple[float, float, float]:
    if c.isosceles is not None:
        apex = rng.uniform(0.0, math.pi)
        base = (math.pi - apex) / 2.0
        out = [base, base, base]
        out[c.isosceles] = apex
        return tuple(out)
    u, v = sorted((rng.random(), rng.random()))
    return (math.pi * u, math.pi * (v - u), math.pi * (1.0 - v))


def place(angles: tuple[float, float, float], rng: random.Random) -> Triangle:
    """Canonical placement followed by a random orientation-preserving similarity.

    Vertex 1 goes to the origin, vertex 2 to (1, 0) and vertex 0 above them, so
    the result is always counterclockwise.
    """
    a0, a1, a2 = angles
    side01 = math.sin(a2) / math.sin(a0)  # |V1V2| = 1
    p0 = Point(side01 * math.cos(a1), side01 * math.sin(a1))
    p1 = Point(0.0, 0.0)
    p2 = Point(1.0, 0.0)
    theta = rng.uniform(0.0, 2.0 * math.pi)
    k = math.exp(rng.uniform(math.log(0.5), math.log(2.0)))
    tx, ty = rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)
    cs, sn = k * math.cos(theta), k * math.sin(theta)

    def f(p: Point) -> Point:
        return Point(cs * p.x - sn * p.y + tx, sn * p.x + cs * p.y + ty)

    return Triangle(f(p0), f(p1), f(p2))


def sample_angles(constraints: TriangleConstraints, rng: random.Random) -> tuple[float, float, float]:
    for _ in range(MAX_ATTEMPTS):
        angles = _draw_angles(constraints, rng)
        if constraints.admits(angles):
            return angles
    raise UnsatisfiableConstraintsError(
        f"no admissible triangle in {MAX_ATTEMPTS} attempts for {constraints}")


def sample_triangle(constraints: TriangleConstraints, rng: random.Random) -> Triangle:
    return place(sample_angles(constraints, rng), rng)
