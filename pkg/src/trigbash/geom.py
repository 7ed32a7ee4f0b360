"""Primitive plane-geometry values and the numeric predicates built on them.

Everything here is immutable and side-effect free. Coordinates are plain
doubles; near-threshold decisions are left to the verifier, which resamples
rather than escalating precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence


class GeometryError(ValueError):
    """Base class for every failed geometric precondition."""


class CoincidentPointsError(GeometryError):
    pass


class NotCollinearError(GeometryError):
    pass


class DegenerateTriangleError(GeometryError):
    pass


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite point ({self.x}, {self.y})")

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> "Point":
        return Point(self.x * k, self.y * k)

    __rmul__ = __mul__

    def dot(self, other: "Point") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Point") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Line:
    """Oriented line ``{p : nx*px + ny*py = d}`` with a unit normal.

    The direction of travel is ``(ny, -nx)``, so the normal points to the
    left of the direction.
    """

    nx: float
    ny: float
    d: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.nx, self.ny, self.d))):
            raise GeometryError("non-finite line coefficients")
        if abs(self.nx * self.nx + self.ny * self.ny - 1.0) > 1e-12:
            raise GeometryError("line normal is not a unit vector")

    @classmethod
    def from_normal(cls, nx: float, ny: float, d: float) -> "Line":
        n = math.hypot(nx, ny)
        if n == 0.0:
            raise GeometryError("zero normal")
        return cls(nx / n, ny / n, d / n)

    @classmethod
    def through(cls, p: Point, q: Point) -> "Line":
        """The line from ``p`` towards ``q``; coincident points are an error."""
        v = q - p
        length = v.norm()
        if length <= 1e-12 * max(1.0, abs(p.x), abs(p.y), abs(q.x), abs(q.y)):
            raise CoincidentPointsError("line through coincident points")
        return cls.from_direction(p, v.x / length, v.y / length)

    @classmethod
    def from_direction(cls, p: Point, ux: float, uy: float) -> "Line":
        u = math.hypot(ux, uy)
        if u == 0.0:
            raise GeometryError("zero direction")
        ux, uy = ux / u, uy / u
        nx, ny = -uy, ux
        return cls(nx, ny, nx * p.x + ny * p.y)

    @property
    def normal(self) -> Point:
        return Point(self.nx, self.ny)

    @property
    def direction(self) -> Point:
        return Point(self.ny, -self.nx)

    def signed_distance(self, p: Point) -> float:
        return self.nx * p.x + self.ny * p.y - self.d

    def anchor(self) -> Point:
        """Foot of the origin on the line; origin of the line's parameterization."""
        return Point(self.nx * self.d, self.ny * self.d)


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise GeometryError(f"circle radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class TolerancePolicy:
    """Relative tolerance with an absolute floor.

    ``scale`` is the diameter of the configuration under test. When it is left
    as ``None`` each predicate falls back to the diameter of its own operands.
    """

    rel_eps: float = 1e-9
    abs_floor: float = 1e-12
    scale: Optional[float] = None

    def __post_init__(self):
        if not (self.rel_eps > self.abs_floor > 0.0):
            raise ValueError("tolerance policy needs rel_eps > abs_floor > 0")
        if self.scale is not None and not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise ValueError("scale must be positive and finite")

    def with_scale(self, scale: float) -> "TolerancePolicy":
        return TolerancePolicy(self.rel_eps, self.abs_floor, scale)

    def scale_for(self, points: Iterable[Point]) -> float:
        if self.scale is not None:
            return self.scale
        return max(diameter(points), self.abs_floor)

    def length_tol(self, points: Iterable[Point]) -> float:
        return self.rel_eps * self.scale_for(points)


DEFAULT_TOL = TolerancePolicy()


def diameter(points: Iterable[Point]) -> float:
    """Diagonal of the axis-aligned bounding box."""
    pts = list(points)
    if not pts:
        return 0.0
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    return math.hypot(max(xs) - min(xs), max(ys) - min(ys))


@dataclass(frozen=True)
class Triangle:
    A: Point
    B: Point
    C: Point

    def __post_init__(self):
        scale = diameter((self.A, self.B, self.C))
        if abs(signed_area(self.A, self.B, self.C)) <= DEFAULT_TOL.abs_floor * max(scale, 1.0) ** 2:
            raise DegenerateTriangleError("triangle vertices are collinear")

    @property
    def a(self) -> float:
        return dist(self.B, self.C)

    @property
    def b(self) -> float:
        return dist(self.C, self.A)

    @property
    def c(self) -> float:
        return dist(self.A, self.B)

    @property
    def angles(self) -> tuple[float, float, float]:
        return (angle_at(self.A, self.B, self.C),
                angle_at(self.B, self.C, self.A),
                angle_at(self.C, self.A, self.B))

    @property
    def scale(self) -> float:
        return diameter(self.vertices)

    @property
    def vertices(self) -> tuple[Point, Point, Point]:
        return (self.A, self.B, self.C)


def dist(p: Point, q: Point) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def midpoint(p: Point, q: Point) -> Point:
    return Point((p.x + q.x) / 2.0, (p.y + q.y) / 2.0)


def signed_area(a: Point, b: Point, c: Point) -> float:
    """Half the cross product ``(b-a) x (c-a)``; positive when counterclockwise."""
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y))


def angle_at(a: Point, b: Point, c: Point) -> float:
    """Unsigned angle BAC in radians, computed with atan2 for accuracy near 0 and pi."""
    u = b - a
    v = c - a
    floor = DEFAULT_TOL.abs_floor * max(1.0, abs(a.x), abs(a.y))
    if u.norm() <= floor or v.norm() <= floor:
        raise CoincidentPointsError("angle with a coincident arm")
    return math.atan2(abs(u.cross(v)), u.dot(v))


def directed_ratio(x: Point, p: Point, q: Point, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Signed ratio PX/XQ along line PQ; positive iff X lies strictly between P and Q."""
    v = q - p
    vv = v.dot(v)
    if vv == 0.0:
        raise CoincidentPointsError("directed ratio on a degenerate segment")
    off_line = abs(v.cross(x - p)) / math.sqrt(vv)
    if off_line > tol.length_tol((x, p, q)):
        raise NotCollinearError(f"point is {off_line:.3g} off the line")
    t = (x - p).dot(v) / vv
    if abs(1.0 - t) * math.sqrt(vv) <= tol.abs_floor * max(1.0, tol.scale_for((x, p, q))):
        raise CoincidentPointsError("dividing point coincides with the segment end")
    return t / (1.0 - t)


def is_collinear(points: Sequence[Point], tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    if len(points) < 3:
        raise ValueError("collinearity needs at least three points")
    scale = tol.scale_for(points)
    worst = max(abs(signed_area(*t)) for t in combinations(points, 3))
    return worst <= tol.rel_eps * scale * scale


def circle_through(a: Point, b: Point, c: Point) -> Circle:
    d = 2.0 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y))
    scale = diameter((a, b, c))
    if abs(d) <= 2.0 * DEFAULT_TOL.abs_floor * max(scale, DEFAULT_TOL.abs_floor) ** 2:
        raise DegenerateTriangleError("no circle through collinear points")
    # work relative to a for conditioning
    bx, by = b.x - a.x, b.y - a.y
    cx, cy = c.x - a.x, c.y - a.y
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    center = Point(a.x + ux, a.y + uy)
    return Circle(center, math.hypot(ux, uy))


def is_concyclic(p1: Point, p2: Point, p3: Point, p4: Point,
                 tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    pts = (p1, p2, p3, p4)
    scale = tol.scale_for(pts)
    for p, q in combinations(pts, 2):
        if dist(p, q) <= tol.abs_floor * max(scale, 1.0):
            raise CoincidentPointsError("concyclicity of coincident points")
    if abs(signed_area(p1, p2, p3)) <= tol.rel_eps * scale * scale:
        return False
    circ = circle_through(p1, p2, p3)
    return abs(dist(p4, circ.center) - circ.radius) <= tol.rel_eps * scale


def is_perpendicular(l1: Line, l2: Line, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    return abs(l1.nx * l2.nx + l1.ny * l2.ny) <= tol.rel_eps


def is_parallel(l1: Line, l2: Line, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    return abs(l1.nx * l2.ny - l1.ny * l2.nx) <= tol.rel_eps


def line_angle(l1: Line, l2: Line) -> float:
    """Unoriented angle between two lines, in [0, pi/2]."""
    return math.atan2(abs(l1.nx * l2.ny - l1.ny * l2.nx), abs(l1.nx * l2.nx + l1.ny * l2.ny))
