"""Deterministic ruler-and-compass style constructions.

Side and arc choices are always made with an explicit witness point rather
than by orientation conventions.
"""

from __future__ import annotations

import enum
import math
from typing import Callable, NamedTuple, Optional, Union

from .geom import (
    DEFAULT_TOL,
    Circle,
    CoincidentPointsError,
    DegenerateTriangleError,
    GeometryError,
    Line,
    Point,
    TolerancePolicy,
    circle_through,
    diameter,
    dist,
    midpoint,
    signed_area,
)

__all__ = [
    "CenterKind", "IncircleResult", "MixtilinearResult", "SecondIntersection",
    "ParallelLinesError", "NotOnCircleError", "NotOnLineError", "NoSignChangeError",
    "MaxIterationsError", "BracketError", "line_line_intersect", "second_intersection",
    "circumcircle", "incircle", "excircle", "triangle_center", "arc_midpoint",
    "tangent_line", "tangents_from", "foot", "reflect", "midpoint", "antipode",
    "through", "isogonal_line", "rotate_ray", "mixtilinear_incircle", "solve_on_curve",
    "curve_point", "curve_param",
]


class ParallelLinesError(GeometryError):
    def __init__(self, angle: float):
        super().__init__(f"lines are parallel (angle {angle:.3g} rad)")
        self.angle = angle


class NotOnCircleError(GeometryError):
    pass


class NotOnLineError(GeometryError):
    pass


class MaxIterationsError(GeometryError):
    pass


class BracketError(GeometryError):
    def __init__(self, message: str, lo: float, hi: float):
        super().__init__(f"{message} (bracket [{lo:.6g}, {hi:.6g}])")
        self.lo = lo
        self.hi = hi


class NoSignChangeError(BracketError):
    pass


class CenterKind(enum.Enum):
    centroid = "centroid"
    circumcenter = "circumcenter"
    incenter = "incenter"
    orthocenter = "orthocenter"
    excenter_A = "excenter_A"
    excenter_B = "excenter_B"
    excenter_C = "excenter_C"
    symmedian_point = "symmedian_point"


class IncircleResult(NamedTuple):
    circle: Circle
    touch_D: Point  # on BC
    touch_E: Point  # on CA
    touch_F: Point  # on AB


class MixtilinearResult(NamedTuple):
    circle: Circle
    touch_K: Point  # on AB
    touch_L: Point  # on AC
    touch_M: Point  # on the circumcircle


class SecondIntersection(NamedTuple):
    point: Point
    tangent: bool


class TangentPair(NamedTuple):
    first: Point
    second: Point


def _check_on_circle(p: Point, c: Circle, tol: TolerancePolicy) -> None:
    gap = abs(dist(p, c.center) - c.radius)
    if gap > tol.rel_eps * tol.scale_for((p, c.center)) + tol.rel_eps * c.radius:
        raise NotOnCircleError(f"point is {gap:.3g} off the circle")


def _check_on_line(p: Point, l: Line, tol: TolerancePolicy) -> None:
    gap = abs(l.signed_distance(p))
    scale = tol.scale if tol.scale is not None else max(1.0, abs(p.x), abs(p.y))
    if gap > tol.rel_eps * scale:
        raise NotOnLineError(f"point is {gap:.3g} off the line")


def _triangle_scale(a: Point, b: Point, c: Point) -> float:
    scale = diameter((a, b, c))
    if abs(signed_area(a, b, c)) <= DEFAULT_TOL.abs_floor * max(scale, 1.0) ** 2:
        raise DegenerateTriangleError("triangle vertices are collinear")
    return scale


def line_line_intersect(l1: Line, l2: Line, tol: TolerancePolicy = DEFAULT_TOL) -> Point:
    det = l1.nx * l2.ny - l1.ny * l2.nx
    if abs(det) <= tol.rel_eps:
        raise ParallelLinesError(math.asin(min(1.0, abs(det))))
    x = (l1.d * l2.ny - l2.d * l1.ny) / det
    y = (l1.nx * l2.d - l2.nx * l1.d) / det
    return Point(x, y)


def second_intersection(l: Line, c: Circle, known: Point,
                        tol: TolerancePolicy = DEFAULT_TOL) -> SecondIntersection:
    """The other meet of ``l`` and ``c``; ``tangent`` is set when ``l`` only touches."""
    _check_on_circle(known, c, tol)
    _check_on_line(known, l, tol)
    u = l.direction
    w = known - c.center
    half_b = u.dot(w)
    # discriminant relative to the known root: the chord half-length squared
    scale = tol.scale_for((known, c.center)) if tol.scale is not None else 2.0 * c.radius
    if half_b * half_b < (1e-10 * scale) ** 2:
        return SecondIntersection(known, True)
    t = -2.0 * half_b
    return SecondIntersection(known + u * t, False)


def circumcircle(a: Point, b: Point, c: Point) -> Circle:
    _triangle_scale(a, b, c)
    return circle_through(a, b, c)


def foot(p: Point, l: Line) -> Point:
    s = l.signed_distance(p)
    return Point(p.x - s * l.nx, p.y - s * l.ny)


def reflect(p: Point, l: Line) -> Point:
    s = l.signed_distance(p)
    return Point(p.x - 2.0 * s * l.nx, p.y - 2.0 * s * l.ny)


def antipode(p: Point, c: Circle, tol: TolerancePolicy = DEFAULT_TOL) -> Point:
    _check_on_circle(p, c, tol)
    return c.center * 2.0 - p


def _weighted(a: Point, b: Point, c: Point, wa: float, wb: float, wc: float) -> Point:
    s = wa + wb + wc
    return Point((wa * a.x + wb * b.x + wc * c.x) / s, (wa * a.y + wb * b.y + wc * c.y) / s)


def _touch_points(center: Point, a: Point, b: Point, c: Point) -> tuple[Point, Point, Point]:
    return (foot(center, Line.through(b, c)),
            foot(center, Line.through(c, a)),
            foot(center, Line.through(a, b)))


def incircle(a: Point, b: Point, c: Point) -> IncircleResult:
    _triangle_scale(a, b, c)
    la, lb, lc = dist(b, c), dist(c, a), dist(a, b)
    center = _weighted(a, b, c, la, lb, lc)
    r = 2.0 * abs(signed_area(a, b, c)) / (la + lb + lc)
    return IncircleResult(Circle(center, r), *_touch_points(center, a, b, c))


def _vertex_index(a: Point, b: Point, c: Point, vertex: Union[Point, str, int]) -> int:
    if isinstance(vertex, int):
        if vertex not in (0, 1, 2):
            raise ValueError("vertex index must be 0, 1 or 2")
        return vertex
    if isinstance(vertex, str):
        try:
            return "ABC".index(vertex)
        except ValueError:
            raise ValueError(f"unknown vertex {vertex!r}") from None
    for i, p in enumerate((a, b, c)):
        if p == vertex:
            return i
    raise GeometryError("excircle vertex is not a vertex of the triangle")


def excircle(a: Point, b: Point, c: Point, vertex: Union[Point, str, int]) -> IncircleResult:
    """Excircle opposite ``vertex``; touch points are on lines BC, CA, AB."""
    _triangle_scale(a, b, c)
    i = _vertex_index(a, b, c, vertex)
    weights = [dist(b, c), dist(c, a), dist(a, b)]
    s = sum(weights) / 2.0
    weights[i] = -weights[i]
    center = _weighted(a, b, c, *weights)
    r = abs(signed_area(a, b, c)) / (s - [dist(b, c), dist(c, a), dist(a, b)][i])
    return IncircleResult(Circle(center, r), *_touch_points(center, a, b, c))


def triangle_center(a: Point, b: Point, c: Point, kind: Union[CenterKind, str]) -> Point:
    kind = CenterKind(kind)
    _triangle_scale(a, b, c)
    la2 = (b - c).dot(b - c)
    lb2 = (c - a).dot(c - a)
    lc2 = (a - b).dot(a - b)
    if kind is CenterKind.centroid:
        return Point((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    if kind is CenterKind.circumcenter:
        return circle_through(a, b, c).center
    if kind is CenterKind.orthocenter:
        o = circle_through(a, b, c).center
        return a + b + c - o * 2.0
    if kind is CenterKind.incenter:
        return incircle(a, b, c).circle.center
    if kind is CenterKind.symmedian_point:
        return _weighted(a, b, c, la2, lb2, lc2)
    idx = {CenterKind.excenter_A: 0, CenterKind.excenter_B: 1, CenterKind.excenter_C: 2}[kind]
    return excircle(a, b, c, idx).circle.center


def arc_midpoint(c: Circle, p: Point, q: Point, side_witness: Point,
                 tol: TolerancePolicy = DEFAULT_TOL) -> Point:
    """Midpoint of the arc PQ of ``c`` that contains ``side_witness``."""
    _check_on_circle(p, c, tol)
    _check_on_circle(q, c, tol)
    _check_on_circle(side_witness, c, tol)
    if dist(p, q) <= tol.abs_floor * max(c.radius, 1.0):
        raise CoincidentPointsError("arc endpoints coincide")
    chord = Line.through(p, q)
    side = chord.signed_distance(side_witness)
    if abs(side) <= tol.rel_eps * c.radius:
        raise GeometryError("side witness lies on the chord")
    n = chord.normal
    sign = 1.0 if side > 0 else -1.0
    return c.center + n * (sign * c.radius)


def tangent_line(c: Circle, p: Point, tol: TolerancePolicy = DEFAULT_TOL) -> Line:
    _check_on_circle(p, c, tol)
    r = p - c.center
    return Line.from_normal(r.x, r.y, r.x * p.x + r.y * p.y)


def tangents_from(c: Circle, p: Point, tol: TolerancePolicy = DEFAULT_TOL) -> TangentPair:
    """Touch points of the two tangents from external ``p``.

    ``first`` is reached by turning clockwise from the center-to-P direction,
    ``second`` by turning counterclockwise.
    """
    v = p - c.center
    d = v.norm()
    if d <= c.radius * (1.0 + tol.rel_eps):
        raise GeometryError("point is inside or on the circle")
    phi = math.atan2(v.y, v.x)
    alpha = math.acos(c.radius / d)
    first = c.center + Point(math.cos(phi - alpha), math.sin(phi - alpha)) * c.radius
    second = c.center + Point(math.cos(phi + alpha), math.sin(phi + alpha)) * c.radius
    return TangentPair(first, second)


def through(p: Point, l: Line, mode: str) -> Line:
    if mode == "parallel":
        return Line(l.nx, l.ny, l.nx * p.x + l.ny * p.y)
    if mode == "perpendicular":
        u = l.direction
        return Line(u.x, u.y, u.x * p.x + u.y * p.y)
    raise ValueError(f"mode must be 'parallel' or 'perpendicular', not {mode!r}")


def _unit(v: Point) -> Point:
    n = v.norm()
    if n == 0.0:
        raise CoincidentPointsError("zero-length vector")
    return v * (1.0 / n)


def isogonal_line(a: Point, b: Point, c: Point, l: Line,
                  tol: TolerancePolicy = DEFAULT_TOL) -> Line:
    """Reflection of ``l`` (through A) across the internal bisector of angle BAC."""
    scale = _triangle_scale(a, b, c)
    if abs(l.signed_distance(a)) > tol.rel_eps * max(scale, 1.0):
        raise NotOnLineError("line does not pass through the vertex")
    w = _unit(_unit(b - a) + _unit(c - a))
    u = l.direction
    k = 2.0 * u.dot(w)
    return Line.from_direction(a, k * w.x - u.x, k * w.y - u.y)


def rotate_ray(origin: Point, through_pt: Point, theta: float, orientation: int) -> Line:
    """Line through ``origin`` along origin->through turned by ``orientation * theta``.

    Orientation +1 is counterclockwise.
    """
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    v = through_pt - origin
    if v.norm() <= DEFAULT_TOL.abs_floor * max(1.0, abs(origin.x), abs(origin.y)):
        raise CoincidentPointsError("ray through coincident points")
    ang = orientation * theta
    cs, sn = math.cos(ang), math.sin(ang)
    return Line.from_direction(origin, cs * v.x - sn * v.y, sn * v.x + cs * v.y)


def _bisect(g: Callable[[float], float], lo: float, hi: float, target: float,
            max_iter: int = 200) -> float:
    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if (glo > 0.0) == (ghi > 0.0):
        raise NoSignChangeError("no sign change", lo, hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            return lo if abs(glo) <= abs(ghi) else hi
        gm = g(mid)
        if abs(gm) <= target:
            return mid
        if (gm > 0.0) == (glo > 0.0):
            lo, glo = mid, gm
        else:
            hi, ghi = mid, gm
    raise MaxIterationsError(f"bisection did not converge in {max_iter} steps")


def mixtilinear_incircle(a: Point, b: Point, c: Point) -> MixtilinearResult:
    """Circle tangent to lines AB, AC and internally tangent to the circumcircle.

    The center is searched along the internal bisector from A. The tangency gap
    ``R - rho(t) - |O - X(t)|`` is concave in the bisector parameter, positive at
    the incenter and negative once the circle outgrows the circumcircle, so the
    bracket always holds exactly one root.
    """
    scale = _triangle_scale(a, b, c)
    circ = circle_through(a, b, c)
    o, big_r = circ.center, circ.radius
    inc = incircle(a, b, c).circle
    w = _unit(inc.center - a)
    half_sin = math.sin(0.5 * math.atan2(abs((b - a).cross(c - a)), (b - a).dot(c - a)))

    def gap(t: float) -> float:
        x = a + w * t
        return big_r - t * half_sin - dist(o, x)

    lo = dist(a, inc.center)
    # the root reaches this bound exactly for isosceles triangles; widen past rounding
    hi = 2.0 * big_r / (1.0 + half_sin) * (1.0 + 1e-9)
    if not gap(lo) > 0.0 or not gap(hi) <= 0.0:
        raise BracketError("mixtilinear tangency gap not bracketed", lo, hi)
    t = _bisect(gap, lo, hi, DEFAULT_TOL.abs_floor * scale)
    center = a + w * t
    rho = t * half_sin
    k = foot(center, Line.through(a, b))
    l_ = foot(center, Line.through(a, c))
    m = o + _unit(center - o) * big_r
    return MixtilinearResult(Circle(center, rho), k, l_, m)


Curve = Union[Line, Circle]


def curve_point(curve: Curve, t: float) -> Point:
    """Point at parameter ``t``.

    Lines: ``anchor + t * direction`` with the anchor at the foot of the origin.
    Circles: ``center + radius * (cos t, sin t)``.
    """
    if isinstance(curve, Line):
        return curve.anchor() + curve.direction * t
    return curve.center + Point(math.cos(t), math.sin(t)) * curve.radius


def curve_param(curve: Curve, p: Point) -> float:
    """Inverse of :func:`curve_point` for a point on (or projected onto) the curve."""
    if isinstance(curve, Line):
        return (p - curve.anchor()).dot(curve.direction)
    v = p - curve.center
    return math.atan2(v.y, v.x)


def solve_on_curve(curve: Curve, f: Callable[[Point], float],
                   bracket: tuple[float, float],
                   tol: TolerancePolicy = DEFAULT_TOL) -> Point:
    """Bisection for a zero of ``f`` along ``curve`` between the bracket parameters."""
    lo, hi = bracket
    scale = tol.scale if tol.scale is not None else diameter(
        (curve_point(curve, lo), curve_point(curve, hi)))
    target = tol.abs_floor * max(scale, tol.abs_floor)
    t = _bisect(lambda s: f(curve_point(curve, s)), lo, hi, target)
    return curve_point(curve, t)
