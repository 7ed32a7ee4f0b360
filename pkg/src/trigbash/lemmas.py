"""Classical triangle theorems as numeric residuals, predicates and solvers.

Residual conventions: lengths are compared in scene units, squared lengths in
squared units, and pure ratios or sines are compared absolutely or relative
to the quantity named in each docstring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple, Sequence

from .constructions import (
    isogonal_line,
    line_line_intersect,
    midpoint,
    tangent_line,
    triangle_center,
    circumcircle,
    incircle,
    excircle,
)
from .geom import (
    DEFAULT_TOL,
    Circle,
    CoincidentPointsError,
    GeometryError,
    Line,
    NotCollinearError,
    Point,
    TolerancePolicy,
    Triangle,
    angle_at,
    diameter,
    directed_ratio,
    dist,
    is_parallel,
    is_perpendicular,
    signed_area,
)


class NotIsogonalError(GeometryError):
    pass


class TangentsParallelError(GeometryError):
    pass


class PointAtVertexError(GeometryError):
    pass


class PointOutsideSideError(GeometryError):
    pass


class PolygonError(GeometryError):
    pass


class PointOffCarrierError(NotCollinearError):
    pass


@dataclass(frozen=True)
class ResidualSet:
    values: tuple[tuple[str, float], ...]
    max_abs: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "max_abs", max((abs(r) for _, r in self.values), default=0.0))

    @classmethod
    def of(cls, **named: float) -> "ResidualSet":
        return cls(tuple(named.items()))

    def __getitem__(self, label: str) -> float:
        for name, r in self.values:
            if name == label:
                return r
        raise KeyError(label)


class CevianTriple(NamedTuple):
    D: Point  # on BC
    E: Point  # on CA
    F: Point  # on AB


def law_of_sines_residuals(t: Triangle) -> ResidualSet:
    two_r = 2.0 * circumcircle(*t.vertices).radius
    ang_a, ang_b, ang_c = t.angles
    return ResidualSet.of(
        a=t.a / math.sin(ang_a) - two_r,
        b=t.b / math.sin(ang_b) - two_r,
        c=t.c / math.sin(ang_c) - two_r,
    )


def law_of_cosines_residuals(t: Triangle) -> ResidualSet:
    a, b, c = t.a, t.b, t.c
    ang_a, ang_b, ang_c = t.angles
    return ResidualSet.of(
        a=a * a - b * b - c * c + 2.0 * b * c * math.cos(ang_a),
        b=b * b - c * c - a * a + 2.0 * c * a * math.cos(ang_b),
        c=c * c - a * a - b * b + 2.0 * a * b * math.cos(ang_c),
    )


def trig_identity_residuals(x: float, y: float) -> ResidualSet:
    sx, cx, sy, cy = math.sin(x), math.cos(x), math.sin(y), math.cos(y)
    cos2x = math.cos(2.0 * x)
    double_cos = cos2x - (2.0 * cx * cx - 1.0)
    double_cos_alt = cos2x - (1.0 - 2.0 * sx * sx)
    return ResidualSet.of(
        sin_double=math.sin(2.0 * x) - 2.0 * sx * cx,
        cos_double=double_cos if abs(double_cos) >= abs(double_cos_alt) else double_cos_alt,
        sin_sum=math.sin(x + y) - (sx * cy + cx * sy),
        sin_diff=math.sin(x - y) - (sx * cy - cx * sy),
        cos_sum=math.cos(x + y) - (cx * cy - sx * sy),
        cos_diff=math.cos(x - y) - (cx * cy + sx * sy),
    )


def _on_side(m: Point, p: Point, q: Point, tol: TolerancePolicy) -> float:
    """Directed ratio PM/MQ, mapping the library's errors onto the lemma vocabulary."""
    if dist(m, p) <= tol.abs_floor * max(1.0, diameter((p, q))):
        raise PointAtVertexError("point coincides with a vertex")
    try:
        return directed_ratio(m, p, q, tol)
    except CoincidentPointsError:
        raise PointAtVertexError("point coincides with a vertex") from None


def ratio_lemma_residual(a: Point, b: Point, c: Point, m: Point,
                         tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Relative defect of BM/MC = (AB/AC) * sin(BAM)/sin(MAC) for M inside BC."""
    r = _on_side(m, b, c, tol)
    if r <= 0.0:
        raise PointOutsideSideError("M must lie strictly inside segment BC")
    rhs = dist(a, b) / dist(a, c) * math.sin(angle_at(a, b, m)) / math.sin(angle_at(a, m, c))
    return abs(r - rhs) / r


def perpendicularity_criterion(a: Point, b: Point, c: Point, d: Point,
                               tol: TolerancePolicy = DEFAULT_TOL) -> tuple[float, bool]:
    """``(AB^2 - AD^2) - (BC^2 - CD^2)`` and whether AC is perpendicular to BD."""
    sq = lambda p, q: (p - q).dot(p - q)
    gap = (sq(a, b) - sq(a, d)) - (sq(b, c) - sq(c, d))
    return gap, is_perpendicular(Line.through(a, c), Line.through(b, d), tol)


def steiner_residual(a: Point, b: Point, c: Point, d: Point, e: Point,
                     tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Relative defect of (BD/DC)(BE/EC) = AB^2/AC^2 for isogonal AD, AE."""
    if abs(angle_at(a, b, d) - angle_at(a, e, c)) > 1e-9 and \
            abs(angle_at(a, b, e) - angle_at(a, d, c)) > 1e-9:
        raise NotIsogonalError("AD and AE are not isogonal")
    lhs = _on_side(d, b, c, tol) * _on_side(e, b, c, tol)
    rhs = (dist(a, b) / dist(a, c)) ** 2
    return abs(lhs - rhs) / rhs


def tangent_meet(a: Point, b: Point, c: Point, tol: TolerancePolicy = DEFAULT_TOL) -> Point:
    """Intersection of the circumcircle tangents at B and C."""
    w = circumcircle(a, b, c)
    tb, tc = tangent_line(w, b), tangent_line(w, c)
    if is_parallel(tb, tc, tol):
        raise TangentsParallelError("tangents at B and C are parallel (right angle at A)")
    return line_line_intersect(tb, tc, tol)


def symmedian_checks(a: Point, b: Point, c: Point,
                     tol: TolerancePolicy = DEFAULT_TOL) -> ResidualSet:
    """Isogonality of AX and the median AM, plus the symmedian foot ratio.

    Angles are taken along the ray from A towards BC, which is the ray AX when
    A is acute and its opposite when A is obtuse.
    """
    x = tangent_meet(a, b, c, tol)
    m = midpoint(b, c)
    t = line_line_intersect(Line.through(a, x), Line.through(b, c), tol)
    return ResidualSet.of(
        bax_cam=angle_at(a, b, t) - angle_at(a, c, m),
        cax_bam=angle_at(a, c, t) - angle_at(a, b, m),
        symmedian_ratio=directed_ratio(t, b, c, tol) - (dist(a, b) / dist(a, c)) ** 2,
    )


def sine_ratio(t: float, x: float) -> float:
    """``sin x / sin(t - x)``, strictly increasing on (0, t) for 0 < t < pi."""
    return math.sin(x) / math.sin(t - x)


def solve_ratio_angle(t: float, r: float) -> float:
    """The unique angle in (0, t) with sin(a)/sin(t - a) = r, by bisection."""
    if not (0.0 < t < math.pi):
        raise ValueError(f"t must lie in (0, pi), got {t}")
    if not r > 0.0:
        raise ValueError(f"r must be positive, got {r}")
    lo, hi = 0.0, t
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if sine_ratio(t, mid) < r:
            lo = mid
        else:
            hi = mid
    # pick the better of the two final endpoints; both sit inside (0, t) unless r is extreme
    cands = [x for x in (lo, hi) if 0.0 < x < t]
    return min(cands, key=lambda x: abs(sine_ratio(t, x) - r))


def ceva_product(a: Point, b: Point, c: Point, triple: CevianTriple,
                 tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Signed product (BD/DC)(CE/EA)(AF/FB) of directed ratios.

    +1 means the cevians AD, BE, CF concur (possibly outside the triangle or at
    infinity); -1 means D, E, F are collinear.
    """
    try:
        return (_on_side(triple.D, b, c, tol) * _on_side(triple.E, c, a, tol)
                * _on_side(triple.F, a, b, tol))
    except NotCollinearError as exc:
        raise PointOffCarrierError(f"cevian point off its side line: {exc}") from None


def classify_triple(a: Point, b: Point, c: Point, triple: CevianTriple,
                    tol: TolerancePolicy = DEFAULT_TOL) -> str:
    """``'concurrent'``, ``'collinear'`` or ``'neither'`` from the signed product."""
    p = ceva_product(a, b, c, triple, tol)
    if abs(p - 1.0) <= 1e-10:
        return "concurrent"
    if abs(p + 1.0) <= 1e-10:
        return "collinear"
    return "neither"


def trig_ceva_product(a: Point, b: Point, c: Point, triple: CevianTriple,
                      tol: TolerancePolicy = DEFAULT_TOL) -> float:
    d, e, f = triple
    for p, (u, v) in ((d, (b, c)), (e, (c, a)), (f, (a, b))):
        if _on_side(p, u, v, tol) <= 0.0:
            raise PointOutsideSideError("trigonometric Ceva needs points inside the sides")
    s = math.sin
    return (s(angle_at(a, d, b)) / s(angle_at(a, d, c))
            * s(angle_at(b, e, c)) / s(angle_at(b, e, a))
            * s(angle_at(c, f, a)) / s(angle_at(c, f, b)))


def _lines_concurrent(l1: Line, l2: Line, l3: Line, tol: TolerancePolicy, scale: float) -> bool:
    pairs = [(l1, l2, l3), (l1, l3, l2), (l2, l3, l1)]
    p, q, r = max(pairs, key=lambda t: abs(t[0].nx * t[1].ny - t[0].ny * t[1].nx))
    if is_parallel(p, q, tol):
        return is_parallel(p, r, tol)
    x = line_line_intersect(p, q, tol)
    return abs(r.signed_distance(x)) <= tol.rel_eps * scale


def median_parallel_equiv(a: Point, b: Point, c: Point, e: Point, f: Point,
                          tol: TolerancePolicy = DEFAULT_TOL) -> tuple[bool, bool]:
    """(EF parallel to BC, cevians AM, BF, CE concurrent) for E on AB, F on AC."""
    if _on_side(e, a, b, tol) <= 0.0 or _on_side(f, a, c, tol) <= 0.0:
        raise PointOutsideSideError("E and F must lie strictly inside AB and AC")
    m = midpoint(b, c)
    scale = diameter((a, b, c))
    parallel = is_parallel(Line.through(e, f), Line.through(b, c), tol)
    concurrent = _lines_concurrent(Line.through(a, m), Line.through(b, f),
                                   Line.through(c, e), tol, scale)
    return parallel, concurrent


def _normalized_frame(points: Sequence[Point]):
    cx = sum(p.x for p in points) / len(points)
    cy = sum(p.y for p in points) / len(points)
    s = max(diameter(points), 1e-300)
    return lambda p: (((p.x - cx) / s), ((p.y - cy) / s))


def _hcross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _hunit(u):
    n = math.sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2])
    if n == 0.0:
        raise GeometryError("degenerate homogeneous element")
    return (u[0] / n, u[1] / n, u[2] / n)


def _hdet(u, v, w) -> float:
    return abs(u[0] * (v[1] * w[2] - v[2] * w[1])
               - u[1] * (v[0] * w[2] - v[2] * w[0])
               + u[2] * (v[0] * w[1] - v[1] * w[0]))


def desargues_residuals(t1: Triangle, t2: Triangle) -> tuple[float, float]:
    """Projective (central, axial) residuals for two triangles.

    Work happens in homogeneous coordinates of a frame normalized to the
    configuration, so parallel side pairs simply meet on the line at infinity.
    Each residual is the determinant of three unit homogeneous vectors.
    """
    v1, v2 = t1.vertices, t2.vertices
    for p, q in zip(v1, v2):
        if dist(p, q) <= DEFAULT_TOL.abs_floor * max(1.0, diameter(v1 + v2)):
            raise CoincidentPointsError("corresponding vertices coincide")
    to_frame = _normalized_frame(v1 + v2)
    h = lambda p: (*to_frame(p), 1.0)
    joins = [_hunit(_hcross(h(p), h(q))) for p, q in zip(v1, v2)]
    central = _hdet(*joins)
    meets = []
    for i, j in ((1, 2), (2, 0), (0, 1)):
        s1 = _hunit(_hcross(h(v1[i]), h(v1[j])))
        s2 = _hunit(_hcross(h(v2[i]), h(v2[j])))
        meets.append(_hunit(_hcross(s1, s2)))
    axial = _hdet(*meets)
    return central, axial


def desargues_check(t1: Triangle, t2: Triangle,
                    tol: TolerancePolicy = DEFAULT_TOL) -> tuple[bool, bool]:
    central, axial = desargues_residuals(t1, t2)
    return central <= tol.rel_eps, axial <= tol.rel_eps


def butterfly_residual(c: Circle, p: Point, q: Point, a: Point, b: Point,
                       cc: Point, d: Point, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """|MX - MY| / |XY| with M the midpoint of PQ, X = AD.PQ and Y = BC.PQ."""
    m = midpoint(p, q)
    scale = diameter((p, q, a, b, cc, d))
    for u, v in ((a, b), (cc, d)):
        if abs(Line.through(u, v).signed_distance(m)) > tol.rel_eps * scale:
            raise GeometryError("chord does not pass through the midpoint of PQ")
    pq = Line.through(p, q)
    x = line_line_intersect(Line.through(a, d), pq, tol)
    y = line_line_intersect(Line.through(b, cc), pq, tol)
    xy = dist(x, y)
    return abs(dist(m, x) - dist(m, y)) / max(xy, 1e-6 * scale)


def _segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    d1 = signed_area(p1, p2, q1)
    d2 = signed_area(p1, p2, q2)
    d3 = signed_area(q1, q2, p1)
    d4 = signed_area(q1, q2, p2)
    return (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0)


def _inside(poly: Sequence[Point], k: Point) -> bool:
    winding = 0.0
    n = len(poly)
    for i in range(n):
        u, v = poly[i] - k, poly[(i + 1) % n] - k
        winding += math.atan2(u.cross(v), u.dot(v))
    return abs(winding) > math.pi


def polygon_sine_product(vertices: Sequence[Point], k: Point) -> float:
    """Product over i of sin(K A_{i+1} A_i) / sin(K A_{i+1} A_{i+2}), indices mod n."""
    n = len(vertices)
    if n < 3:
        raise PolygonError("need at least three vertices")
    for i, j in combinations(range(n), 2):
        if (j - i) % n in (1, n - 1):
            continue
        if _segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]):
            raise PolygonError("polygon is self-intersecting")
    if not _inside(vertices, k):
        raise PolygonError("K is not inside the polygon")
    prod = 1.0
    for i in range(n):
        a0, a1, a2 = vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]
        prod *= math.sin(angle_at(a1, k, a0)) / math.sin(angle_at(a1, k, a2))
    return prod


def semiperimeter_points(a: Point, b: Point, c: Point) -> tuple[Point, Point]:
    """E on ray BA and F on ray CA, each at the semiperimeter from B and C.

    These are the touch points of the B- and C-excircles with lines BA and CA.
    """
    e = excircle(a, b, c, 1).touch_F
    f = excircle(a, b, c, 2).touch_E
    return e, f


def semiperimeter_perpendicularity(a: Point, b: Point, c: Point) -> ResidualSet:
    """|cos| of the angle between EF and OI; ``ef_di`` records EF against DI.

    D is the antipode of A on the circumcircle. Only ``ef_oi`` is a theorem.
    """
    e, f = semiperimeter_points(a, b, c)
    o = triangle_center(a, b, c, "circumcenter")
    i = triangle_center(a, b, c, "incenter")
    d = o * 2.0 - a
    ef = Line.through(e, f)
    oi = Line.through(o, i)
    di = Line.through(d, i)
    return ResidualSet.of(
        ef_oi=ef.nx * oi.nx + ef.ny * oi.ny,
        ef_di=ef.nx * di.nx + ef.ny * di.ny,
    )
