"""Instantiate a resolved scene for one seed and measure its assertions.

Assertion residuals are dimensionless and compared against ``tol.rel_eps``:
lengths are divided by a length scale, areas by its square, and angle or
direction defects are used as they are.
"""

from __future__ import annotations

import hashlib
import math
import random
import struct
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Optional, Sequence, Union

from .. import geom as G
from ..constructions import line_line_intersect
from ..sampling import UnsatisfiableConstraintsError, sample_triangle
from .ast import Span
from .resolve import AssertNode, GuardNode, LetNode, PointNode, Scene, TriangleNode

LOCUS_MARGIN = 0.05
RAY_REACH = 3.0
LINE_RANGE = (-1.0, 2.0)


@dataclass(frozen=True)
class Bindings:
    seed: int
    values: dict
    frame_scale: float
    frame_center: G.Point = G.Point(0.0, 0.0)

    def digest(self) -> str:
        """sha256 over the bound values in name order, as IEEE doubles."""
        h = hashlib.sha256()
        for name in sorted(self.values):
            h.update(name.encode())
            for x in _flatten(self.values[name]):
                h.update(struct.pack("<d", x))
        return h.hexdigest()


@dataclass(frozen=True)
class DegenerateSample:
    seed: int
    node_index: int
    span: Span
    reason: str


def _flatten(v: Any) -> list[float]:
    if isinstance(v, (int, float)):
        return [float(v)]
    if isinstance(v, G.Point):
        return [v.x, v.y]
    if isinstance(v, G.Line):
        return [v.nx, v.ny, v.d]
    if isinstance(v, G.Circle):
        return [v.center.x, v.center.y, v.radius]
    if isinstance(v, tuple):
        return [x for item in v for x in _flatten(item)]
    return []


def _draw_on_locus(node: PointNode, env: dict, tol: G.TolerancePolicy,
                   rng: random.Random) -> G.Point:
    args = [fn(env, tol) for fn in node.args]
    if node.locus in ("segment", "ray", "line"):
        p, q = args
        if G.dist(p, q) <= tol.abs_floor * max(1.0, G.diameter((p, q))):
            raise G.CoincidentPointsError("locus through coincident points")
        lo, hi = {"segment": (LOCUS_MARGIN, 1.0 - LOCUS_MARGIN),
                  "ray": (LOCUS_MARGIN, RAY_REACH),
                  "line": LINE_RANGE}[node.locus]
        return p + (q - p) * rng.uniform(lo, hi)
    if node.locus == "circle":
        (c,) = args
        theta = rng.uniform(0.0, 2.0 * math.pi)
        return c.center + G.Point(math.cos(theta), math.sin(theta)) * c.radius
    c, p, q, w = args
    # arc of chord PQ on the side of W, traversed from P to Q
    a0 = math.atan2(p.y - c.center.y, p.x - c.center.x)
    a1 = math.atan2(q.y - c.center.y, q.x - c.center.x)
    aw = math.atan2(w.y - c.center.y, w.x - c.center.x)
    span_ccw = (a1 - a0) % (2.0 * math.pi)
    if (aw - a0) % (2.0 * math.pi) < span_ccw:
        start, sweep = a0, span_ccw
    else:
        start, sweep = a0, span_ccw - 2.0 * math.pi
    u = rng.uniform(LOCUS_MARGIN, 1.0 - LOCUS_MARGIN)
    theta = start + sweep * u
    return c.center + G.Point(math.cos(theta), math.sin(theta)) * c.radius


def evaluate(scene: Scene, seed: int, tol: G.TolerancePolicy = G.DEFAULT_TOL,
             frame_seed: Optional[int] = None) -> Union[Bindings, DegenerateSample]:
    """Draw free objects and run every construction and guard in order.

    In scenes with a ``fixed`` assertion the triangle is drawn from
    ``frame_seed`` so that every trial shares one frame.
    """
    rng = random.Random(seed)
    frame_rng = random.Random(frame_seed) if scene.pins_frame and frame_seed is not None else rng
    env: dict = {}
    frame: list[G.Point] = []
    for node in scene.nodes:
        try:
            if isinstance(node, TriangleNode):
                t = sample_triangle(node.constraints, frame_rng)
                for name, v in zip(node.names, t.vertices):
                    env[name] = v
                frame.extend(t.vertices)
            elif isinstance(node, PointNode):
                p = _draw_on_locus(node, env, tol, rng)
                env[node.names[0]] = p
                frame.append(p)
            elif isinstance(node, LetNode):
                env[node.names[0]] = node.fn(env, tol)
            elif isinstance(node, GuardNode):
                if not node.fn(env, tol):
                    return DegenerateSample(seed, node.index, node.span, "guard rejected the sample")
        except (G.GeometryError, UnsatisfiableConstraintsError, ZeroDivisionError,
                OverflowError, ValueError) as exc:
            return DegenerateSample(seed, node.index, node.span,
                                    f"{type(exc).__name__}: {exc}")
    center = G.Point(sum(p.x for p in frame) / len(frame), sum(p.y for p in frame) / len(frame)) \
        if frame else G.Point(0.0, 0.0)
    return Bindings(seed, env, max(G.diameter(frame), tol.abs_floor), center)


def _scale(points: Sequence[G.Point], tol: G.TolerancePolicy) -> float:
    return tol.scale if tol.scale is not None else max(G.diameter(points), tol.abs_floor)


def _concyclic(points: Sequence[G.Point], tol: G.TolerancePolicy) -> float:
    scale = _scale(points, tol)
    best = max(combinations(range(len(points)), 3),
               key=lambda t: abs(G.signed_area(*(points[i] for i in t))))
    if abs(G.signed_area(*(points[i] for i in best))) <= tol.abs_floor * scale * scale:
        return math.inf  # all collinear: no circle at all
    circ = G.circle_through(*(points[i] for i in best))
    return max((abs(G.dist(p, circ.center) - circ.radius) for i, p in enumerate(points)
                if i not in best), default=0.0) / scale


def _concurrent(lines: Sequence[G.Line], frame_scale: float, center: G.Point) -> float:
    """Distance of the best-conditioned meet from the other lines.

    The scale grows with the meet's distance from the frame, since its
    coordinates lose absolute accuracy in proportion.
    """
    def sin(l1, l2):
        return abs(l1.nx * l2.ny - l1.ny * l2.nx)

    i, j = max(combinations(range(len(lines)), 2), key=lambda t: sin(lines[t[0]], lines[t[1]]))
    if sin(lines[i], lines[j]) <= 1e-12:
        return 0.0  # all parallel: concurrent at infinity
    x = line_line_intersect(lines[i], lines[j], G.TolerancePolicy(1e-12, 1e-13))
    scale = max(frame_scale, G.dist(x, center))
    return max((abs(l.signed_distance(x)) for k, l in enumerate(lines) if k not in (i, j)),
               default=0.0) / scale


def _tangent(a: Union[G.Line, G.Circle], c: G.Circle) -> float:
    if isinstance(a, G.Line):
        return abs(abs(a.signed_distance(c.center)) - c.radius) / (2.0 * c.radius)
    d = G.dist(a.center, c.center)
    gap = min(abs(d - (a.radius + c.radius)), abs(d - abs(a.radius - c.radius)))
    return gap / (2.0 * max(a.radius, c.radius))


def residual(node: AssertNode, values: list, bindings: Bindings,
             tol: G.TolerancePolicy) -> float:
    """Dimensionless defect of one assertion; 0 means exactly true."""
    k = node.assertion
    if k == "collinear":
        scale = _scale(values, tol)
        return max(abs(G.signed_area(*t)) for t in combinations(values, 3)) / (scale * scale)
    if k == "concyclic":
        return _concyclic(values, tol)
    if k == "concurrent":
        return _concurrent(values, tol.scale or bindings.frame_scale, bindings.frame_center)
    if k == "perpendicular":
        l1, l2 = values
        return abs(l1.nx * l2.nx + l1.ny * l2.ny)
    if k == "parallel":
        l1, l2 = values
        return abs(l1.nx * l2.ny - l1.ny * l2.nx)
    if k == "on_circle":
        p, c = values
        return abs(G.dist(p, c.center) - c.radius) / (2.0 * c.radius)
    if k == "on_line":
        p, l = values
        return abs(l.signed_distance(p)) / (tol.scale or bindings.frame_scale)
    if k == "tangent":
        return _tangent(*values)
    if k == "equal_length":
        p, q, r, s = values
        d1, d2 = G.dist(p, q), G.dist(r, s)
        return abs(d1 - d2) / max(d1, d2, tol.abs_floor)
    if k == "equal_angle":
        return abs(G.angle_at(*values[:3]) - G.angle_at(*values[3:]))
    if k == "ratio_equals":
        s1, s2, s3, s4 = map(float, values)
        big = max(abs(s1 * s4), abs(s2 * s3))
        return abs(s1 * s4 - s2 * s3) / big if big > 0.0 else 0.0
    if k == "midpoint_of":
        m, p, q = values
        return G.dist(m, G.midpoint(p, q)) / max(G.dist(p, q), tol.abs_floor)
    raise ValueError(f"assertion {k!r} has no per-sample residual")


def assertion_values(node: AssertNode, bindings: Bindings, tol: G.TolerancePolicy) -> list:
    return [fn(bindings.values, tol) for fn in node.args]
