"""SVG drawings of one scene instance.

Points become labeled dots, lines are clipped to a padded bounding box of the
points, and circles become ``<circle>`` elements. Output depends only on the
scene and the seed.
"""

from __future__ import annotations

import math
from typing import Optional
from xml.sax.saxutils import escape

from . import geom as G
from .dsl import Bindings, DegenerateSample, Scene, evaluate
from .dsl.resolve import TriangleNode
from .sampling import mix

MAX_ATTEMPTS = 1000
PAD = 0.15
CANVAS = 600.0


class PersistentDegeneracyError(RuntimeError):
    def __init__(self, seed: int, attempts: int, last: Optional[DegenerateSample]):
        where = f" (last: line {last.span.line}, {last.reason})" if last else ""
        super().__init__(f"no non-degenerate sample for seed {seed} "
                         f"in {attempts} attempts{where}")
        self.seed = seed
        self.last = last


def instantiate(scene: Scene, seed: int, attempts: int = MAX_ATTEMPTS) -> Bindings:
    """First non-degenerate sample among ``seed``, ``mix(seed, 1)``, ..."""
    last = None
    for k in range(attempts):
        s = seed if k == 0 else mix(seed, k)
        out = evaluate(scene, s, frame_seed=seed)
        if not isinstance(out, DegenerateSample):
            return out
        last = out
    raise PersistentDegeneracyError(seed, attempts, last)


def _objects(scene: Scene, b: Bindings):
    points: dict[str, G.Point] = {}
    lines: dict[str, G.Line] = {}
    circles: dict[str, G.Circle] = {}

    def add(name, v):
        if isinstance(v, G.Point):
            points[name] = v
        elif isinstance(v, G.Line):
            lines[name] = v
        elif isinstance(v, G.Circle):
            circles[name] = v
        elif hasattr(v, "_fields"):
            for f in v._fields:
                add(f"{name}.{f}", getattr(v, f))

    for name, v in b.values.items():
        add(name, v)
    sides = []
    for node in scene.nodes:
        if isinstance(node, TriangleNode):
            a, bb, c = (b.values[n] for n in node.names)
            sides.append((a, bb, c))
    return points, lines, circles, sides


def _clip(line: G.Line, box) -> Optional[tuple[G.Point, G.Point]]:
    """Segment of ``line`` inside the box (Liang-Barsky on a long chord)."""
    x0, y0, x1, y1 = box
    foot = G.Point(line.nx * line.d, line.ny * line.d)
    direction = G.Point(line.ny, -line.nx)
    t0, t1 = -math.inf, math.inf
    for p, q, lo, hi in ((foot.x, direction.x, x0, x1), (foot.y, direction.y, y0, y1)):
        if abs(q) < 1e-15:
            if not lo <= p <= hi:
                return None
            continue
        a, b = (lo - p) / q, (hi - p) / q
        t0, t1 = max(t0, min(a, b)), min(t1, max(a, b))
    if t0 >= t1:
        return None
    return foot + direction * t0, foot + direction * t1


def _f(x: float) -> str:
    return f"{x:.4f}"


def render_svg(scene: Scene, seed: int) -> str:
    """SVG text for the first non-degenerate instance at ``seed``."""
    b = instantiate(scene, seed)
    points, lines, circles, sides = _objects(scene, b)
    pts = list(points.values()) or [G.Point(0.0, 0.0)]
    xs, ys = [p.x for p in pts], [p.y for p in pts]
    extent = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    pad = PAD * extent
    box = (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)
    width, height = box[2] - box[0], box[3] - box[1]
    unit = max(width, height) / CANVAS  # one canvas pixel in scene units
    stroke, dot, font = _f(1.2 * unit), _f(3.0 * unit), _f(13.0 * unit)

    def sx(x: float) -> str:
        return _f(x)

    def sy(y: float) -> str:
        return _f(-y)  # svg's y axis points down

    title = escape(scene.title or "scene")
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_f(box[0])} {_f(-box[3])} {_f(width)} {_f(height)}" '
        f'width="{_f(CANVAS * width / max(width, height))}" '
        f'height="{_f(CANVAS * height / max(width, height))}">',
        f"<title>{title} (seed {seed})</title>",
        f'<rect x="{_f(box[0])}" y="{_f(-box[3])}" width="{_f(width)}" height="{_f(height)}" '
        f'fill="white"/>',
        f'<g fill="none" stroke="#888" stroke-width="{stroke}">',
    ]
    for name in sorted(circles):
        c = circles[name]
        out.append(f'<circle cx="{sx(c.center.x)}" cy="{sy(c.center.y)}" r="{_f(c.radius)}">'
                   f"<title>{escape(name)}</title></circle>")
    for name in sorted(lines):
        seg = _clip(lines[name], box)
        if seg is None:
            continue
        p, q = seg
        out.append(f'<line x1="{sx(p.x)}" y1="{sy(p.y)}" x2="{sx(q.x)}" y2="{sy(q.y)}">'
                   f"<title>{escape(name)}</title></line>")
    out.append("</g>")
    for tri in sides:
        coords = " ".join(f"{sx(p.x)},{sy(p.y)}" for p in tri)
        out.append(f'<polygon points="{coords}" fill="none" stroke="black" '
                   f'stroke-width="{stroke}"/>')
    out.append(f'<g font-family="sans-serif" font-size="{font}">')
    for name in sorted(points):
        p = points[name]
        out.append(f'<circle cx="{sx(p.x)}" cy="{sy(p.y)}" r="{dot}" fill="black"/>')
        out.append(f'<text x="{_f(p.x + 1.5 * float(dot))}" y="{_f(-p.y - 1.5 * float(dot))}">'
                   f"{escape(name)}</text>")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
