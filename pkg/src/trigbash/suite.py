"""Run every lemma check on one random triangle, each against its own bound.

A configuration for each check is built from the triangle plus extra random
draws (cevian points, transversals, chords). Each check yields a
``SuiteResult`` holding the measured value and the bound it must meet, already
made dimensionless by the triangle's scale where the lemma is about lengths.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Iterator

from . import lemmas as L
from .constructions import (
    circumcircle,
    foot,
    isogonal_line,
    line_line_intersect,
    triangle_center,
)
from .geom import Line, Point, Triangle, midpoint
from .sampling import TriangleConstraints, mix, sample_triangle


@dataclass(frozen=True)
class SuiteResult:
    name: str
    value: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.value <= self.bound


def _lerp(p: Point, q: Point, t: float) -> Point:
    return p + (q - p) * t


def _sines(t: Triangle, rng) -> float:
    return L.law_of_sines_residuals(t).max_abs / t.scale


def _cosines(t: Triangle, rng) -> float:
    return L.law_of_cosines_residuals(t).max_abs / t.scale ** 2


def _identities(t: Triangle, rng) -> float:
    return L.trig_identity_residuals(rng.uniform(-10, 10), rng.uniform(-10, 10)).max_abs


def _ratio(t: Triangle, rng) -> float:
    return L.ratio_lemma_residual(t.A, t.B, t.C, _lerp(t.B, t.C, rng.uniform(0.05, 0.95)))


def _perpendicular(t: Triangle, rng) -> float:
    # D on the perpendicular to AC through B, so AC is perpendicular to BD
    f = foot(t.B, Line.through(t.A, t.C))
    d = _lerp(t.B, f, rng.uniform(0.2, 3.0))
    gap, perp = L.perpendicularity_criterion(t.A, t.B, t.C, d)
    return abs(gap) / t.scale ** 2 if perp else math.inf


def _steiner(t: Triangle, rng) -> float:
    d = _lerp(t.B, t.C, rng.uniform(0.05, 0.95))
    iso = isogonal_line(t.A, t.B, t.C, Line.through(t.A, d))
    e = line_line_intersect(iso, Line.through(t.B, t.C))
    return L.steiner_residual(t.A, t.B, t.C, d, e)


def _symmedian(t: Triangle, rng) -> float:
    return L.symmedian_checks(t.A, t.B, t.C).max_abs


def _ratio_angle(t: Triangle, rng) -> float:
    ang = t.angles[0]
    target = rng.uniform(0.01, ang - 0.01)
    r = L.sine_ratio(ang, target)
    return abs(L.sine_ratio(ang, L.solve_ratio_angle(ang, r)) - r) / r


def _interior_triple(t: Triangle, k: Point) -> L.CevianTriple:
    side = lambda v, p, q: line_line_intersect(Line.through(v, k), Line.through(p, q))
    return L.CevianTriple(side(t.A, t.B, t.C), side(t.B, t.C, t.A), side(t.C, t.A, t.B))


def _interior_point(t: Triangle, rng) -> Point:
    w = [rng.uniform(0.1, 1.0) for _ in range(3)]
    s = sum(w)
    return t.A * (w[0] / s) + t.B * (w[1] / s) + t.C * (w[2] / s)


def _ceva_concurrent(t: Triangle, rng) -> float:
    triple = _interior_triple(t, _interior_point(t, rng))
    return abs(L.ceva_product(t.A, t.B, t.C, triple) - 1.0)


def _ceva_transversal(t: Triangle, rng) -> float:
    f = _lerp(t.A, t.B, rng.uniform(0.1, 0.9))
    e = _lerp(t.C, t.A, rng.uniform(0.1, 0.9))
    d = line_line_intersect(Line.through(e, f), Line.through(t.B, t.C))
    return abs(L.ceva_product(t.A, t.B, t.C, L.CevianTriple(d, e, f)) + 1.0)


def _trig_ceva(t: Triangle, rng) -> float:
    triple = _interior_triple(t, _interior_point(t, rng))
    return abs(L.trig_ceva_product(t.A, t.B, t.C, triple) - 1.0)


def _median_parallel(t: Triangle, rng) -> float:
    s = rng.uniform(0.1, 0.9)
    parallel, concurrent = L.median_parallel_equiv(
        t.A, t.B, t.C, _lerp(t.A, t.B, s), _lerp(t.A, t.C, s))
    return 0.0 if parallel and concurrent else math.inf


def _desargues(t: Triangle, rng) -> float:
    o = _interior_point(t, rng) + Point(rng.uniform(-1, 1), rng.uniform(-1, 1)) * t.scale
    ks = [rng.choice((-1, 1)) * rng.uniform(0.3, 0.8) + 1.0 for _ in range(3)]
    other = Triangle(*(o + (v - o) * k for v, k in zip(t.vertices, ks)))
    return max(L.desargues_residuals(t, other))


def _chord_through(circ, m: Point, angle: float) -> tuple[Point, Point]:
    line = Line.from_direction(m, math.cos(angle), math.sin(angle))
    off = line.signed_distance(circ.center)
    base = circ.center - line.normal * off
    half = math.sqrt(circ.radius ** 2 - off * off)
    return base + line.direction * half, base - line.direction * half


def _butterfly(t: Triangle, rng) -> float:
    circ = circumcircle(*t.vertices)
    p, q = t.B, t.C
    m = midpoint(p, q)
    a, b = _chord_through(circ, m, rng.uniform(0, math.pi))
    c, d = _chord_through(circ, m, rng.uniform(0, math.pi))
    return L.butterfly_residual(circ, p, q, a, b, c, d)


def _polygon(t: Triangle, rng) -> float:
    circ = circumcircle(*t.vertices)
    cuts = sorted(rng.uniform(0, 2 * math.pi) for _ in range(5))
    pts = [circ.center + Point(math.cos(u), math.sin(u)) * circ.radius for u in cuts]
    k = triangle_center(pts[0], pts[2], pts[3], "centroid")
    return abs(L.polygon_sine_product(pts, k) - 1.0)


CHECKS: dict[str, tuple[Callable[[Triangle, random.Random], float], float]] = {
    "law_of_sines": (_sines, 1e-10),
    "law_of_cosines": (_cosines, 1e-10),
    "trig_identities": (_identities, 1e-13),
    "ratio_lemma": (_ratio, 1e-10),
    "perpendicularity": (_perpendicular, 1e-9),
    "steiner": (_steiner, 1e-9),
    "symmedian": (_symmedian, 1e-9),
    "solve_ratio_angle": (_ratio_angle, 1e-11),
    "ceva_concurrent": (_ceva_concurrent, 1e-10),
    "menelaus_transversal": (_ceva_transversal, 1e-10),
    "trig_ceva": (_trig_ceva, 1e-9),
    "median_parallel": (_median_parallel, 0.0),
    "desargues": (_desargues, 1e-9),
    "butterfly": (_butterfly, 1e-9),
    "polygon_sine_product": (_polygon, 1e-9),
}

SUITE_CONSTRAINTS = TriangleConstraints(min_angle=math.radians(10.0))


def run_triangle(t: Triangle, rng: random.Random) -> Iterator[SuiteResult]:
    for name, (check, bound) in CHECKS.items():
        yield SuiteResult(name, check(t, rng), bound)


def run_suite(n: int, seed: int) -> list[SuiteResult]:
    """Failures only; an empty list means every check on every triangle held."""
    failures = []
    for i in range(n):
        rng = random.Random(mix(seed, i))
        t = sample_triangle(SUITE_CONSTRAINTS, rng)
        failures.extend(r for r in run_triangle(t, rng) if not r.ok)
    return failures
