"""Type checking and compilation of a parsed scene.

Each statement becomes one node. Expressions are compiled into closures
``fn(env, tol)`` so evaluation does no further dispatch on syntax.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .. import constructions as K
from .. import geom as G
from ..sampling import TriangleConstraints
from .ast import (
    Assert,
    Call,
    Expr,
    Field,
    FreePoint,
    FreeTriangle,
    Keyword,
    Let,
    Name,
    Number,
    Require,
    SceneAST,
    Span,
)
from .parser import ParseError

POINT, LINE, CIRCLE = "point", "line", "circle"
SCALAR, ANGLE, NUMBER, BOOL = "scalar", "angle", "number", "bool"
KIND, MODE = "center kind", "line mode"
INCIRCLE, MIXTILINEAR, PAIR = "incircle result", "mixtilinear result", "point pair"

Fn = Callable[[dict, G.TolerancePolicy], Any]

CENTER_WORDS = {k.value: k for k in K.CenterKind}
MODE_WORDS = ("parallel", "perpendicular")

FIELDS = {
    INCIRCLE: {"circle": CIRCLE, "touch_D": POINT, "touch_E": POINT, "touch_F": POINT},
    MIXTILINEAR: {"circle": CIRCLE, "touch_K": POINT, "touch_L": POINT, "touch_M": POINT},
    PAIR: {"first": POINT, "second": POINT},
}

# parameter kinds: a concrete type, "curve" (line or circle), "scalar" (any
# number-valued type), "angle" (angle-valued or a suffixed literal) and
# "orientation" (the literal 1 or -1)
CURVE, ORIENTATION = "curve", "orientation"


class ResolveError(ParseError):
    """A well-formed scene that is ill-typed or otherwise unusable."""


@dataclass(frozen=True)
class Signature:
    params: tuple[str, ...]
    result: str
    impl: Callable[..., Any]
    variadic_min: Optional[int] = None  # repeat the single param, at least this many


def _sig(params, result, impl, variadic_min=None) -> Signature:
    return Signature(tuple(params), result, impl, variadic_min)


FUNCTIONS: dict[str, Signature] = {
    # geometry primitives
    "line": _sig((POINT, POINT), LINE, lambda tol, p, q: G.Line.through(p, q)),
    "circle": _sig((POINT, POINT), CIRCLE, lambda tol, c, p: G.Circle(c, G.dist(c, p))),
    "center": _sig((CIRCLE,), POINT, lambda tol, c: c.center),
    "radius": _sig((CIRCLE,), SCALAR, lambda tol, c: c.radius),
    "dist": _sig((POINT, POINT), SCALAR, lambda tol, p, q: G.dist(p, q)),
    "signed_area": _sig((POINT, POINT, POINT), SCALAR, lambda tol, a, b, c: G.signed_area(a, b, c)),
    "angle_at": _sig((POINT, POINT, POINT), ANGLE, lambda tol, a, b, c: G.angle_at(a, b, c)),
    "directed_ratio": _sig((POINT, POINT, POINT), SCALAR,
                           lambda tol, x, p, q: G.directed_ratio(x, p, q, tol)),
    "midpoint": _sig((POINT, POINT), POINT, lambda tol, p, q: G.midpoint(p, q)),
    "is_collinear": _sig((POINT,), BOOL, lambda tol, *ps: G.is_collinear(ps, tol), 3),
    "is_concyclic": _sig((POINT,) * 4, BOOL, lambda tol, *ps: G.is_concyclic(*ps, tol)),
    "is_perpendicular": _sig((LINE, LINE), BOOL, lambda tol, l1, l2: G.is_perpendicular(l1, l2, tol)),
    "is_parallel": _sig((LINE, LINE), BOOL, lambda tol, l1, l2: G.is_parallel(l1, l2, tol)),
    # constructions
    "line_line_intersect": _sig((LINE, LINE), POINT,
                                lambda tol, l1, l2: K.line_line_intersect(l1, l2, tol)),
    "second_intersection": _sig((LINE, CIRCLE, POINT), POINT,
                                lambda tol, l, c, p: K.second_intersection(l, c, p, tol).point),
    "circumcircle": _sig((POINT,) * 3, CIRCLE, lambda tol, a, b, c: K.circumcircle(a, b, c)),
    "incircle": _sig((POINT,) * 3, INCIRCLE, lambda tol, a, b, c: K.incircle(a, b, c)),
    "excircle": _sig((POINT,) * 4, INCIRCLE, lambda tol, a, b, c, v: K.excircle(a, b, c, v)),
    "triangle_center": _sig((POINT, POINT, POINT, KIND), POINT,
                            lambda tol, a, b, c, k: K.triangle_center(a, b, c, k)),
    "arc_midpoint": _sig((CIRCLE, POINT, POINT, POINT), POINT,
                         lambda tol, c, p, q, w: K.arc_midpoint(c, p, q, w, tol)),
    "tangent_line": _sig((CIRCLE, POINT), LINE, lambda tol, c, p: K.tangent_line(c, p, tol)),
    "tangents_from": _sig((CIRCLE, POINT), PAIR, lambda tol, c, p: K.tangents_from(c, p, tol)),
    "foot": _sig((POINT, LINE), POINT, lambda tol, p, l: K.foot(p, l)),
    "reflect": _sig((POINT, LINE), POINT, lambda tol, p, l: K.reflect(p, l)),
    "antipode": _sig((POINT, CIRCLE), POINT, lambda tol, p, c: K.antipode(p, c, tol)),
    "through": _sig((POINT, LINE, MODE), LINE, lambda tol, p, l, m: K.through(p, l, m)),
    "isogonal_line": _sig((POINT, POINT, POINT, LINE), LINE,
                          lambda tol, a, b, c, l: K.isogonal_line(a, b, c, l, tol)),
    "rotate_ray": _sig((POINT, POINT, ANGLE, ORIENTATION), LINE,
                       lambda tol, o, p, th, s: K.rotate_ray(o, p, th, s)),
    "mixtilinear_incircle": _sig((POINT,) * 3, MIXTILINEAR,
                                 lambda tol, a, b, c: K.mixtilinear_incircle(a, b, c)),
}

SOLVER = "solve_on_curve"
LOCI = {"segment": 2, "ray": 2, "arc": 4}

# assertion kind -> (parameter kinds, variadic minimum)
ASSERTIONS: dict[str, tuple[tuple[str, ...], Optional[int]]] = {
    "collinear": ((POINT,), 3),
    "concyclic": ((POINT,), 4),
    "concurrent": ((LINE,), 3),
    "perpendicular": ((LINE, LINE), None),
    "parallel": ((LINE, LINE), None),
    "on_circle": ((POINT, CIRCLE), None),
    "on_line": ((POINT, LINE), None),
    "tangent": ((CURVE, CIRCLE), None),
    "equal_length": ((POINT,) * 4, None),
    "equal_angle": ((POINT,) * 6, None),
    "ratio_equals": ((SCALAR,) * 4, None),
    "midpoint_of": ((POINT,) * 3, None),
    "fixed": ((POINT, POINT), None),
}


@dataclass(frozen=True)
class Node:
    index: int
    kind: str  # "free_triangle", "free_point", "let", "require", "assert"
    span: Span
    names: tuple[str, ...] = ()
    value_type: Optional[str] = None


@dataclass(frozen=True)
class TriangleNode(Node):
    constraints: TriangleConstraints = field(default_factory=TriangleConstraints)


@dataclass(frozen=True)
class PointNode(Node):
    locus: str = ""  # "segment", "ray", "line", "circle", "arc"
    args: tuple[Fn, ...] = ()


@dataclass(frozen=True)
class LetNode(Node):
    fn: Optional[Fn] = None


@dataclass(frozen=True)
class GuardNode(Node):
    fn: Optional[Fn] = None


@dataclass(frozen=True)
class AssertNode(Node):
    assertion: str = ""
    args: tuple[Fn, ...] = ()
    arg_types: tuple[str, ...] = ()
    label: str = ""
    fixed_against: Optional[str] = None


@dataclass(frozen=True)
class Scene:
    ast: SceneAST
    nodes: tuple[Node, ...]
    types: dict = field(default_factory=dict, compare=False)

    @property
    def title(self) -> str:
        return self.ast.meta_value("title")

    @property
    def anchor(self) -> str:
        return self.ast.meta_value("paper")

    @property
    def assertions(self) -> tuple[AssertNode, ...]:
        return tuple(n for n in self.nodes if isinstance(n, AssertNode))

    @property
    def free_nodes(self) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if n.kind in ("free_triangle", "free_point"))

    @property
    def pins_frame(self) -> bool:
        return any(a.fixed_against is not None for a in self.assertions)


def _fail(span: Span, message: str, expected=()) -> ResolveError:
    return ResolveError(span.line, span.column, message, list(expected))


def _span_of(e: Expr) -> Span:
    return e.span


class _Resolver:
    def __init__(self, ast: SceneAST):
        self.ast = ast
        self.types: dict[str, str] = {}

    # expressions

    def compile(self, e: Expr) -> tuple[str, Fn]:
        if isinstance(e, Name):
            name = e.id
            return self.types[name], lambda env, tol: env[name]
        if isinstance(e, Number):
            if e.unit is None:
                v = e.value
                return NUMBER, lambda env, tol: v
            v = math.radians(e.value) if e.unit == "deg" else e.value
            return ANGLE, lambda env, tol: v
        if isinstance(e, Keyword):
            if e.word in CENTER_WORDS:
                k = CENTER_WORDS[e.word]
                return KIND, lambda env, tol: k
            w = e.word
            return MODE, lambda env, tol: w
        if isinstance(e, Field):
            ttype, tfn = self.compile(e.target)
            fields = FIELDS.get(ttype)
            if fields is None or e.name not in fields:
                raise _fail(e.span, f"{ttype} has no field {e.name!r}",
                            sorted(fields) if fields else [])
            attr = e.name
            return fields[attr], lambda env, tol: getattr(tfn(env, tol), attr)
        if isinstance(e, Call):
            return self.compile_call(e)
        raise TypeError(e)

    def compile_call(self, e: Call) -> tuple[str, Fn]:
        if e.func == SOLVER:
            raise _fail(e.span, f"{SOLVER} needs a 'where' clause and must be the whole right-hand side")
        if e.func in LOCI:
            raise _fail(e.span, f"{e.func} is only valid as the locus of a free point")
        sig = FUNCTIONS.get(e.func)
        if sig is None:
            raise _fail(e.span, f"unknown function {e.func!r}")
        params = self.expand(sig.params, sig.variadic_min, len(e.args), e.func, e.span)
        fns = [self.check_arg(a, p, e.func) for a, p in zip(e.args, params)]
        impl = sig.impl
        return sig.result, lambda env, tol: impl(tol, *[f(env, tol) for f in fns])

    @staticmethod
    def expand(params, variadic_min, n, what, span) -> tuple[str, ...]:
        if variadic_min is not None:
            if n < variadic_min:
                raise _fail(span, f"{what} expects at least {variadic_min} arguments, got {n}")
            return params * n
        if n != len(params):
            raise _fail(span, f"{what} expects {len(params)} arguments, got {n}")
        return params

    def check_arg(self, arg: Expr, want: str, func: str) -> Fn:
        have, fn = self.compile(arg)
        if want == ORIENTATION:
            if not (isinstance(arg, Number) and arg.unit is None and arg.value in (1.0, -1.0)):
                raise _fail(_span_of(arg), f"{func} orientation must be the literal 1 or -1")
            return fn
        if want == ANGLE and have == NUMBER:
            raise _fail(_span_of(arg), "angle literal needs a 'deg' or 'rad' suffix", ["deg", "rad"])
        ok = {
            CURVE: have in (LINE, CIRCLE),
            SCALAR: have in (SCALAR, ANGLE, NUMBER),
            ANGLE: have == ANGLE,
        }.get(want, have == want)
        if not ok:
            raise _fail(_span_of(arg), f"{func} expects a {want} here, got a {have}", [want])
        return fn

    # statements

    def triangle(self, i: int, s: FreeTriangle) -> TriangleNode:
        names = s.names
        acute, scalene, obtuse, iso, min_angle, orders = False, False, None, None, 0.0, []

        def vertex(v: str, span: Span) -> int:
            if v not in names:
                raise _fail(span, f"{v!r} is not a vertex of this triangle", list(names))
            return names.index(v)

        def side(text: str, span: Span) -> tuple[int, int]:
            splits = [(text[:k], text[k:]) for k in range(1, len(text))]
            hits = [(names.index(p), names.index(q)) for p, q in splits
                    if p in names and q in names and p != q]
            if len(hits) != 1:
                raise _fail(span, f"{text!r} does not name a side of this triangle")
            return hits[0]

        for c in s.constraints:
            if c.kind == "acute":
                acute = True
            elif c.kind == "scalene":
                scalene = True
            elif c.kind == "obtuse_at":
                obtuse = vertex(c.args[0], c.span)
            elif c.kind == "min_angle":
                lit = c.args[0]
                min_angle = math.radians(lit.value) if lit.unit == "deg" else lit.value
            elif c.kind == "isosceles":
                s1, s2 = side(c.args[0], c.span), side(c.args[1], c.span)
                shared = set(s1) & set(s2)
                if len(shared) != 1:
                    raise _fail(c.span, "isosceles needs two sides sharing one vertex")
                iso = shared.pop()
            else:
                orders.append((side(c.args[0], c.span), side(c.args[1], c.span)))
        if acute and obtuse is not None:
            raise _fail(s.span, "a triangle cannot be both acute and obtuse")
        if scalene and iso is not None:
            raise _fail(s.span, "a triangle cannot be both scalene and isosceles")
        if not (0.0 <= min_angle < math.pi / 3):
            raise _fail(s.span, "min_angle must lie in [0, 60deg)")
        for v in names:
            self.types[v] = POINT
        tc = TriangleConstraints(acute, obtuse, scalene, iso, min_angle, tuple(orders))
        return TriangleNode(i, "free_triangle", s.span, names, POINT, tc)

    def free_point(self, i: int, s: FreePoint) -> PointNode:
        loc = s.locus
        if isinstance(loc, Call) and loc.func in LOCI:
            want = (CIRCLE, POINT, POINT, POINT) if loc.func == "arc" else (POINT, POINT)
            self.expand(want, None, len(loc.args), loc.func, loc.span)
            fns = tuple(self.check_arg(a, t, loc.func) for a, t in zip(loc.args, want))
            kind = loc.func
        elif isinstance(loc, Call) and loc.func == "line":
            self.expand((POINT, POINT), None, len(loc.args), "line", loc.span)
            fns = tuple(self.check_arg(a, POINT, "line") for a in loc.args)
            kind = "line"
        else:
            have, fn = self.compile(loc)
            if have != CIRCLE:
                raise _fail(_span_of(loc), "a free point lies on segment(P, Q), ray(P, Q), "
                            "line(P, Q), arc(c, P, Q, W) or a circle",
                            ["segment", "ray", "line", "arc", "circle"])
            fns, kind = (fn,), "circle"
        self.types[s.name] = POINT
        return PointNode(i, "free_point", s.span, (s.name,), POINT, kind, fns)

    def let(self, i: int, s: Let) -> LetNode:
        e = s.expr
        if isinstance(e, Call) and e.func == SOLVER:
            if s.where is None:
                raise _fail(e.span, f"{SOLVER} needs a 'where' clause")
            self.expand((CURVE, POINT, POINT), None, len(e.args), SOLVER, e.span)
            curve = self.check_arg(e.args[0], CURVE, SOLVER)
            p0 = self.check_arg(e.args[1], POINT, SOLVER)
            p1 = self.check_arg(e.args[2], POINT, SOLVER)
            self.types[s.name] = POINT
            lhs = self.check_arg(s.where[0], SCALAR, "where")
            rhs = self.check_arg(s.where[1], SCALAR, "where")
            fn = _solver(s.name, curve, p0, p1, lhs, rhs)
            return LetNode(i, "let", s.span, (s.name,), POINT, fn)
        if s.where is not None:
            raise _fail(s.span, f"'where' is only allowed with {SOLVER}")
        vtype, fn = self.compile(e)
        if vtype in (KIND, MODE):
            raise _fail(_span_of(e), f"cannot bind a {vtype}")
        self.types[s.name] = vtype
        return LetNode(i, "let", s.span, (s.name,), vtype, fn)

    def require(self, i: int, s: Require) -> GuardNode:
        etype, fn = self.compile(s.expr)
        if s.compare is None:
            if etype != BOOL:
                raise _fail(_span_of(s.expr), f"require needs a predicate, got a {etype}",
                            ["is_collinear", "is_concyclic", "is_perpendicular", "is_parallel"])
            test = fn
        else:
            if etype not in (SCALAR, ANGLE, NUMBER):
                raise _fail(_span_of(s.expr), f"cannot compare a {etype}")
            op, other = s.compare
            otype, ofn = self.compile(other)
            if otype not in (SCALAR, ANGLE, NUMBER):
                raise _fail(_span_of(other), f"cannot compare a {otype}")
            for a, at, bt in ((other, otype, etype), (s.expr, etype, otype)):
                if at == NUMBER and bt == ANGLE and a.value != 0.0:
                    raise _fail(_span_of(a), "angle literal needs a 'deg' or 'rad' suffix",
                                ["deg", "rad"])
            cmp = {"<": float.__lt__, ">": float.__gt__,
                   "<=": float.__le__, ">=": float.__ge__}[op]
            test = lambda env, tol: cmp(float(fn(env, tol)), float(ofn(env, tol)))
        if s.negated:
            inner = test
            test = lambda env, tol: not inner(env, tol)
        return GuardNode(i, "require", s.span, (), BOOL, test)

    def assertion(self, i: int, s: Assert, label: str) -> AssertNode:
        signature = ASSERTIONS.get(s.kind)
        if signature is None:
            raise _fail(s.span, f"unknown assertion {s.kind!r}", sorted(ASSERTIONS))
        params, vmin = signature
        params = self.expand(params, vmin, len(s.args), s.kind, s.span)
        fns, types = [], []
        for a, p in zip(s.args, params):
            fn = self.check_arg(a, p, s.kind)
            fns.append(fn)
            types.append(self.compile(a)[0])
        fixed_against = None
        if s.kind == "fixed":
            target = s.args[1]
            if not isinstance(target, Name):
                raise _fail(_span_of(target), "fixed needs the name of a free point", ["free point"])
            fixed_against = target.id
        return AssertNode(i, "assert", s.span, (), None, s.kind, tuple(fns), tuple(types),
                          label, fixed_against)

    def run(self) -> Scene:
        nodes: list[Node] = []
        counts: dict[str, int] = {}
        for i, s in enumerate(self.ast.statements):
            if isinstance(s, FreeTriangle):
                nodes.append(self.triangle(i, s))
            elif isinstance(s, FreePoint):
                nodes.append(self.free_point(i, s))
            elif isinstance(s, Let):
                nodes.append(self.let(i, s))
            elif isinstance(s, Require):
                nodes.append(self.require(i, s))
            else:
                counts[s.kind] = counts.get(s.kind, 0) + 1
                label = f"{s.kind}#{counts[s.kind]}"
                nodes.append(self.assertion(i, s, label))
        scene = Scene(self.ast, tuple(nodes), dict(self.types))
        self.check_fixed(scene)
        return scene

    @staticmethod
    def check_fixed(scene: Scene) -> None:
        fixed = [a for a in scene.assertions if a.fixed_against is not None]
        if not fixed:
            return
        triangles = [n for n in scene.free_nodes if n.kind == "free_triangle"]
        points = [n for n in scene.free_nodes if n.kind == "free_point"]
        for a in fixed:
            if len(triangles) != 1 or len(points) != 1 or points[0].names[0] != a.fixed_against:
                raise _fail(a.span, "fixed needs a canonical frame: exactly one free triangle "
                            "and a single free point, named as the second argument")


def _solver(name: str, curve_fn: Fn, p0_fn: Fn, p1_fn: Fn, lhs: Fn, rhs: Fn) -> Fn:
    def solve(env: dict, tol: G.TolerancePolicy) -> G.Point:
        curve = curve_fn(env, tol)
        p0, p1 = p0_fn(env, tol), p1_fn(env, tol)
        t0, t1 = K.curve_param(curve, p0), K.curve_param(curve, p1)
        if isinstance(curve, G.Circle) and t1 <= t0:
            t1 += 2.0 * math.pi
        # open bracket: the end points themselves are often degenerate
        delta = 1e-9 * (t1 - t0)
        scope = dict(env)

        def f(p: G.Point) -> float:
            scope[name] = p
            return float(lhs(scope, tol)) - float(rhs(scope, tol))

        p = K.solve_on_curve(curve, f, (t0 + delta, t1 - delta), tol)
        # a sign change across a pole is not a root
        if abs(f(p)) > 1e-9:
            raise K.NoSignChangeError("bracket straddles a discontinuity, not a root", t0, t1)
        return p

    return solve


def resolve(ast: SceneAST) -> Scene:
    """Type-check ``ast``; raises ResolveError (a ParseError) with a source position."""
    return _Resolver(ast).run()
