import math
import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from trigbash.geom import Point, Triangle, signed_area
from trigbash.sampling import TriangleConstraints, sample_triangle

coord = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False, allow_infinity=False)
points = st.builds(Point, coord, coord)


@st.composite
def triangles(draw, min_angle_deg: float = 10.0):
    """Random ccw triangles with every angle above ``min_angle_deg``."""
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return sample_triangle(TriangleConstraints(min_angle=math.radians(min_angle_deg)),
                           random.Random(seed))


def rotate(p: Point, theta: float, about: Point = Point(0.0, 0.0)) -> Point:
    c, s = math.cos(theta), math.sin(theta)
    v = p - about
    return about + Point(c * v.x - s * v.y, s * v.x + c * v.y)


@pytest.fixture
def rng():
    return random.Random(12345)


MUTANT_DIR = Path(__file__).parent / "mutants"


@pytest.fixture
def mutants():
    return sorted(MUTANT_DIR.glob("*.geo"))


def used_identifiers(source):
    """(line, column, name) of every identifier use (not declaration)."""
    from trigbash.dsl.parser import tokenize_line
    out = []
    for n, raw in enumerate(source.splitlines(), start=1):
        toks = tokenize_line(raw, n)
        if not toks or toks[0].kind != "id" or toks[0].text not in ("let", "assert", "require", "free"):
            continue
        for k, tok in enumerate(toks):
            nxt = toks[k + 1] if k + 1 < len(toks) else None
            if tok.kind == "id" and tok.text[0].isupper() and k > 1 and \
                    not (nxt and nxt.kind == "sym" and nxt.text == "(") and \
                    toks[k - 1].text not in ("let", "point", "triangle", "."):
                out.append((n, tok.column, tok.text))
    return out


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record the one-line outcome of an acceptance criterion for the summary."""
    def record(number: int, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(ACCEPTANCE_LINES[number])
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
