"""One test per acceptance criterion; each records a PASS/FAIL summary line."""

import math
import random
import time

from trigbash import cli
from trigbash import lemmas as L
from trigbash.constructions import (
    arc_midpoint,
    circumcircle,
    line_line_intersect,
    mixtilinear_incircle,
    triangle_center,
)
from trigbash.corpus import corpus_dir, load_corpus
from trigbash.dsl import ParseError, load, parse, pretty
from trigbash.dsl.parser import tokenize_line
from trigbash.dsl.resolve import ASSERTIONS, FUNCTIONS
from trigbash.geom import Line, Point, dist, midpoint
from trigbash.sampling import TriangleConstraints, sample_triangle
from trigbash.suite import CHECKS, run_suite
from trigbash.verifier import RunConfig, run

from conftest import MUTANT_DIR, used_identifiers

CORPUS = load_corpus()


def test_criterion_1_lemma_suite(criterion):
    start = time.perf_counter()
    failures = run_suite(10_000, seed=20240601)
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 30.0
    worst = {}
    for f in failures:
        worst[f.name] = max(worst.get(f.name, 0.0), f.value)
    criterion(1, ok, f"10000 triangles x {len(CHECKS)} checks, {len(failures)} failures"
                     f"{' ' + str(worst) if worst else ''}, {elapsed:.1f} s (limit 30 s)")
    assert ok


def test_criterion_2_inverse_solver(criterion):
    rng = random.Random(2)
    worst = 0.0
    for _ in range(1000):
        t = rng.uniform(0.05, math.pi - 0.05)
        alpha = rng.uniform(0.01, t - 0.01)
        worst = max(worst, abs(L.solve_ratio_angle(t, L.sine_ratio(t, alpha)) - alpha))
    monotone = 0
    for _ in range(100):
        t = rng.uniform(0.1, math.pi - 0.1)
        vals = [L.sine_ratio(t, t * (k + 1) / 1001) for k in range(1000)]
        monotone += all(b - a > 0 for a, b in zip(vals, vals[1:]))
    ok = worst <= 1e-10 and monotone == 100
    criterion(2, ok, f"round-trip max error {worst:.2e} (limit 1e-10), "
                     f"monotone grids {monotone}/100")
    assert ok


def test_criterion_3_sign_convention(criterion):
    rng = random.Random(3)
    cons = TriangleConstraints(min_angle=math.radians(10.0))
    labels = {"concurrent": [], "collinear": []}
    for k in range(2000):
        t = sample_triangle(cons, rng)
        if k % 2 == 0:
            w = [rng.uniform(0.1, 1.0) for _ in range(3)]
            s = sum(w)
            kp = t.A * (w[0] / s) + t.B * (w[1] / s) + t.C * (w[2] / s)
            side = lambda v, p, q: line_line_intersect(Line.through(v, kp), Line.through(p, q))
            triple = L.CevianTriple(side(t.A, t.B, t.C), side(t.B, t.C, t.A), side(t.C, t.A, t.B))
            labels["concurrent"].append(L.classify_triple(*t.vertices, triple))
        else:
            f = t.A + (t.B - t.A) * rng.uniform(0.1, 0.9)
            e = t.C + (t.A - t.C) * rng.uniform(0.1, 0.9)
            d = line_line_intersect(Line.through(e, f), Line.through(t.B, t.C))
            labels["collinear"].append(L.classify_triple(*t.vertices, L.CevianTriple(d, e, f)))
    right = sum(x == "concurrent" for x in labels["concurrent"]) + \
        sum(x == "collinear" for x in labels["collinear"])
    ok = right == 2000
    criterion(3, ok, f"{right}/2000 constructed triples classified by product sign "
                     f"(+1 concurrent, -1 collinear)")
    assert ok


def test_criterion_4_corpus_soundness(criterion):
    start = time.perf_counter()
    verdicts = {e.path.stem: run(e.load(), RunConfig()).verdict for e in CORPUS}
    elapsed = time.perf_counter() - start
    bad = sorted(k for k, v in verdicts.items() if v != "pass")
    ok = len(verdicts) == 16 and not bad and elapsed < 60.0
    criterion(4, ok, f"{16 - len(bad)}/16 scenes pass at 200 trials in {elapsed:.1f} s "
                     f"(limit 60 s){'; not passing: ' + ', '.join(bad) if bad else ''}")
    assert ok


def test_criterion_5_corpus_sensitivity(criterion):
    mutants = sorted(MUTANT_DIR.glob("*.geo"))
    verdicts = {p.stem: run(load(p.read_text()), RunConfig(trials=200)).verdict for p in mutants}
    survivors = sorted(k for k, v in verdicts.items() if v != "fail")
    covered = {p.stem.removesuffix("_mutant") for p in mutants} == {e.path.stem for e in CORPUS}
    ok = covered and not survivors
    criterion(5, ok, f"{len(mutants) - len(survivors)}/{len(mutants)} mutants fail within 200 "
                     f"trials, one per scene: {covered}")
    assert ok


def test_criterion_6_mixtilinear_oracle(criterion):
    rng = random.Random(6)
    cons = TriangleConstraints(min_angle=math.radians(5.0))
    worst_i = worst_ii = 0.0
    for _ in range(500):
        t = sample_triangle(cons, rng)
        a, b, c = t.vertices
        m = mixtilinear_incircle(a, b, c)
        i = triangle_center(a, b, c, "incenter")
        n = arc_midpoint(circumcircle(a, b, c), b, c, a)
        worst_i = max(worst_i, dist(i, midpoint(m.touch_K, m.touch_L)) / t.scale)
        worst_ii = max(worst_ii, abs(Line.through(m.touch_K, i).signed_distance(n)) / t.scale)
    ok_i, ok_ii = worst_i <= 1e-9, worst_ii <= 1e-9
    criterion(6, ok_i and ok_ii,
              f"(i) I is the midpoint of KL: max {worst_i:.2e}*scale {'ok' if ok_i else 'FAILS'}; "
              f"(ii) line KI through the arc-BAC midpoint: max {worst_ii:.2e}*scale "
              f"{'ok' if ok_ii else 'FAILS'} (limit 1e-9*scale)")
    assert ok_i and ok_ii


def test_criterion_7_determinism(criterion, tmp_path, capsys):
    scene = corpus_dir() / "ex03_bulgaria_2021_2.geo"
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    cli.main(["check", str(scene), "--seed", "42", "--report", str(r1)])
    cli.main(["check", str(scene), "--seed", "42", "--report", str(r2)])
    same_report = r1.read_bytes() == r2.read_bytes()
    capsys.readouterr()
    cli.main(["corpus", "--jobs", "1"])
    serial = capsys.readouterr().out
    cli.main(["corpus", "--jobs", "4"])
    parallel = capsys.readouterr().out
    ok = same_report and serial == parallel
    criterion(7, ok, f"check reports byte-identical: {same_report}; "
                     f"serial and parallel corpus summaries identical: {serial == parallel}")
    assert ok


VARIADIC = {k for k, (_, minimum) in ASSERTIONS.items() if minimum is not None}
VARIADIC |= {k for k, sig in FUNCTIONS.items() if sig.variadic_min is not None}


def _call_sites(tokens):
    """(name token, argument token ranges, index of the closing paren) per call."""
    sites = []
    for k, tok in enumerate(tokens[:-1]):
        if tok.kind != "id" or tokens[k + 1].text != "(":
            continue
        depth, args, start = 0, [], k + 2
        for j in range(k + 1, len(tokens)):
            if tokens[j].text == "(":
                depth += 1
            elif tokens[j].text == ")":
                depth -= 1
                if depth == 0:
                    if j > start:
                        args.append((start, j))
                    sites.append((tok, args, j))
                    break
            elif tokens[j].text == "," and depth == 1:
                args.append((start, j))
                start = j + 1
    return sites


def dsl_mutations():
    """Every identifier rename and arity change of the corpus with its expected position."""
    renames, arity = [], []
    for entry in CORPUS:
        source = entry.path.read_text()
        lines = source.splitlines()
        for n, col, name in used_identifiers(source):
            raw = lines[n - 1]
            if raw.lstrip().startswith("free triangle"):
                continue
            text = raw[:col - 1] + "Zq" + raw[col - 1 + len(name):]
            renames.append((entry.path.name, lines, n, text, (n, col)))
        for n, raw in enumerate(lines, start=1):
            tokens = tokenize_line(raw, n)
            if tokens[0].text not in ("let", "require", "assert", "free"):
                continue
            for tok, args, close in _call_sites(tokens):
                col = lambda j: tokens[j].column - 1
                if tok.text not in VARIADIC and args:
                    first = raw[col(args[0][0]):col(args[0][1])]
                    grown = raw[:col(close)] + f", {first}" + raw[col(close):]
                    arity.append((entry.path.name, lines, n, grown, (n, tok.column)))
                if len(args) >= 2:
                    cut = raw[:col(args[-2][1])] + raw[col(close):]
                    if tok.text in VARIADIC:
                        minimum = ASSERTIONS.get(tok.text, (None, None))[1] or \
                            FUNCTIONS[tok.text].variadic_min
                        if len(args) > minimum:
                            continue
                    arity.append((entry.path.name, lines, n, cut, (n, tok.column)))
    return renames, arity


def test_criterion_8_dsl_robustness(criterion):
    round_trip = 0
    for entry in CORPUS:
        ast = parse(entry.path.read_text())
        round_trip += parse(pretty(ast)) == ast
    renames, arity = dsl_mutations()
    rng = random.Random(8)
    chosen = rng.sample(renames, 50) + rng.sample(arity, 50)
    right, problems = 0, []
    for name, lines, n, text, expected in chosen:
        source = "\n".join(lines[:n - 1] + [text] + lines[n:])
        try:
            load(source)
            problems.append(f"{name}:{n} accepted: {text.strip()}")
        except ParseError as err:
            if (err.line, err.column) == expected:
                right += 1
            else:
                problems.append(f"{name}:{n} at {err.line}:{err.column}, expected {expected}")
        except Exception as exc:  # a crash is a failure of the criterion
            problems.append(f"{name}:{n} crashed: {type(exc).__name__}: {exc}")
    ok = round_trip == len(CORPUS) and right == 100
    criterion(8, ok, f"round trip {round_trip}/{len(CORPUS)}; {right}/100 mutated sources "
                     f"rejected at the right line/column (50 renames, 50 arity changes)"
                     + (f"; {problems[:3]}" if problems else ""))
    assert ok
