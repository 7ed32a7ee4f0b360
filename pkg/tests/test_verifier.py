import json
import random

import pytest

from trigbash import verifier
from trigbash.corpus import load_corpus
from trigbash.dsl import ParseError, load
from trigbash.sampling import mix
from trigbash.verifier import DEFAULT_SEED, RunConfig, run

TRUE_SCENE = "free triangle A B C\nassert collinear(A, B, midpoint(A, B))\n"
FALSE_SCENE = "free triangle A B C\nassert perpendicular(line(A, B), line(A, C))\n"


def check_counts(report, trials):
    for a in report.assertions:
        assert a.pass_count + a.fail_count + a.excluded_count == trials
    assert (report.verdict == "fail") == any(a.fail_count for a in report.assertions)


def test_true_claim_passes():
    report = run(load(TRUE_SCENE))
    assert report.verdict == "pass"
    (a,) = report.assertions
    assert a.fail_count == 0 and a.pass_count == 200
    check_counts(report, 200)


def test_false_claim_fails_with_witness():
    report = run(load(FALSE_SCENE))
    assert report.verdict == "fail"
    (a,) = report.assertions
    assert a.fail_count > 0 and a.witness is not None
    assert set(a.witness) == {"seed", "digest"} and len(a.witness["digest"]) == 64
    check_counts(report, 200)


def test_witness_seed_reproduces_the_worst_residual():
    scene = load(FALSE_SCENE)
    report = run(scene, RunConfig(trials=50))
    (a,) = report.assertions
    b = verifier.evaluate(scene, a.witness["seed"])
    assert b.digest() == a.witness["digest"]
    node = scene.assertions[0]
    values = [fn(b.values, RunConfig().tol) for fn in node.args]
    assert verifier.residual(node, values, b, RunConfig().tol) == a.worst_residual


def test_example_1_passes():
    (entry,) = [e for e in load_corpus() if e.path.stem == "ex01_balkan_2022_1"]
    assert run(entry.load()).verdict == "pass"


def test_same_config_gives_identical_bytes():
    scene = load(FALSE_SCENE + "assert concyclic(A, B, C, midpoint(A, B))\n")
    cfg = RunConfig(trials=120, seed=5)
    assert run(scene, cfg).to_json() == run(scene, cfg).to_json()


def test_parallel_matches_serial():
    (entry,) = [e for e in load_corpus() if e.path.stem == "ex04_imo_2022_4"]
    scene = entry.load()
    cfg = RunConfig(trials=60, seed=11)
    assert run(scene, cfg, jobs=3).to_json() == run(scene, cfg, jobs=1).to_json()


def test_report_json_shape():
    doc = json.loads(run(load(FALSE_SCENE), RunConfig(trials=10)).to_json())
    assert set(doc) == {"tool", "tool_version", "title", "paper_anchor", "config", "assertions",
                        "degenerate_count", "discarded_count", "resample_count",
                        "first_degenerate", "verdict"}
    assert doc["config"]["trials"] == 10 and doc["config"]["seed"] == DEFAULT_SEED
    (a,) = doc["assertions"]
    assert {"pass_count", "fail_count", "worst_residual", "witness"} <= set(a)
    assert a["line"] == 2


def test_degenerate_samples_are_excluded():
    scene = load("free triangle A B C\nfree point P on ray(B, C)\n"
                 "require directed_ratio(P, B, C) > 0\nassert collinear(B, P, C)\n")
    report = run(scene)
    assert 0 < report.degenerate_count < 200
    assert report.first_degenerate["line"] == 3
    assert report.assertions[0].excluded_count == report.degenerate_count
    assert report.verdict == "pass"
    check_counts(report, 200)


def test_mostly_degenerate_scene_is_inconclusive():
    scene = load("free triangle A B C\nrequire angle_at(A, B, C) > 170deg\n"
                 "assert collinear(A, B, midpoint(A, B))\n")
    report = run(scene, RunConfig(trials=100))
    assert report.degenerate_count > 95 and report.verdict == "inconclusive"


def test_gray_band_samples_are_redrawn(monkeypatch):
    scene = load(TRUE_SCENE)
    cfg = RunConfig(trials=50, seed=3)
    first_draws = {mix(cfg.seed, i) for i in range(cfg.trials)}
    real = verifier.residual

    def gray_on_first_draw(node, values, b, tol):
        return 2e-9 if b.seed in first_draws else real(node, values, b, tol)

    monkeypatch.setattr(verifier, "residual", gray_on_first_draw)
    report = run(scene, cfg)
    assert report.resample_count == 50 and report.discarded_count == 0
    assert report.assertions[0].pass_count == 50 and report.verdict == "pass"


def test_persistently_gray_trials_are_discarded(monkeypatch):
    monkeypatch.setattr(verifier, "residual", lambda *args: 5e-10)
    report = run(load(TRUE_SCENE), RunConfig(trials=20))
    assert report.discarded_count == 20 and report.resample_count == 20 * 20
    a = report.assertions[0]
    assert a.pass_count == a.fail_count == 0 and a.excluded_count == 20
    assert report.verdict == "inconclusive"


def test_nan_residual_is_a_failure(monkeypatch):
    monkeypatch.setattr(verifier, "residual", lambda *args: float("nan"))
    report = run(load(TRUE_SCENE), RunConfig(trials=5))
    assert report.verdict == "fail"
    assert json.loads(report.to_json())["assertions"][0]["worst_residual"] == "nan"


FIXED_TRUE = ("free triangle A B C\nfree point P on segment(B, C)\n"
              "let O = triangle_center(A, B, C, circumcenter)\nassert fixed(O, P)\n")
FIXED_FALSE = ("free triangle A B C\nfree point P on segment(B, C)\n"
               "assert fixed(midpoint(A, P), P)\n")


def test_fixed_point_claims():
    assert run(load(FIXED_TRUE)).verdict == "pass"
    assert run(load(FIXED_FALSE)).verdict == "fail"


def test_fixed_needs_a_canonical_frame():
    with pytest.raises(ParseError) as info:
        load("free triangle A B C\nfree point P on segment(B, C)\nfree point Q on segment(A, C)\n"
             "assert fixed(midpoint(A, B), P)\n")
    assert info.value.line == 4 and "canonical frame" in info.value.message


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(trials=0)
    with pytest.raises(ValueError):
        RunConfig(max_degenerate_ratio=1.5)


def test_sample_triangle_reexport():
    t = verifier.sample_triangle(verifier.TriangleConstraints(acute=True), random.Random(0))
    assert max(t.angles) < 1.5708
