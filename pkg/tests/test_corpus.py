import pytest

from trigbash.corpus import CorpusEntry, corpus_dir, load_corpus
from trigbash.verifier import RunConfig, run

ENTRIES = load_corpus()

EXPECTED_ANCHORS = [f"Example {n}," for n in (1, 2, 3, 4, 6, 7, 8, 9, 10, 11, 12, 14, 15)] + [
    "Exercise 2,", "Exercise 3,", "Exercise 10,"]

# the claim each scene asserts, as written in its assert lines
TARGETS = {
    "ex01_balkan_2022_1": ["assert collinear(Z, Y, M)"],
    "ex02_incircle_median": ["assert perpendicular(line(N, I), line(B, C))"],
    "ex03_bulgaria_2021_2": ["assert collinear(K, P, T)"],
    "ex04_imo_2022_4": ["assert concyclic(P, S, Q, R)"],
    "ex06_usa_tstst_2019": ["assert on_circle(Q, G)"],
    "ex07_egmo_2021_3": ["assert concyclic(E, F, N, M)"],
    "ex08_russia_2011": ["assert concyclic(I1, I2, B, N)"],
    "ex09_mediterranean_1998": ["assert collinear(A, P, M)"],
    "ex10_mathlinks_2008": ["assert collinear(P, D, M)"],
    "ex11_balkan_2017_2": ["assert concurrent(line(S, T), line(A, L), line(B, C))"],
    "ex12_tangents_midpoint": ["assert perpendicular(line(O, P), line(A, M))"],
    "ex14_right_semicircles": ["assert collinear(S, P, Q)"],
    "ex15_euler_line": ["assert on_line(X, line(H, O))"],
    "exe02_butterfly": ["assert midpoint_of(M, X, Y)"],
    "exe03_semiperimeter": ["assert perpendicular(line(E, F), line(O, I))"],
    "exe10_desargues": ["assert concurrent(line(P, Q), line(B, C), line(D, E))"],
}


def test_corpus_is_complete():
    assert len(ENTRIES) == 16
    for anchor in EXPECTED_ANCHORS:
        assert sum(e.paper_anchor.startswith(anchor) for e in ENTRIES) == 1, anchor


def test_entries_carry_metadata():
    for e in ENTRIES:
        assert isinstance(e, CorpusEntry)
        assert e.path.exists() and e.path.parent == corpus_dir()
        assert e.title and e.paper_anchor and e.expected_verdict == "pass"


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.path.stem)
def test_encodes_its_claim(entry):
    text = entry.path.read_text()
    for line in TARGETS[entry.path.stem]:
        assert line in text.splitlines()


def test_example_4_uses_mirror_construction_and_solver():
    text = next(e for e in ENTRIES if e.path.stem == "ex04_imo_2022_4").path.read_text()
    assert "let D = reflect(B, line(T, W))" in text
    assert "solve_on_curve" in text and "angle_at(B, A, T) = angle_at(E, T, A)" in text
    assert text.count("require ") >= 4


def test_example_10_uses_mixtilinear_incircle():
    text = next(e for e in ENTRIES if e.path.stem == "ex10_mathlinks_2008").path.read_text()
    assert "mixtilinear_incircle(A, B, C)" in text


def test_filter_matches_title_anchor_or_file_name():
    assert [e.path.stem for e in ENTRIES if e.matches("Example 4")] == ["ex04_imo_2022_4"]
    assert [e.path.stem for e in ENTRIES if e.matches("butterfly")] == ["exe02_butterfly"]
    assert [e.path.stem for e in ENTRIES if e.matches("ex08")] == ["ex08_russia_2011"]


def test_mutant_kit_has_one_mutant_per_scene(mutants):
    assert sorted(p.name for p in mutants) == sorted(f"{e.path.stem}_mutant.geo" for e in ENTRIES)


@pytest.mark.parametrize("entry", [e for e in ENTRIES if e.path.stem != "exe03_semiperimeter"],
                         ids=lambda e: e.path.stem)
def test_scene_passes(entry):
    assert run(entry.load(), RunConfig()).verdict == "pass"


@pytest.mark.xfail(strict=True, reason="EF is perpendicular to DI, not OI, when BE = CF = s; "
                   "see ledger")
def test_semiperimeter_scene_passes():
    entry = next(e for e in ENTRIES if e.path.stem == "exe03_semiperimeter")
    assert run(entry.load(), RunConfig()).verdict == "pass"


def test_semiperimeter_scene_records_the_di_claim():
    entry = next(e for e in ENTRIES if e.path.stem == "exe03_semiperimeter")
    report = run(entry.load(), RunConfig())
    oi, di = report.assertions
    assert di.fail_count == 0 and di.pass_count == 200
    assert oi.fail_count == 200
