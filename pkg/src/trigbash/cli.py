"""Command-line entry points: ``check``, ``corpus`` and ``render``.

Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 scene error, 64 usage error.
The default seed comes from ``TRIGBASH_SEED`` when set; ``--seed`` wins.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .corpus import CorpusEntry, load_corpus
from .dsl import ParseError, load
from .geom import TolerancePolicy
from .render import PersistentDegeneracyError, render_svg
from .verifier import DEFAULT_SEED, Report, RunConfig, run

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_SCENE, EXIT_USAGE = 0, 1, 2, 3, 64
VERDICT_EXIT = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _seed(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        n = 0
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def _tol(text: str) -> float:
    try:
        t = float(text)
    except ValueError:
        t = 0.0
    if not 1e-12 < t < 1.0:
        raise argparse.ArgumentTypeError(f"tolerance must lie in (1e-12, 1), got {text!r}")
    return t


def default_seed(environ=os.environ) -> int:
    raw = environ.get("TRIGBASH_SEED")
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        return int(raw.strip(), 0)
    except ValueError:
        raise UsageError(f"TRIGBASH_SEED is not an integer: {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="trigbash", description="Randomized checks of geometry scenes.")
    p.add_argument("--version", action="version", version=f"trigbash {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("check", help="verify one scene file")
    c.add_argument("scene", type=Path)
    c.add_argument("--trials", type=_positive, default=200)
    c.add_argument("--seed", type=_seed)
    c.add_argument("--tol", type=_tol, default=TolerancePolicy().rel_eps,
                   help="relative pass threshold for residuals")
    c.add_argument("--report", type=Path, help="write the JSON report here")
    c.add_argument("--jobs", type=_positive, default=1)

    k = sub.add_parser("corpus", help="verify the bundled corpus")
    k.add_argument("--filter", dest="needle", help="substring of title, anchor or file name")
    k.add_argument("--trials", type=_positive, default=200)
    k.add_argument("--seed", type=_seed)
    k.add_argument("--jobs", type=_positive, default=1)
    k.add_argument("--corpus", type=Path, help="directory of .geo files")

    r = sub.add_parser("render", help="draw one instance of a scene as SVG")
    r.add_argument("scene", type=Path)
    r.add_argument("--seed", type=_seed)
    r.add_argument("--out", type=Path, help="output path (default: stdout)")
    return p


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def cmd_check(args, err) -> int:
    source = _read(args.scene)
    try:
        scene = load(source)
    except ParseError as exc:
        print(f"{args.scene}:{exc}", file=err)
        return EXIT_SCENE
    cfg = RunConfig(trials=args.trials, seed=args.seed, tol=TolerancePolicy(rel_eps=args.tol))
    report = run(scene, cfg, jobs=args.jobs)
    if args.report is not None:
        args.report.write_text(report.to_json())
    print(summary_line(args.scene.name, report))
    return VERDICT_EXIT[report.verdict]


def summary_line(name: str, report: Report) -> str:
    failing = [a.label for a in report.assertions if a.fail_count]
    counts = " ".join(f"{a.label}={a.pass_count}/{a.fail_count}" for a in report.assertions)
    tail = f" failing: {', '.join(failing)}" if failing else ""
    return (f"{report.verdict:<12} {name:<32} {report.anchor}  [{counts}; "
            f"degenerate={report.degenerate_count}]{tail}")


def _check_entry(path: Path, trials: int, seed: int) -> tuple[str, str]:
    scene = load(path.read_text())
    report = run(scene, RunConfig(trials=trials, seed=seed))
    return report.verdict, summary_line(path.name, report)


def cmd_corpus(args, err) -> int:
    try:
        entries: list[CorpusEntry] = load_corpus(args.corpus)
    except ParseError as exc:
        print(f"corpus scene error: {exc}", file=err)
        return EXIT_SCENE
    except OSError as exc:
        raise UsageError(f"cannot read corpus: {exc}") from None
    if args.needle is not None:
        entries = [e for e in entries if e.matches(args.needle)]
    if not entries:
        raise UsageError(f"no corpus entry matches {args.needle!r}" if args.needle
                         else "corpus is empty")
    paths = [e.path for e in entries]
    n = len(paths)
    if args.jobs > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=min(args.jobs, n)) as pool:
            results = list(pool.map(_check_entry, paths, [args.trials] * n, [args.seed] * n))
    else:
        results = [_check_entry(p, args.trials, args.seed) for p in paths]
    verdicts = [v for v, _ in results]
    for _, line in results:  # already in path order
        print(line)
    passed = verdicts.count("pass")
    print(f"{passed}/{n} scenes pass")
    return EXIT_PASS if passed == n else EXIT_FAIL


def cmd_render(args, err) -> int:
    try:
        scene = load(_read(args.scene))
    except ParseError as exc:
        print(f"{args.scene}:{exc}", file=err)
        return EXIT_SCENE
    try:
        svg = render_svg(scene, args.seed)
    except PersistentDegeneracyError as exc:
        print(str(exc), file=err)
        return EXIT_INCONCLUSIVE
    if args.out is None:
        sys.stdout.write(svg)
    else:
        args.out.write_text(svg)
    return EXIT_PASS


COMMANDS = {"check": cmd_check, "corpus": cmd_corpus, "render": cmd_render}


def main(argv: Optional[Sequence[str]] = None) -> int:
    err = sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("trigbash: a command is required (check, corpus, render)")
        if args.seed is None:
            args.seed = default_seed()
        return COMMANDS[args.command](args, err)
    except UsageError as exc:
        print(str(exc), file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
