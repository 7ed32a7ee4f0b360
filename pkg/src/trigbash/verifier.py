"""Repeated randomized evaluation of a scene, aggregated into a Report.

Trial ``i`` draws from ``mix(cfg.seed, i)``. When any residual of a sample
lands in the gray band around the threshold, the trial is redrawn from
``mix(seed_i, k)`` for ``k = 1, 2, ...``; a trial that never clears the band
is excluded rather than counted as a pass or a failure.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from . import __version__
from .dsl import Bindings, DegenerateSample, Scene, SceneAST, evaluate, residual, resolve
from .dsl.resolve import AssertNode
from .geom import DEFAULT_TOL, GeometryError, Point, TolerancePolicy, dist
from .sampling import TriangleConstraints, UnsatisfiableConstraintsError, mix, sample_triangle

DEFAULT_SEED = 20240601

__all__ = ["RunConfig", "Report", "AssertionReport", "run", "sample_triangle",
           "TriangleConstraints", "UnsatisfiableConstraintsError", "DEFAULT_SEED"]


@dataclass(frozen=True)
class RunConfig:
    trials: int = 200
    seed: int = DEFAULT_SEED
    tol: TolerancePolicy = DEFAULT_TOL
    max_degenerate_ratio: float = 0.95
    gray_band: tuple[float, float] = (0.1, 10.0)
    max_resamples: int = 20

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0.0 <= self.max_degenerate_ratio <= 1.0:
            raise ValueError("max_degenerate_ratio must lie in [0, 1]")
        lo, hi = self.gray_band
        if not 0.0 < lo <= 1.0 <= hi:
            raise ValueError("gray band must bracket 1")

    def echo(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "rel_eps": self.tol.rel_eps,
            "abs_floor": self.tol.abs_floor,
            "scale": self.tol.scale,
            "max_degenerate_ratio": self.max_degenerate_ratio,
            "gray_band": list(self.gray_band),
            "max_resamples": self.max_resamples,
        }


@dataclass
class AssertionReport:
    label: str
    kind: str
    line: int
    pass_count: int = 0
    fail_count: int = 0
    excluded_count: int = 0
    worst_residual: Optional[float] = None
    witness: Optional[dict] = None

    def record(self, r: float, seed: int, digest: str, threshold: float) -> None:
        if r <= threshold:
            self.pass_count += 1
        else:
            self.fail_count += 1
        # NaN counts as worst of all; ties keep the earliest trial
        if self.worst_residual is None or _worse(r, self.worst_residual):
            self.worst_residual = r
            self.witness = {"seed": seed, "digest": digest}

    def as_json(self) -> dict:
        return {
            "label": self.label,
            "kind": self.kind,
            "line": self.line,
            "pass_count": self.pass_count,
            "fail_count": self.fail_count,
            "excluded_count": self.excluded_count,
            "worst_residual": _num(self.worst_residual),
            "witness": self.witness,
        }


@dataclass
class Report:
    title: str
    anchor: str
    config: RunConfig
    assertions: list[AssertionReport]
    degenerate_count: int = 0
    discarded_count: int = 0
    resample_count: int = 0
    first_degenerate: Optional[dict] = None
    verdict: str = "pass"

    def as_json(self) -> dict:
        return {
            "tool": "trigbash",
            "tool_version": __version__,
            "title": self.title,
            "paper_anchor": self.anchor,
            "config": self.config.echo(),
            "assertions": [a.as_json() for a in self.assertions],
            "degenerate_count": self.degenerate_count,
            "discarded_count": self.discarded_count,
            "resample_count": self.resample_count,
            "first_degenerate": self.first_degenerate,
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_json(), sort_keys=True, indent=2) + "\n"


def _worse(r: float, current: float) -> bool:
    if math.isnan(current):
        return False
    return math.isnan(r) or r > current


def _num(x: Optional[float]):
    if x is None or math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else "inf"


@dataclass
class _Trial:
    """Outcome of one trial index after any gray-band redraws."""

    index: int
    seed: int
    status: str  # "ok", "degenerate", "discarded"
    residuals: list = field(default_factory=list)
    fixed_values: list = field(default_factory=list)
    frame_scale: float = 1.0
    digest: str = ""
    redraws: int = 0
    degenerate: Optional[DegenerateSample] = None


def _measure(scene: Scene, b: Bindings, tol: TolerancePolicy):
    residuals, fixed = [], []
    for node in scene.assertions:
        values = [fn(b.values, tol) for fn in node.args]
        if node.fixed_against is not None:
            residuals.append(None)
            fixed.append(values[0])
        else:
            residuals.append(residual(node, values, b, tol))
            fixed.append(None)
    return residuals, fixed


def _in_gray(r: float, cfg: RunConfig) -> bool:
    lo, hi = cfg.gray_band
    eps = cfg.tol.rel_eps
    return lo * eps <= r <= hi * eps


def _run_trial(scene: Scene, cfg: RunConfig, i: int) -> _Trial:
    seed_i = mix(cfg.seed, i)
    seed = seed_i
    for k in range(cfg.max_resamples + 1):
        if k:
            seed = mix(seed_i, k)
        out = evaluate(scene, seed, cfg.tol, frame_seed=cfg.seed)
        if isinstance(out, DegenerateSample):
            if k == 0:
                return _Trial(i, seed, "degenerate", degenerate=out)
            continue
        try:
            residuals, fixed = _measure(scene, out, cfg.tol)
        except (GeometryError, ZeroDivisionError, ValueError) as exc:
            bad = DegenerateSample(seed, len(scene.nodes), scene.nodes[-1].span, str(exc))
            if k == 0:
                return _Trial(i, seed, "degenerate", degenerate=bad)
            continue
        if any(r is not None and _in_gray(r, cfg) for r in residuals):
            continue
        return _Trial(i, seed, "ok", residuals, fixed, out.frame_scale, out.digest(), k)
    return _Trial(i, seed_i, "discarded", redraws=cfg.max_resamples)


def _run_chunk(ast: SceneAST, cfg: RunConfig, indices: list[int]) -> list[_Trial]:
    scene = resolve(ast)
    return [_run_trial(scene, cfg, i) for i in indices]


def _trials(scene: Scene, cfg: RunConfig, jobs: int) -> list[_Trial]:
    if jobs <= 1:
        return [_run_trial(scene, cfg, i) for i in range(cfg.trials)]
    # compiled closures do not pickle; workers resolve the AST, which keeps source spans
    chunks = [list(range(j, cfg.trials, jobs)) for j in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(_run_chunk, [scene.ast] * jobs, [cfg] * jobs, chunks)
        trials = [t for part in parts for t in part]
    return sorted(trials, key=lambda t: t.index)


def run(scene: Scene, cfg: RunConfig = RunConfig(), jobs: int = 1) -> Report:
    """Verify every assertion of ``scene`` over ``cfg.trials`` seeded samples.

    The result depends only on ``scene`` and ``cfg``: trials are aggregated in
    index order whatever ``jobs`` is.
    """
    trials = _trials(scene, cfg, jobs)
    nodes: list[AssertNode] = list(scene.assertions)
    reports = [AssertionReport(n.label, n.assertion, n.span.line) for n in nodes]
    report = Report(scene.title, scene.anchor, cfg, reports)
    threshold = cfg.tol.rel_eps
    accepted = []
    for t in trials:
        report.resample_count += t.redraws
        if t.status != "ok":
            if t.status == "degenerate":
                report.degenerate_count += 1
                if report.first_degenerate is None:
                    d = t.degenerate
                    report.first_degenerate = {"seed": d.seed, "line": d.span.line,
                                               "reason": d.reason}
            else:
                report.discarded_count += 1
            for a in reports:
                a.excluded_count += 1
            continue
        accepted.append(t)
        for a, r in zip(reports, t.residuals):
            if r is not None:
                a.record(r, t.seed, t.digest, threshold)

    # fixed-point claims compare every sample with the earliest accepted one
    for j, node in enumerate(nodes):
        if node.fixed_against is None:
            continue
        if not accepted:
            continue
        ref: Point = accepted[0].fixed_values[j]
        for t in accepted:
            reports[j].record(dist(t.fixed_values[j], ref) / t.frame_scale, t.seed, t.digest,
                              threshold)

    excluded = report.degenerate_count + report.discarded_count
    if any(a.fail_count for a in reports):
        report.verdict = "fail"
    elif excluded / cfg.trials > cfg.max_degenerate_ratio:
        report.verdict = "inconclusive"
    else:
        report.verdict = "pass"
    return report
