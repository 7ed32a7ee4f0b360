"""Scene language: parse, pretty-print, resolve and evaluate ``.geo`` files."""

from .ast import SceneAST, Span
from .evaluate import Bindings, DegenerateSample, evaluate, residual
from .parser import ParseError, parse
from .printer import pretty
from .resolve import ResolveError, Scene, resolve


def load(source: str) -> Scene:
    """Parse and resolve scene text in one step."""
    return resolve(parse(source))


__all__ = [
    "SceneAST", "Span", "Bindings", "DegenerateSample", "evaluate", "residual",
    "ParseError", "parse", "pretty", "ResolveError", "Scene", "resolve", "load",
]
