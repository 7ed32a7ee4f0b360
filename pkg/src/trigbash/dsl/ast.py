"""Syntax tree for scene files.

Every node carries a ``Span`` that is excluded from equality, so two trees
parsed from differently formatted sources compare equal when they say the
same thing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True)
class Span:
    line: int
    column: int


NO_SPAN = Span(0, 0)


def _span():
    return field(default=NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Name:
    id: str
    span: Span = _span()


@dataclass(frozen=True)
class Number:
    value: float
    unit: Optional[str] = None  # "deg", "rad" or None
    span: Span = _span()


@dataclass(frozen=True)
class Keyword:
    """A reserved word used as a value, e.g. a center kind or ``parallel``."""

    word: str
    span: Span = _span()


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Expr", ...]
    span: Span = _span()


@dataclass(frozen=True)
class Field:
    target: "Expr"
    name: str
    span: Span = _span()


Expr = Union[Name, Number, Keyword, Call, Field]


@dataclass(frozen=True)
class Constraint:
    kind: str
    args: tuple[Union[str, Number], ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class FreeTriangle:
    names: tuple[str, str, str]
    constraints: tuple[Constraint, ...] = ()
    span: Span = _span()
    name_spans: tuple[Span, ...] = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class FreePoint:
    name: str
    locus: Expr
    span: Span = _span()
    name_span: Span = _span()


@dataclass(frozen=True)
class Let:
    name: str
    expr: Expr
    where: Optional[tuple[Expr, Expr]] = None
    span: Span = _span()
    name_span: Span = _span()


@dataclass(frozen=True)
class Require:
    expr: Expr
    negated: bool = False
    compare: Optional[tuple[str, Expr]] = None
    span: Span = _span()


@dataclass(frozen=True)
class Assert:
    kind: str
    args: tuple[Expr, ...]
    span: Span = _span()


Statement = Union[FreeTriangle, FreePoint, Let, Require, Assert]


@dataclass(frozen=True)
class SceneAST:
    statements: tuple[Statement, ...]
    meta: tuple[tuple[str, str], ...] = ()

    def meta_value(self, key: str, default: str = "") -> str:
        for k, v in self.meta:
            if k == key:
                return v
        return default


def declared_names(stmt: Statement) -> tuple[str, ...]:
    if isinstance(stmt, FreeTriangle):
        return stmt.names
    if isinstance(stmt, (FreePoint, Let)):
        return (stmt.name,)
    return ()
