"""Canonical text form of a scene; ``parse(pretty(ast)) == ast``."""

from __future__ import annotations

from .ast import (
    Assert,
    Call,
    Constraint,
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
    Statement,
)


def format_number(n: Number) -> str:
    text = repr(float(n.value))
    return text + (n.unit or "")


def format_expr(e: Expr) -> str:
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Keyword):
        return e.word
    if isinstance(e, Number):
        return format_number(e)
    if isinstance(e, Field):
        return f"{format_expr(e.target)}.{e.name}"
    if isinstance(e, Call):
        return f"{e.func}({', '.join(format_expr(a) for a in e.args)})"
    raise TypeError(f"not an expression: {e!r}")


def format_constraint(c: Constraint) -> str:
    if c.kind == "order":
        return f"order {c.args[0]} < {c.args[1]}"
    if c.kind == "isosceles":
        return f"isosceles {c.args[0]} = {c.args[1]}"
    parts = [c.kind] + [format_number(a) if isinstance(a, Number) else a for a in c.args]
    return " ".join(parts)


def format_statement(s: Statement) -> str:
    if isinstance(s, FreeTriangle):
        text = "free triangle " + " ".join(s.names)
        if s.constraints:
            text += " { " + "; ".join(format_constraint(c) for c in s.constraints) + " }"
        return text
    if isinstance(s, FreePoint):
        return f"free point {s.name} on {format_expr(s.locus)}"
    if isinstance(s, Let):
        text = f"let {s.name} = {format_expr(s.expr)}"
        if s.where is not None:
            text += f" where {format_expr(s.where[0])} = {format_expr(s.where[1])}"
        return text
    if isinstance(s, Require):
        text = "require " + ("not " if s.negated else "") + format_expr(s.expr)
        if s.compare is not None:
            text += f" {s.compare[0]} {format_expr(s.compare[1])}"
        return text
    if isinstance(s, Assert):
        return f"assert {s.kind}({', '.join(format_expr(a) for a in s.args)})"
    raise TypeError(f"not a statement: {s!r}")


def pretty(ast: SceneAST) -> str:
    lines = [f"# {k}: {v}" for k, v in ast.meta]
    if lines:
        lines.append("")
    lines.extend(format_statement(s) for s in ast.statements)
    return "\n".join(lines) + "\n"
