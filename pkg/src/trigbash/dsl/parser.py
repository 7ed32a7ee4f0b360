"""Line-oriented parser for scene files.

One statement per line. Scoping is checked here: every identifier must be
declared on an earlier line, and a name may be bound only once. Types and
arities are left to the resolver.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

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
    Span,
    Statement,
)

STATEMENT_WORDS = ("free", "let", "require", "assert")
SYNTAX_WORDS = frozenset({"free", "triangle", "point", "on", "let", "where", "require", "not", "assert"})
VALUE_KEYWORDS = frozenset({
    "centroid", "circumcenter", "orthocenter", "incenter", "symmedian_point",
    "excenter_A", "excenter_B", "excenter_C", "parallel", "perpendicular",
})
CONSTRAINT_WORDS = ("acute", "obtuse_at", "scalene", "isosceles", "min_angle", "order")
COMPARATORS = ("<=", ">=", "<", ">")
META_KEYS = ("title", "paper")

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<unit>[A-Za-z_]\w*)?
  | (?P<id>[A-Za-z_]\w*)
  | (?P<sym><=|>=|[(){},;=<>.\-])
""", re.VERBOSE)
_META = re.compile(r"#\s*(\w+)\s*:\s*(.*?)\s*$")


@dataclass
class ParseError(Exception):
    line: int
    column: int
    message: str
    expected: list[str] = field(default_factory=list)

    def __post_init__(self):
        super().__init__(str(self))

    def __str__(self) -> str:
        tail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        return f"{self.line}:{self.column}: {self.message}{tail}"


@dataclass(frozen=True)
class Token:
    kind: str  # "id", "num", "sym", "end"
    text: str
    line: int
    column: int
    unit: Optional[str] = None

    @property
    def span(self) -> Span:
        return Span(self.line, self.column)


def tokenize_line(text: str, line_no: int) -> list[Token]:
    code = text.split("#", 1)[0]
    tokens: list[Token] = []
    pos = 0
    while pos < len(code):
        m = _TOKEN.match(code, pos)
        if m is None:
            raise ParseError(line_no, pos + 1, f"unexpected character {code[pos]!r}")
        col = pos + 1
        if m.lastgroup == "ws":
            pass
        elif m.group("num") is not None:
            unit = m.group("unit")
            if unit is not None and unit not in ("deg", "rad"):
                raise ParseError(line_no, m.start("unit") + 1,
                                 f"unknown unit {unit!r}", ["deg", "rad"])
            tokens.append(Token("num", m.group("num"), line_no, col, unit))
        elif m.group("id") is not None:
            tokens.append(Token("id", m.group("id"), line_no, col))
        else:
            tokens.append(Token("sym", m.group("sym"), line_no, col))
        pos = m.end()
    tokens.append(Token("end", "", line_no, len(code.rstrip()) + 1))
    return tokens


class _LineParser:
    def __init__(self, tokens: list[Token], scope: set[str]):
        self.toks = tokens
        self.i = 0
        self.scope = scope
        self.binding: Optional[str] = None

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, expected=(), tok: Optional[Token] = None) -> ParseError:
        t = tok or self.tok
        return ParseError(t.line, t.column, message, list(expected))

    def found(self) -> str:
        return "end of line" if self.tok.kind == "end" else repr(self.tok.text)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect_sym(self, sym: str) -> Token:
        if self.tok.kind != "sym" or self.tok.text != sym:
            raise self.error(f"unexpected {self.found()}", [repr(sym)])
        return self.advance()

    def expect_word(self, word: str) -> Token:
        if self.tok.kind != "id" or self.tok.text != word:
            raise self.error(f"unexpected {self.found()}", [repr(word)])
        return self.advance()

    def expect_id(self, what: str = "identifier") -> Token:
        if self.tok.kind != "id":
            raise self.error(f"unexpected {self.found()}", [what])
        return self.advance()

    def at_sym(self, sym: str) -> bool:
        return self.tok.kind == "sym" and self.tok.text == sym

    def expect_end(self):
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.found()} after statement", ["end of line"])

    # statements

    def new_name(self, tok: Token) -> str:
        name = tok.text
        if name in SYNTAX_WORDS or name in VALUE_KEYWORDS:
            raise self.error(f"{name!r} is reserved and cannot name an object", tok=tok)
        if name in self.scope:
            raise self.error(f"{name!r} is already defined", tok=tok)
        return name

    def statement(self) -> Statement:
        head = self.tok
        if head.kind != "id" or head.text not in STATEMENT_WORDS:
            raise self.error(f"unexpected {self.found()}", [repr(w) for w in STATEMENT_WORDS])
        self.advance()
        stmt = getattr(self, "stmt_" + head.text)(head.span)
        self.expect_end()
        return stmt

    def stmt_free(self, span: Span) -> Statement:
        if self.tok.kind == "id" and self.tok.text == "triangle":
            self.advance()
            toks = [self.expect_id("vertex name") for _ in range(3)]
            names = []
            for t in toks:
                name = self.new_name(t)
                if name in names:
                    raise self.error(f"{name!r} is already defined", tok=t)
                names.append(name)
            constraints: list[Constraint] = []
            if self.at_sym("{"):
                self.advance()
                if not self.at_sym("}"):
                    constraints.append(self.constraint())
                    while self.at_sym(";") or self.at_sym(","):
                        self.advance()
                        if self.at_sym("}"):
                            break
                        constraints.append(self.constraint())
                self.expect_sym("}")
            self.scope.update(names)
            return FreeTriangle(tuple(names), tuple(constraints), span,
                                tuple(t.span for t in toks))
        if self.tok.kind == "id" and self.tok.text == "point":
            self.advance()
            tok = self.expect_id("point name")
            name = self.new_name(tok)
            self.expect_word("on")
            self.binding = name
            locus = self.expr()
            self.binding = None
            self.scope.add(name)
            return FreePoint(name, locus, span, tok.span)
        raise self.error(f"unexpected {self.found()}", ["'triangle'", "'point'"])

    def constraint(self) -> Constraint:
        tok = self.tok
        if tok.kind != "id" or tok.text not in CONSTRAINT_WORDS:
            raise self.error(f"unknown constraint {self.found()}",
                             [repr(w) for w in CONSTRAINT_WORDS])
        kind = self.advance().text
        if kind in ("acute", "scalene"):
            return Constraint(kind, (), tok.span)
        if kind == "obtuse_at":
            return Constraint(kind, (self.expect_id("vertex name").text,), tok.span)
        if kind == "isosceles":
            first = self.expect_id("side").text
            if self.at_sym("="):
                self.advance()
            return Constraint(kind, (first, self.expect_id("side").text), tok.span)
        if kind == "min_angle":
            return Constraint(kind, (self.angle_literal(),), tok.span)
        first = self.expect_id("side").text
        self.expect_sym("<")
        return Constraint(kind, (first, self.expect_id("side").text), tok.span)

    def angle_literal(self) -> Number:
        tok = self.tok
        if tok.kind != "num":
            raise self.error(f"unexpected {self.found()}", ["angle literal"])
        if tok.unit is None:
            raise self.error("angle literal needs a 'deg' or 'rad' suffix", ["deg", "rad"])
        self.advance()
        return Number(float(tok.text), tok.unit, tok.span)

    def stmt_let(self, span: Span) -> Let:
        tok = self.expect_id("name")
        name = self.new_name(tok)
        self.expect_sym("=")
        self.binding = name
        expr = self.expr()
        where = None
        if self.tok.kind == "id" and self.tok.text == "where":
            self.advance()
            self.scope.add(name)
            self.binding = None
            lhs = self.expr()
            self.expect_sym("=")
            where = (lhs, self.expr())
        self.binding = None
        self.scope.add(name)
        return Let(name, expr, where, span, tok.span)

    def stmt_require(self, span: Span) -> Require:
        negated = False
        if self.tok.kind == "id" and self.tok.text == "not":
            self.advance()
            negated = True
        expr = self.expr()
        compare = None
        if self.tok.kind == "sym" and self.tok.text in COMPARATORS:
            op = self.advance().text
            compare = (op, self.expr())
        return Require(expr, negated, compare, span)

    def stmt_assert(self, span: Span) -> Assert:
        tok = self.expect_id("assertion kind")
        args = self.arguments()
        return Assert(tok.text, args, tok.span)

    # expressions

    def arguments(self) -> tuple[Expr, ...]:
        self.expect_sym("(")
        args: list[Expr] = []
        if not self.at_sym(")"):
            args.append(self.expr())
            while self.at_sym(","):
                self.advance()
                args.append(self.expr())
        if not self.at_sym(")"):
            raise self.error(f"unexpected {self.found()}", ["','", "')'"])
        self.advance()
        return tuple(args)

    def expr(self) -> Expr:
        node = self.primary()
        while self.at_sym("."):
            self.advance()
            tok = self.expect_id("field name")
            node = Field(node, tok.text, tok.span)
        return node

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Number(float(tok.text), tok.unit, tok.span)
        if self.at_sym("-"):
            self.advance()
            num = self.tok
            if num.kind != "num":
                raise self.error(f"unexpected {self.found()}", ["number"])
            self.advance()
            return Number(-float(num.text), num.unit, tok.span)
        if tok.kind != "id":
            raise self.error(f"unexpected {self.found()}", ["expression"])
        self.advance()
        if self.at_sym("("):
            return Call(tok.text, self.arguments(), tok.span)
        if tok.text in VALUE_KEYWORDS:
            return Keyword(tok.text, tok.span)
        if tok.text == self.binding:
            raise self.error(f"cyclic definition: {tok.text!r} refers to itself", tok=tok)
        if tok.text not in self.scope:
            raise self.error(f"undeclared identifier {tok.text!r}", tok=tok)
        return Name(tok.text, tok.span)


def parse_meta(source: str) -> tuple[tuple[str, str], ...]:
    meta = []
    for raw in source.splitlines():
        stripped = raw.strip()
        if not stripped:
            continue
        if not stripped.startswith("#"):
            break
        m = _META.match(stripped)
        if m and m.group(1) in META_KEYS:
            meta.append((m.group(1), m.group(2)))
    return tuple(meta)


def parse(source: str) -> SceneAST:
    """Parse scene source text; raises ParseError at the first offending token."""
    scope: set[str] = set()
    statements: list[Statement] = []
    for line_no, raw in enumerate(source.splitlines(), start=1):
        tokens = tokenize_line(raw, line_no)
        if tokens[0].kind == "end":
            continue
        statements.append(_LineParser(tokens, scope).statement())
    return SceneAST(tuple(statements), parse_meta(source))
