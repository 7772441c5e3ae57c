"""Polynomial text grammar and the JSON document formats.

Grammar (whitespace is insignificant)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ("^" INTEGER)?
    atom   := NUMBER | NUMBER "/" NUMBER | IDENT | "(" expr ")"

``^`` binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``; towers such
as ``x^2^3`` are rejected.  Multiplication must be written explicitly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, Optional, Sequence

from gmpy2 import mpq

from .poly import Polynomial, format_polynomial, rational_str, to_rational

MAX_EXPONENT = 10_000


class ParseError(ValueError):
    """Syntax or validation error; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int | None = None, source: str | None = None):
        self.position = position
        self.source = source
        if position is not None:
            message = f"{message} at column {position + 1}"
        super().__init__(message)


class SchemaError(ValueError):
    pass


def _tokenize(source: str):
    tokens = []
    pos, n = 0, len(source)
    while pos < n:
        ch = source[pos]
        if ch.isspace():
            pos += 1
        elif ch.isdigit():
            start = pos
            while pos < n and source[pos].isdigit():
                pos += 1
            tokens.append(("num", source[start:pos], start))
        elif ch.isalpha() or ch == "_":
            start = pos
            while pos < n and (source[pos].isalnum() or source[pos] == "_"):
                pos += 1
            tokens.append(("id", source[start:pos], start))
        elif ch in "+-*^()/":
            tokens.append((ch, ch, pos))
            pos += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", pos, source)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str, variables: Sequence[str]):
        self.source = source
        self.vars = tuple(variables)
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2], self.source)
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.source)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.peek()[0] == "*":
            self.take()
            p = p * self.unary()
        return p

    def unary(self) -> Polynomial:
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                raise self.error("exponent must be a non-negative integer literal")
            self.take()
            k = int(tok[1])
            if k > MAX_EXPONENT:
                raise self.error(f"exponent {k} exceeds the limit {MAX_EXPONENT}", tok)
            if self.peek()[0] == "^":
                raise self.error("'^' is non-associative; use parentheses")
            base = base**k
        return base

    def atom(self) -> Polynomial:
        tok = self.peek()
        kind = tok[0]
        if kind == "num":
            self.take()
            value = mpq(int(tok[1]))
            if self.peek()[0] == "/":
                self.take()
                den = self.take("num")
                if int(den[1]) == 0:
                    raise ParseError("zero denominator", den[2], self.source)
                value = mpq(int(tok[1]), int(den[1]))
            return Polynomial.constant(value, self.vars)
        if kind == "id":
            self.take()
            if tok[1] not in self.vars:
                raise ParseError(f"unknown identifier {tok[1]!r}", tok[2], self.source)
            return Polynomial.variable(tok[1], self.vars)
        if kind == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        if kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok[1]!r}")


def parse_polynomial(source: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``source`` into a polynomial over ``variables``."""
    if not isinstance(source, str):
        raise ParseError("polynomial source must be a string")
    return _Parser(source, variables).parse()


def print_polynomial(p: Polynomial) -> str:
    return format_polynomial(p)


# ---------------------------------------------------------------------------
# documents

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


@dataclass(frozen=True)
class MapSpec:
    """A polynomial map ``f = (f_1, ..., f_m)`` in ``n`` variables."""

    variable_names: tuple
    component_sources: tuple
    degree_bound_override: Optional[int] = None
    components: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if not self.variable_names:
            raise SchemaError("a map needs at least one variable")
        for v in self.variable_names:
            if not isinstance(v, str) or not _IDENT.match(v):
                raise SchemaError(f"invalid variable name {v!r}")
        if len(set(self.variable_names)) != len(self.variable_names):
            raise SchemaError("duplicate variable names")
        if not self.component_sources:
            raise SchemaError("a map needs at least one component")
        if self.degree_bound_override is not None:
            if not isinstance(self.degree_bound_override, int) or self.degree_bound_override < 1:
                raise SchemaError("degree_bound must be a positive integer")
        if not self.components:
            comps = tuple(parse_polynomial(s, self.variable_names) for s in self.component_sources)
            object.__setattr__(self, "components", comps)

    @classmethod
    def from_polynomials(cls, polys: Sequence[Polynomial], degree_bound: int | None = None) -> "MapSpec":
        polys = list(polys)
        if not polys:
            raise SchemaError("a map needs at least one component")
        variables = polys[0].vars
        for p in polys:
            if p.vars != variables:
                raise SchemaError("components use different variable lists")
        return cls(tuple(variables), tuple(format_polynomial(p) for p in polys), degree_bound, tuple(polys))

    @property
    def n(self) -> int:
        return len(self.variable_names)

    @property
    def m(self) -> int:
        return len(self.component_sources)

    @property
    def max_degree(self) -> int:
        return max(max(p.degree(), 0) for p in self.components)

    @property
    def d(self) -> int:
        if self.degree_bound_override is not None:
            return self.degree_bound_override
        return max(self.max_degree, 1)

    def to_document(self) -> dict:
        doc: dict[str, Any] = {"vars": list(self.variable_names), "components": list(self.component_sources)}
        if self.degree_bound_override is not None:
            doc["degree_bound"] = self.degree_bound_override
        return doc


def _require(doc, key, kind):
    if key not in doc:
        raise SchemaError(f"missing field {key!r}")
    if not isinstance(doc[key], kind):
        raise SchemaError(f"field {key!r} has the wrong type")
    return doc[key]


def parse_map(document: dict) -> MapSpec:
    if not isinstance(document, dict):
        raise SchemaError("map document must be a JSON object")
    variables = _require(document, "vars", list)
    comps = _require(document, "components", list)
    if not all(isinstance(c, str) for c in comps):
        raise SchemaError("components must be strings")
    bound = document.get("degree_bound")
    if bound is not None and (isinstance(bound, bool) or not isinstance(bound, int)):
        raise SchemaError("degree_bound must be an integer")
    return MapSpec(tuple(variables), tuple(comps), bound)


@dataclass(frozen=True)
class ConeDocument:
    spec: MapSpec
    claimed_dim: int
    claimed_rank: int


def parse_cone(document: dict) -> ConeDocument:
    spec = parse_map(document)
    if document.get("homogeneous") is not True:
        raise SchemaError("cone documents must declare \"homogeneous\": true")
    dim = _require(document, "claimed_dim", int)
    rank = _require(document, "claimed_rank", int)
    return ConeDocument(spec, dim, rank)


def parse_rational(text) -> mpq:
    if isinstance(text, bool):
        raise SchemaError("booleans are not rationals")
    if isinstance(text, int):
        return mpq(text)
    if not isinstance(text, str) or not re.fullmatch(r"\s*-?\d+(\s*/\s*\d+)?\s*", text):
        raise SchemaError(f"not a rational string: {text!r}")
    if "/" in text:
        a, b = text.split("/")
        if int(b) == 0:
            raise SchemaError("zero denominator")
        return mpq(int(a), int(b))
    return mpq(int(text))


def parse_forms(document: dict):
    """Read a form-system document; returns ``(ambient, rows, nodes_or_None)``."""
    if not isinstance(document, dict):
        raise SchemaError("form-system document must be a JSON object")
    if "rows" in document:
        rows = _require(document, "rows", list)
        parsed = []
        for r in rows:
            if not isinstance(r, list):
                raise SchemaError("rows must be lists")
            parsed.append([parse_rational(x) for x in r])
        if not parsed:
            raise SchemaError("empty row list")
        width = len(parsed[0])
        if width == 0 or any(len(r) != width for r in parsed):
            raise SchemaError("rows must have equal positive length")
        if "ambient" in document and document["ambient"] != width:
            raise SchemaError("ambient does not match row length")
        return width, parsed, None
    ambient = _require(document, "ambient", int)
    nodes = [parse_rational(x) for x in _require(document, "nodes", list)]
    if ambient < 1:
        raise SchemaError("ambient must be positive")
    return ambient, None, nodes


def load_json(path: str | Path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def rational_list(values) -> List[str]:
    return [rational_str(to_rational(v)) for v in values]
