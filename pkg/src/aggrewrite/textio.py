"""Concrete text syntax for programs.

Grammar::

    program   := rule*
    rule      := head ":-" body "." | head "." | ":-" body "."
    head      := atom ("|" atom)*
    body      := literal ("," literal)*
    literal   := "~"* atom | aggregate
    aggregate := ("#sum"|"#avg"|"#min"|"#max") "[" (welem ("," welem)*)? "]" cmp int
               | "#count" "[" (plit ("," plit)*)? "]" cmp int
               | ("#even"|"#odd") "[" (plit ("," plit)*)? "]"
    welem     := int ":" plit
    plit      := "~"* atom
    atom      := /[a-z][A-Za-z0-9_]*/ | "#false"

``%`` starts a line comment.  Names starting with ``__`` are reserved for
atoms introduced by the rewriting and are only accepted with
``allow_reserved=True``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import (
    BOTTOM,
    INT64_MAX,
    INT64_MIN,
    PARITY,
    UNWEIGHTED,
    AggFunction,
    Aggregate,
    Atom,
    Comparator,
    Literal,
    Program,
    PropLiteral,
    Rule,
)

RESERVED_PREFIX = "__"


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    end_line: int
    end_column: int

    def __str__(self):
        return f"{self.line}:{self.column}"


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<keyword>\#[a-z]+)
  | (?P<int>-?[0-9]+)
  | (?P<name>[a-z][A-Za-z0-9_]*|__[A-Za-z0-9_]+)
  | (?P<op>:-|<=|>=|!=|<|>|=|\||,|\.|\[|\]|:|~)
    """,
    re.VERBOSE,
)

_AGG_KEYWORDS = {f"#{f.value}": f for f in AggFunction}
_COMPARATORS = {c.value: c for c in Comparator}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    span: SourceSpan


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    line, col = 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(line, col, line, col)
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        chunk = m.group()
        end_line, end_col = line, col
        for ch in chunk:
            if ch == "\n":
                end_line, end_col = end_line + 1, 1
            else:
                end_col += 1
        if m.lastgroup not in ("ws", "comment"):
            tokens.append(_Token(m.lastgroup, chunk, SourceSpan(line, col, end_line, end_col)))
        line, col = end_line, end_col
        pos = m.end()
    tokens.append(_Token("eof", "", SourceSpan(line, col, line, col)))
    return tokens


class _Parser:
    def __init__(self, text: str, allow_reserved: bool):
        self.tokens = _tokenize(text)
        self.i = 0
        self.allow_reserved = allow_reserved

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "keyword") and self.tok.text == text

    def expect(self, text: str) -> _Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def fail(self, message: str, tok: _Token | None = None):
        raise ParseError(message, (tok or self.tok).span)

    def program(self) -> Program:
        rules = []
        while self.tok.kind != "eof":
            rules.append(self.rule())
        return Program(tuple(rules))

    def rule(self) -> Rule:
        head: list[Atom] = []
        had_bottom = False
        if self.at(":-"):
            had_bottom = True
        else:
            head.append(self.atom())
            while self.at("|"):
                self.advance()
                head.append(self.atom())
        body: list[Literal] = []
        if self.at(":-"):
            self.advance()
            body.append(self.literal())
            while self.at(","):
                self.advance()
                body.append(self.literal())
        self.expect(".")
        return Rule(tuple(head), tuple(body), had_bottom)

    def atom(self) -> Atom:
        tok = self.tok
        if tok.kind == "keyword" and tok.text == "#false":
            self.advance()
            return BOTTOM
        if tok.kind != "name":
            self.fail(f"expected an atom, found {tok.text or 'end of input'!r}")
        if tok.text.startswith(RESERVED_PREFIX) and not self.allow_reserved:
            self.fail(f"atom names starting with {RESERVED_PREFIX!r} are reserved")
        self.advance()
        return Atom(tok.text)

    def literal(self) -> Literal:
        start = self.tok
        negations = 0
        while self.at("~"):
            self.advance()
            negations += 1
        if self.tok.kind == "keyword" and self.tok.text in _AGG_KEYWORDS:
            if negations:
                self.fail("negation cannot be applied to an aggregate", start)
            return self.aggregate()
        return PropLiteral(self.atom(), negations)

    def plit(self) -> PropLiteral:
        negations = 0
        while self.at("~"):
            self.advance()
            negations += 1
        return PropLiteral(self.atom(), negations)

    def integer(self) -> int:
        tok = self.tok
        if tok.kind != "int":
            self.fail(f"expected an integer, found {tok.text or 'end of input'!r}")
        value = int(tok.text)
        if not INT64_MIN <= value <= INT64_MAX:
            self.fail(f"integer {value} does not fit in 64 bits")
        self.advance()
        return value

    def aggregate(self) -> Aggregate:
        function = _AGG_KEYWORDS[self.advance().text]
        self.expect("[")
        elements = []
        if not self.at("]"):
            elements.append(self.element(function))
            while self.at(","):
                self.advance()
                elements.append(self.element(function))
        self.expect("]")
        if function in PARITY:
            if self.tok.kind == "op" and self.tok.text in _COMPARATORS:
                self.fail(f"#{function.value} takes no comparator")
            return Aggregate(function, tuple(elements))
        tok = self.tok
        if tok.kind != "op" or tok.text not in _COMPARATORS:
            self.fail(f"expected a comparator, found {tok.text or 'end of input'!r}")
        self.advance()
        return Aggregate(function, tuple(elements), _COMPARATORS[tok.text], self.integer())

    def element(self, function: AggFunction):
        if function in UNWEIGHTED:
            return 1, self.plit()
        weight = self.integer()
        self.expect(":")
        return weight, self.plit()


def parse_program(text: str, *, allow_reserved: bool = False) -> Program:
    return _Parser(text, allow_reserved).program()


def parse_literal(text: str, *, allow_reserved: bool = True) -> Literal:
    parser = _Parser(text, allow_reserved)
    result = parser.literal()
    if parser.tok.kind != "eof":
        parser.fail(f"unexpected {parser.tok.text!r} after literal")
    return result


def format_literal(literal: Literal) -> str:
    if isinstance(literal, PropLiteral):
        return "~" * literal.negations + literal.atom.name
    function = literal.function
    if function in UNWEIGHTED:
        inner = ", ".join(format_literal(l) for _, l in literal.elements)
    else:
        inner = ", ".join(f"{w}:{format_literal(l)}" for w, l in literal.elements)
    text = f"#{function.value}[{inner}]"
    if literal.comparator is not None:
        text += f" {literal.comparator.value} {literal.bound}"
    return text


def format_rule(rule: Rule) -> str:
    body = ", ".join(format_literal(l) for l in rule.body)
    if rule.head:
        head = " | ".join(a.name for a in rule.head)
        return f"{head} :- {body}." if body else f"{head}."
    return f":- {body}." if body else f"{BOTTOM.name}."


def print_program(program: Program) -> str:
    return "".join(format_rule(rule) + "\n" for rule in program)
