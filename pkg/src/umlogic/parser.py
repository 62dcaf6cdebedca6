"""Recursive-descent parser for the concrete formula syntax.

Grammar (loosest to tightest binding)::

    formula  := implies ('<->' implies)*        # sugar: a <-> b == (a -> b) & (b -> a)
    implies  := or ('->' implies)?              # right-associative
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '~' unary | '[' grade ']' unary | '<' grade '>' unary
              | name | '(' formula ')'
    grade    := NUMBER ('/' NUMBER)?            # "1/8", "0.125", "1"

Atoms are identifiers.  Grade literals must denote rationals in [0, 1].
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .formula import And, Atom, Box, Diamond, Formula, GradeError, Implies, Not, Or, as_grade


class ParseError(ValueError):
    """Syntax error with position and the set of tokens that were legal."""

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.column = column
        self.expected = expected
        where = f"line {line}, column {column}"
        if expected:
            message = f"{message} at {where} (expected {', '.join(expected)})"
        else:
            message = f"{message} at {where}"
        super().__init__(message)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<WS>\s+)
  | (?P<IFF><->)
  | (?P<ARROW>->)
  | (?P<NUMBER>\d+\.\d+|\d+)
  | (?P<NAME>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<OP>[~&|()\[\]<>/])
    """,
    re.VERBOSE,
)

_OP_KINDS = {
    "~": "TILDE", "&": "AMP", "|": "PIPE", "(": "LPAREN", ")": "RPAREN",
    "[": "LBRACK", "]": "RBRACK", "<": "LT", ">": "GT", "/": "SLASH",
}


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind == "WS":
            newlines = value.count("\n")
            if newlines:
                line += newlines
                line_start = m.start() + value.rfind("\n") + 1
        else:
            if kind == "OP":
                kind = _OP_KINDS[value]
            tokens.append(_Token(kind, value, line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(_Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self, kind: str, expected: tuple[str, ...]) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.line, tok.column, expected)
        self.pos += 1
        return tok

    def formula(self) -> Formula:
        left = self.implies()
        while self.peek().kind == "IFF":
            self.pos += 1
            right = self.implies()
            left = And(Implies(left, right), Implies(right, left))
        return left

    def implies(self) -> Formula:
        left = self.or_()
        if self.peek().kind == "ARROW":
            self.pos += 1
            return Implies(left, self.implies())
        return left

    def or_(self) -> Formula:
        left = self.and_()
        while self.peek().kind == "PIPE":
            self.pos += 1
            left = Or(left, self.and_())
        return left

    def and_(self) -> Formula:
        left = self.unary()
        while self.peek().kind == "AMP":
            self.pos += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "TILDE":
            self.pos += 1
            return Not(self.unary())
        if tok.kind == "LBRACK":
            self.pos += 1
            grade = self.grade()
            self.take("RBRACK", ("']'",))
            return Box(grade, self.unary())
        if tok.kind == "LT":
            self.pos += 1
            grade = self.grade()
            self.take("GT", ("'>'",))
            return Diamond(grade, self.unary())
        if tok.kind == "NAME":
            self.pos += 1
            return Atom(tok.text)
        if tok.kind == "LPAREN":
            self.pos += 1
            inner = self.formula()
            self.take("RPAREN", ("')'",))
            return inner
        raise ParseError(
            f"unexpected {tok.text or 'end of input'!r}", tok.line, tok.column,
            ("'~'", "'['", "'<'", "atom", "'('"),
        )

    def grade(self) -> Fraction:
        tok = self.take("NUMBER", ("grade literal",))
        text = tok.text
        if self.peek().kind == "SLASH":
            self.pos += 1
            denom = self.take("NUMBER", ("denominator",))
            text = f"{text}/{denom.text}"
        try:
            return as_grade(text)
        except GradeError as exc:
            raise ParseError(str(exc), tok.line, tok.column) from None


def parse(text: str) -> Formula:
    """Parse concrete syntax into a :class:`Formula`.

    Raises :class:`ParseError` with line/column diagnostics on bad input;
    grade literals outside [0, 1] are rejected.
    """
    parser = _Parser(_tokenize(text))
    result = parser.formula()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.column)
    return result
