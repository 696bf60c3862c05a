"""Word expressions such as ``(1,1)^n (2,2)^n`` or ``(1,2)((3,4)^2)^m``.

Grammar (whitespace is insignificant)::

    word := '(' int (',' int)* ')' | '(' ')'
    atom := word | '(' expr ')'
    pow  := atom ['^' (int | symbol)]
    expr := pow+

Juxtaposition is concatenation.  Parity and positivity of literal entries
are checked by :func:`expand`, not by the parser.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

from .words import EvenWord, WordError

__all__ = [
    "Literal", "Concat", "Power", "WordExpr", "WordExprSyntaxError",
    "parse_word_expr", "expand", "symbols", "to_text",
]


@dataclass(frozen=True)
class Literal:
    entries: tuple[int, ...]


@dataclass(frozen=True)
class Concat:
    parts: tuple["WordExpr", ...]


@dataclass(frozen=True)
class Power:
    base: "WordExpr"
    exponent: Union[int, str]


WordExpr = Union[Literal, Concat, Power]


class WordExprSyntaxError(WordError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<sym>[A-Za-z_]\w*)|(?P<op>[(),^]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise WordExprSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, offset: int = 0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, what: str):
        kind, value, pos = self.peek()
        got = "end of input" if kind == "end" else repr(value)
        raise WordExprSyntaxError(f"expected {what}, got {got}", self.text, pos)

    def expect(self, value: str):
        if self.peek()[1] != value or self.peek()[0] != "op":
            self.fail(repr(value))
        return self.advance()

    def parse(self) -> WordExpr:
        e = self.expr()
        if self.peek()[0] != "end":
            self.fail("end of input")
        return e

    def expr(self) -> WordExpr:
        parts = [self.pow()]
        while self.peek()[:2] == ("op", "("):
            parts.append(self.pow())
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def pow(self) -> WordExpr:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.advance()
            kind, value, _ = self.peek()
            if kind == "int":
                self.advance()
                n = int(value)
                if n < 0:
                    raise WordExprSyntaxError("negative exponent", self.text, self.tokens[self.i - 1][2])
                return Power(base, n)
            if kind == "sym":
                self.advance()
                return Power(base, value)
            self.fail("integer or symbol exponent")
        return base

    def atom(self) -> WordExpr:
        self.expect("(")
        kind, value, _ = self.peek()
        if kind == "int":
            entries = [int(self.advance()[1])]
            while self.peek()[:2] == ("op", ","):
                self.advance()
                if self.peek()[0] != "int":
                    self.fail("integer")
                entries.append(int(self.advance()[1]))
            self.expect(")")
            return Literal(tuple(entries))
        if (kind, value) == ("op", ")"):
            self.advance()
            return Literal(())
        if (kind, value) == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        self.fail("integer, '(' or ')'")


def parse_word_expr(text: str) -> WordExpr:
    return _Parser(text).parse()


def symbols(e: WordExpr) -> set[str]:
    if isinstance(e, Literal):
        return set()
    if isinstance(e, Concat):
        return set().union(*(symbols(p) for p in e.parts))
    out = symbols(e.base)
    if isinstance(e.exponent, str):
        out.add(e.exponent)
    return out


def _flatten(e: WordExpr, bindings: Mapping[str, int]) -> list[int]:
    if isinstance(e, Literal):
        EvenWord(e.entries)
        return list(e.entries)
    if isinstance(e, Concat):
        out: list[int] = []
        for p in e.parts:
            out.extend(_flatten(p, bindings))
        return out
    n = e.exponent
    if isinstance(n, str):
        if n not in bindings:
            raise WordError(f"unbound symbol {n!r}")
        n = bindings[n]
        if n < 0:
            raise WordError(f"symbol {e.exponent!r} bound to negative value {n}")
    return _flatten(e.base, bindings) * n


def expand(e: WordExpr, bindings: Mapping[str, int] | None = None) -> EvenWord:
    return EvenWord(_flatten(e, bindings or {}))


def to_text(e: WordExpr) -> str:
    """Pretty-print; ``parse_word_expr(to_text(e)) == e``."""
    if isinstance(e, Literal):
        return "(" + ",".join(str(k) for k in e.entries) + ")"
    if isinstance(e, Concat):
        return " ".join(f"({to_text(p)})" if isinstance(p, Concat) else to_text(p) for p in e.parts)
    base = to_text(e.base)
    if isinstance(e.base, (Concat, Power)):
        base = f"({base})"
    return f"{base}^{e.exponent}"
