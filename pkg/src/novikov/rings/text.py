"""Canonical text grammar shared by all ring elements.

Terms are joined with `` + `` / `` - ``; a term is ``coeff*z^j*u1^a*u2^b``
with unit coefficients omitted.  The parser is a small recursive-descent
evaluator over a target ring, so products are formed with that ring's own
multiplication rule.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import DomainError, ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([-+*/^()]))")


def format_coeff(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


def term_str(c, tail: str) -> str:
    if not tail:
        return format_coeff(c)
    if c == 1:
        return tail
    if c == -1:
        return "-" + tail
    return f"{format_coeff(c)}*{tail}"


def join_strings(parts) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def join_terms(pairs) -> str:
    return join_strings([term_str(c, t) for c, t in pairs])


def _tokenize(text: str):
    pos, toks = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:pos + 1]!r} at position {pos} in {text!r}")
        num, name, op = m.groups()
        start = m.start(1) if num else m.start(2) if name else m.start(3)
        toks.append((("num", int(num)) if num else ("name", name) if name else ("op", op), start))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text, ring):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def fail(self, msg, pos=None):
        if pos is None:
            pos = self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)
        raise ParseError(f"{msg} at position {pos} in {self.text!r}")

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        if self.peek() != ("op", op):
            self.fail(f"expected {op!r}")
        self.i += 1

    def expr(self):
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        val = self.term()
        if sign < 0:
            val = -val
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.factor()
            if op == "*":
                val = val * rhs
            else:
                try:
                    val = self.ring.divide(val, rhs)
                except DomainError as exc:
                    self.fail(str(exc))
        return val

    def factor(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.i += 1
            neg = False
            if self.peek() == ("op", "-"):
                neg = True
                self.i += 1
            kind, n = self.take()
            if kind != "num":
                self.fail("expected integer exponent", self.toks[self.i - 1][1] if self.i <= len(self.toks) else None)
            if neg:
                try:
                    base = self.ring.inverse(base)
                except DomainError as exc:
                    self.fail(str(exc))
            result = self.ring.one
            for _ in range(n):
                result = result * base
            return result
        return base

    def atom(self):
        pos = self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)
        kind, val = self.take()
        if kind == "num":
            return self.ring.coerce(val)
        if kind == "name":
            try:
                return self.ring.variable(val)
            except KeyError:
                self.fail(f"unknown symbol {val!r}", pos)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        self.fail("unexpected token" if kind else "unexpected end of input", pos)


def parse_expression(text: str, ring):
    """Evaluate ``text`` in ``ring`` (anything with coerce/variable/divide/inverse/one)."""
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {text!r}")
    p = _Parser(text, ring)
    if not p.toks:
        p.fail("empty expression", 0)
    val = p.expr()
    if p.i != len(p.toks):
        p.fail("trailing input")
    return val
