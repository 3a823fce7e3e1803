"""Parser for the element literal grammar.

Terms are joined by ``+`` and ``-``; a term is a product of factors joined by
``*`` or ``/``; a factor is an integer, an identifier, a parenthesised
expression, or a tuple ``(a, b, ...)`` for product rings, optionally raised to
a nonnegative integer power with ``^`` (``**`` is accepted too).  Whitespace is
insignificant.  Example: ``"1 - 1*t^4*X^4"``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*/^(),]))")


def tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            bad = text[pos:].lstrip()
            start = len(text) - len(text[pos:].lstrip())
            raise ParseError("unexpected character", start, bad[:1])
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("id", m.group(2), start))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    """Recursive descent to a small AST of nested tuples."""

    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos, val)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError("unexpected token", pos, val)
        return node

    def expr(self):
        kind, val, _ = self.peek()
        sign = None
        if kind == "op" and val in "+-":
            self.take()
            sign = val
        node = self.term()
        if sign == "-":
            node = ("neg", node)
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                node = ("add" if val == "+" else "sub", node, self.term())
            else:
                return node

    def term(self):
        node = self.power()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                node = ("mul" if val == "*" else "div", node, self.power())
            else:
                return node

    def power(self):
        node = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer", pos, val)
            node = ("pow", node, val)
        return node

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return ("num", val)
        if kind == "id":
            return ("id", val, pos)
        if kind == "op" and val == "(":
            items = [self.expr()]
            while self.peek()[0] == "op" and self.peek()[1] == ",":
                self.take()
                items.append(self.expr())
            self.expect(")")
            return items[0] if len(items) == 1 else ("tuple", items)
        if kind == "op" and val == "-":
            return ("neg", self.atom())
        raise ParseError("unexpected token", pos, val)


def parse_ast(text: str):
    return _Parser(text).parse()


def _numeric(node):
    """Return the rational value of a variable-free numeric subtree, else None."""
    tag = node[0]
    if tag == "num":
        return Fraction(node[1])
    if tag == "neg":
        v = _numeric(node[1])
        return None if v is None else -v
    if tag in ("add", "sub", "mul", "div"):
        a, b = _numeric(node[1]), _numeric(node[2])
        if a is None or b is None:
            return None
        if tag == "div":
            return None if b == 0 else a / b
        return a + b if tag == "add" else a - b if tag == "sub" else a * b
    if tag == "pow":
        a = _numeric(node[1])
        return None if a is None else a ** node[2]
    return None


def evaluate(node, R):
    """Evaluate an AST in ring ``R`` (payload result)."""
    num = _numeric(node)
    if num is not None:
        return R.from_fraction(num)
    tag = node[0]
    if tag == "id":
        try:
            return R.gen(node[1])
        except ParseError as exc:
            raise ParseError(f"unknown variable {node[1]!r} for ring {R}", node[2], node[1]) from exc
    if tag == "neg":
        return R.neg(evaluate(node[1], R))
    if tag == "add":
        return R.add(evaluate(node[1], R), evaluate(node[2], R))
    if tag == "sub":
        return R.sub(evaluate(node[1], R), evaluate(node[2], R))
    if tag == "mul":
        return R.mul(evaluate(node[1], R), evaluate(node[2], R))
    if tag == "pow":
        return R.pow(evaluate(node[1], R), node[2])
    if tag == "div":
        a, b = evaluate(node[1], R), evaluate(node[2], R)
        q = R.exact_div(a, b)
        if q is None:
            raise ParseError(f"division not exact in {R}")
        return q
    if tag == "tuple":
        return R.eval_tuple(node[1], evaluate)
    raise ParseError(f"bad node {tag}")


def parse_element(R, text: str):
    """Parse ``text`` as an element payload of ring ``R``.

    Evaluation happens in ``R.ambient()`` and the result is pulled back, so
    subrings such as ``QQ[t^2, t^3]`` accept ``"t^2 + t^3"`` while rejecting
    ``"t"``.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string literal, got {type(text).__name__}")
    if not text.strip():
        raise ParseError("empty literal", 0)
    node = parse_ast(text)
    amb = R.ambient()
    value = evaluate(node, amb)
    return value if amb is R else R.from_ambient(value)
