"""Expression parser.

Grammar (whitespace is ignored)::

    expr   := sign? term (('+' | '-') term)*
    term   := factor ('*'? factor)*
    factor := atom ('^' exponent)?
    atom   := rational | 'i' | 'hbar' | ident | '(' expr ')'
    rational := digits ('/' digits)?
    exponent := digits | '-' digits          (negative only for hbar)

Identifiers are resolved against a chart.  Products are taken left to
right, so ``xs1*xs2 + xs2*xs1`` is zero.  Raising an odd variable to a power
of at least two is an error rather than zero, since it is almost always a
typo.
"""

from fractions import Fraction
import re

from .coeff import I, to_coeff
from .errors import ChartError, ParseError
from .superalgebra import HBAR, format_polynomial

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def tokenize(text):
    """List of ``(kind, value, position)`` with kinds ``num``, ``name``,
    ``op`` and a final ``end``."""
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("num", m.group(1), start))
        elif m.group(2):
            out.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            out.append(("op", ch, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text, chart, env=None):
        self.text = text
        self.chart = chart
        self.env = env or {}
        self.tokens = tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise ParseError(f"expected {value!r}", tok[2], self.text)
        return tok

    def parse(self):
        out = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return out

    def expr(self):
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        out = self.term()
        if sign < 0:
            out = -out
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                t = self.term()
                out = out + t if tok[1] == "+" else out - t
            else:
                return out

    def _starts_factor(self, tok):
        return tok[0] in ("num", "name") or (tok[0] == "op" and tok[1] == "(")

    def term(self):
        out = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                out = out * self.factor()
            elif self._starts_factor(tok):
                out = out * self.factor()
            else:
                return out

    def factor(self):
        tok = self.peek()
        base, odd_name = self.atom()
        nxt = self.peek()
        if nxt[0] == "op" and nxt[1] == "^":
            self.take()
            neg = False
            t = self.peek()
            if t[0] == "op" and t[1] == "-":
                self.take()
                neg = True
            t = self.take()
            if t[0] != "num" or "/" in t[1]:
                raise ParseError("exponent must be a natural number", t[2], self.text)
            e = int(t[1])
            if odd_name is not None and e >= 2:
                raise ParseError(f"odd variable {odd_name!r} squared", tok[2], self.text)
            if neg:
                if not (tok[0] == "name" and tok[1] == HBAR):
                    raise ParseError("negative exponents are allowed for hbar only", t[2], self.text)
                return self.chart.one().as_laurent().hbar_shift(-e)
            return base ** e
        return base

    def atom(self):
        tok = self.take()
        kind, value, pos = tok
        C = self.chart
        if kind == "num":
            return C.const(to_coeff(Fraction(value))), None
        if kind == "name":
            if value == "i":
                return C.const(I), None
            if value in self.env and value not in C:
                try:
                    return self.env[value].to_chart(C), None
                except ChartError as exc:
                    raise ParseError(f"{value!r} does not live on this chart: {exc}", pos, self.text) from None
            try:
                v = C.var(value)
            except ChartError:
                raise ParseError(f"unknown identifier {value!r}", pos, self.text) from None
            return v, (value if C.parities[C.idx(value)] else None)
        if kind == "op" and value == "(":
            out = self.expr()
            self.expect(")")
            return out, None
        if kind == "end":
            raise ParseError("unexpected end of expression", pos, self.text)
        raise ParseError(f"unexpected {value!r}", pos, self.text)


def parse_expression(text, chart, env=None):
    """Parse ``text`` into a SuperPolynomial on ``chart``; ``env`` maps extra
    names to SuperPolynomials (named expressions)."""
    if not isinstance(text, str):
        raise ParseError("expression must be a string")
    return _Parser(text, chart, env).parse()


def to_text(p):
    """Text form that ``parse_expression`` reads back to ``p``."""
    return format_polynomial(p)
