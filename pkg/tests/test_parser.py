from fractions import Fraction

import pytest
from hypothesis import given

from koszul.coeff import I
from koszul.errors import ParseError
from koszul.geometry import cotangent_chart, pi_cotangent_chart
from koszul.parser import parse_expression, to_text, tokenize
from koszul.superalgebra import declare_chart

from strategies import polynomials

M = declare_chart([("x1", 0), ("x2", 0)])
X = pi_cotangent_chart(M)
K = cotangent_chart(M)


def test_basic_expressions():
    x1, xs1, xs2 = X.var("x1"), X.var("xs1"), X.var("xs2")
    assert parse_expression("xs1*xs2 + xs2*xs1", X) == X.zero()
    assert parse_expression("3 x1 xs1", X) == 3 * x1 * xs1
    assert parse_expression("-(x1 + 1)^2", X) == -((x1 + 1) ** 2)
    assert parse_expression("1/2*x1 - i*xs2", X) == x1.scale(Fraction(1, 2)) - X.const(I) * xs2
    assert parse_expression("hbar^2*x1", X) == x1.hbar_shift(2)
    assert parse_expression("hbar^-1", X) == X.one().as_laurent().hbar_shift(-1)
    assert parse_expression("p1*x1", K) == K.var("p1") * K.var("x1")


@pytest.mark.parametrize("text, message, position", [
    ("xs1^2", "odd variable 'xs1' squared", 0),
    ("x1 + y", "unknown identifier 'y'", 5),
    ("x1 +", "unexpected end", 4),
    ("x1 $ 2", "unexpected character", 3),
    ("(x1", "expected ')'", 3),
    ("x1^-1", "negative exponents", 4),
    ("x1^1/2", "exponent must be a natural number", 3),
])
def test_errors_carry_positions(text, message, position):
    with pytest.raises(ParseError) as exc:
        parse_expression(text, X)
    assert message in str(exc.value)
    assert exc.value.position == position


def test_tokenize():
    kinds = [t[0] for t in tokenize("2*x1^3")]
    assert kinds == ["num", "op", "name", "op", "num", "end"]


def test_named_expressions():
    Q = X.var("x1") * X.var("xs2")
    assert parse_expression("2*Q + x1", X, {"Q": Q}) == 2 * Q + X.var("x1")


@given(polynomials(X, terms=4, hbar_max=2, coefficients=(-3, -1, 1, 2, Fraction(1, 3), I, 1 + I)))
def test_round_trip(p):
    assert parse_expression(to_text(p), X) == p
