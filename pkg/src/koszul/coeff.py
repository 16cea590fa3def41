"""Gaussian rational coefficients.

Coefficients are elements of sympy's ``QQ_I`` domain.  A few quirks of that
domain matter here: ``QQ_I(1, 0) == 1`` is False, so every comparison goes
through :func:`to_coeff` first, and zero tests use ``bool``.
"""

from fractions import Fraction
from numbers import Integral, Rational

from sympy.polys.domains import QQ_I

ZERO = QQ_I.zero
ONE = QQ_I.one
I = QQ_I(0, 1)
MINUS_I = QQ_I(0, -1)

# (-i)^k for k mod 4, the phase carried by k factors of -i*hbar.
NEG_I_POWERS = (ONE, MINUS_I, -ONE, I)


def to_coeff(value):
    """Convert ints, Fractions, complex numbers with rational parts, or QQ_I
    elements to a QQ_I element."""
    if isinstance(value, QQ_I.dtype):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, Integral):
        return QQ_I(int(value), 0)
    if isinstance(value, Rational):
        f = Fraction(value)
        return QQ_I(QQ_I.dom(f.numerator, f.denominator), 0)
    if isinstance(value, complex):
        re, im = Fraction(value.real), Fraction(value.imag)
        if re.denominator > 2**20 or im.denominator > 2**20:
            raise TypeError(f"refusing inexact complex coefficient {value!r}")
        return QQ_I(QQ_I.dom(re.numerator, re.denominator),
                    QQ_I.dom(im.numerator, im.denominator))
    try:
        return QQ_I.convert(value)
    except Exception as exc:  # sympy raises CoercionFailed
        raise TypeError(f"cannot use {value!r} as a coefficient") from exc


def is_coeff_like(value):
    return isinstance(value, (Integral, Rational, complex, QQ_I.dtype)) and not isinstance(value, bool)


def parts(c):
    """Real and imaginary parts as Fractions."""
    return (Fraction(int(c.x.numerator), int(c.x.denominator)),
            Fraction(int(c.y.numerator), int(c.y.denominator)))


def inverse(c):
    if not c:
        raise ZeroDivisionError("inverse of zero coefficient")
    return QQ_I.quo(ONE, c)


def divide(a, b):
    return QQ_I.quo(a, b)


def _rat(f):
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_coeff(c):
    """Text form readable by the expression parser, e.g. ``3/2``, ``-i``,
    ``(1 + 2*i)``."""
    re, im = parts(c)
    if not im:
        return _rat(re)
    if not re:
        if im == 1:
            return "i"
        if im == -1:
            return "-i"
        return f"{_rat(im)}*i"
    sign = "+" if im > 0 else "-"
    mag = abs(im)
    imag = "i" if mag == 1 else f"{_rat(mag)}*i"
    return f"({_rat(re)} {sign} {imag})"
