"""Seeded random polynomials, multivectors and operators for property checks."""

import random

from .geometry import cotangent_chart, pi_cotangent_chart
from .hbar_ops import HbarOperator
from .superalgebra import EVEN, SuperPolynomial, joint_degree


def within_window(p, window):
    """Terms of ``p`` whose joint degree in momenta, hbar and fiber variables
    is at most ``window`` (``p`` itself when ``window`` is None)."""
    if window is None:
        return p
    idx = p.chart.joint_series
    return SuperPolynomial._make(p.chart, {m: c for m, c in p.terms.items()
                                           if sum(m[i] for i in idx) <= window})


def random_polynomial(chart, rng, terms=3, max_exp=2, names=None, coefficients=(-2, -1, 1, 2, 3),
                      max_degree=None, degree_names=None, hbar_max=0):
    """Sum of ``terms`` random monomials in ``names`` (default: all non-param
    variables); odd variables appear at most once per monomial.

    ``max_degree`` bounds the total degree in ``degree_names`` (default: all
    ``names``); ``hbar_max`` allows powers of hbar up to that bound.
    """
    if names is None:
        names = [chart.names[i] for i in range(chart.nvars) if chart.variables[i].role != "param"]
    degree_names = set(names if degree_names is None else degree_names)
    out = chart.zero()
    for _ in range(terms):
        m = chart.const(rng.choice(coefficients))
        deg = 0
        for n in names:
            cap = 1 if chart.parities[chart.idx(n)] else max_exp
            e = rng.randint(0, cap)
            if n in degree_names and max_degree is not None:
                e = min(e, max_degree - deg)
            if e > 0:
                m = m * chart.var(n) ** e
                if n in degree_names:
                    deg += e
        if hbar_max:
            m = m.hbar_shift(rng.randint(0, hbar_max))
        out = out + m
    return out


def random_homogeneous(chart, rng, parity=None, window=None, **kw):
    """A random polynomial of a single parity (chosen at random if None)."""
    p = within_window(random_polynomial(chart, rng, **kw), window)
    even, odd = p.parity_parts()
    if parity is None:
        parity = rng.randint(0, 1)
    pick = even if parity == EVEN else odd
    return pick if pick else random_homogeneous(chart, rng, parity, window, **kw)


def random_operator(chart, rng, terms=3, max_momenta=2, max_coord=2, hbar_max=1, window=None):
    """Random normal-ordered operator on ``chart`` with at most
    ``max_momenta`` momenta per term, restricted to ``window``."""
    K = cotangent_chart(chart)
    moms = [K.names[i] for i in K.momenta]
    coords = [K.names[i] for i in K.coordinates if K.names[i] not in moms]
    out = K.zero()
    for _ in range(terms):
        a = random_polynomial(K, rng, 1, max_exp=max_coord, names=coords)
        b = random_polynomial(K, rng, 1, max_exp=2, names=moms, coefficients=(1,), max_degree=max_momenta)
        term = a * b
        if hbar_max:
            term = term.hbar_shift(rng.randint(0, hbar_max))
        out = out + term
    return HbarOperator(within_window(out, window))


def random_multivector(M, rng, max_degree=3, terms=3, max_coord=2, window=None):
    """Random multivector on ``M`` with antimomentum degree at most
    ``max_degree``, restricted to ``window``."""
    X = pi_cotangent_chart(M)
    fibers = [X.names[f] for _, f in X.pairing]
    coords = [X.names[b] for b, _ in X.pairing]
    out = X.zero()
    for _ in range(terms):
        a = random_polynomial(X, rng, 1, max_exp=max_coord, names=coords)
        b = random_polynomial(X, rng, 1, max_exp=max_degree, names=fibers, coefficients=(1,),
                              max_degree=max_degree)
        out = out + a * b
    return within_window(out, window)


def seeded(seed):
    return random.Random(seed)
