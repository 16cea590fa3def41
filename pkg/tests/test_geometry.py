import pytest
from hypothesis import given

from koszul.errors import ChartError
from koszul.fixtures import fixture
from koszul.generators import random_polynomial, seeded
from koszul.geometry import (
    BundlePair,
    bundle_chart,
    canonical_poisson,
    canonical_schouten,
    cotangent_chart,
    koszul_masters,
    mackenzie_xu,
    mackenzie_xu_inverse,
    momentum_of,
    master_D,
    master_Dstar,
    pi_cotangent_chart,
    pi_tangent_chart,
    star_substitution,
)
from koszul.koszul import schouten_antisymmetric
from koszul.superalgebra import EVEN, ODD, declare_chart, substitute

from strategies import homogeneous, seeds

R2 = declare_chart([("x1", 0), ("x2", 0)])
R11 = declare_chart([("x", 0), ("xi", 1)])


def _parity(chart, name):
    return chart.parities[chart.idx(name)]


def test_cotangent_chart_parities():
    K = cotangent_chart(R11)
    assert _parity(K, "p_x") == EVEN
    assert _parity(K, "p_xi") == ODD
    Y = pi_tangent_chart(declare_chart([("x", 0)]))
    KY = cotangent_chart(Y)
    assert _parity(KY, "dx") == ODD and _parity(KY, "pi_x") == ODD
    with pytest.raises(ChartError):
        cotangent_chart(KY)


def test_odd_charts():
    X = pi_cotangent_chart(R2)
    assert _parity(X, "xs1") == ODD and _parity(X, "xs2") == ODD
    X11 = pi_cotangent_chart(R11)
    assert _parity(X11, "xs") == ODD and _parity(X11, "xis") == EVEN
    assert pi_cotangent_chart(declare_chart([])).names == ("hbar",)
    with pytest.raises(ChartError):
        pi_cotangent_chart(X)


def test_canonical_poisson_convention():
    K = cotangent_chart(declare_chart([("x", 0)]))
    x, p = K.var("x"), K.var("p_x")
    assert canonical_poisson(p, x) == K.one()
    assert canonical_poisson(x, p) == -K.one()
    assert canonical_poisson(x, x) == K.zero()


def test_schouten_convention_and_examples():
    X = pi_cotangent_chart(R2)
    x1, xs1, xs2 = X.var("x1"), X.var("xs1"), X.var("xs2")
    assert canonical_schouten(x1, xs1) == X.one()
    assert canonical_schouten(xs1, x1) == X.one()
    assert canonical_schouten(x1, xs2) == X.zero()
    assert canonical_schouten(fixture("A").P, fixture("A").P) == X.zero()
    assert canonical_schouten(x1 * xs1, x1 * xs1) == X.zero()
    # on vector fields the bracket is the commutator:
    # [x1^2 d1, x1 d1] = (x1^2 - 2 x1^2) d1
    T = x1 * x1 * xs1
    assert canonical_schouten(T, x1 * xs1) == -x1 * x1 * xs1


def _explicit_H(P):
    """dx^a dP/dx^a(x, pi) + (-1)^a dP/dx*_a(x, pi) p_a, written out."""
    X = P.chart
    Y = pi_tangent_chart(X.base)
    K = cotangent_chart(Y)
    dname = {Y.names[b]: Y.names[f] for b, f in Y.pairing}
    to_pi = {X.names[f]: K.var(momentum_of(K, dname[X.names[b]])) for b, f in X.pairing}
    out = K.zero()
    for b, f in X.pairing:
        a = X.names[b]
        out = out + K.var(dname[a]) * substitute(P.derivative(a), to_pi, K)
        term = substitute(P.derivative(X.names[f]), to_pi, K) * K.var(momentum_of(K, a))
        out = out + (-term if X.parities[b] else term)
    return out


@pytest.mark.parametrize("name", ["A", "B", "C", "D", "M"])
def test_H_P_matches_explicit_display(name):
    pf = fixture(name)
    H, Hs = koszul_masters(pf.P)
    D = master_D(pf.Y)
    assert H == canonical_poisson(D, star_substitution(pf.P))
    assert H == _explicit_H(pf.P)
    assert Hs == canonical_poisson(master_Dstar(pf.X), pf.P.to_chart(Hs.chart))
    assert canonical_poisson(H, H) == H.chart.zero()
    assert canonical_poisson(Hs, Hs) == Hs.chart.zero()


def test_zero_P_gives_zero_hamiltonian():
    X = pi_cotangent_chart(R2)
    H, Hs = koszul_masters(X.zero())
    assert not H and not Hs


def test_mackenzie_xu_of_Dstar_is_minus_D():
    pf = fixture("A")
    pair = BundlePair.odd_cotangent(pf.M)
    assert mackenzie_xu(master_Dstar(pf.X), pair) == -master_D(pf.Y)
    K = cotangent_chart(pair.E)
    assert mackenzie_xu(K.const(5), pair) == cotangent_chart(pair.Estar).const(5)


def _bundle():
    M = declare_chart([("x", 0), ("y", 1)])
    return BundlePair.from_bundle(bundle_chart(M, (("u1", 1), ("u2", 0))))


PAIR = _bundle()
KE = cotangent_chart(PAIR.E)


@given(homogeneous(KE, terms=2, max_exp=1), homogeneous(KE, terms=2, max_exp=1))
def test_mackenzie_xu_anti_preserves_bracket(h1, h2):
    lhs = canonical_poisson(mackenzie_xu(h1, PAIR), mackenzie_xu(h2, PAIR))
    assert lhs == -mackenzie_xu(canonical_poisson(h1, h2), PAIR)


@given(seeds)
def test_mackenzie_xu_is_invertible(s):
    h = random_polynomial(KE, seeded(s), terms=4, max_exp=1)
    assert mackenzie_xu_inverse(mackenzie_xu(h, PAIR), PAIR) == h


K2 = cotangent_chart(R11)


@given(homogeneous(K2, terms=2, max_exp=1), homogeneous(K2, terms=2, max_exp=1),
       homogeneous(K2, terms=2, max_exp=1))
def test_poisson_jacobi(f, g, h):
    def sgn(a, b):
        return -1 if a.parity() and b.parity() else 1
    # graded Jacobi: {f,{g,h}} = {{f,g},h} + (-1)^{fg} {g,{f,h}}
    lhs = canonical_poisson(f, canonical_poisson(g, h))
    rhs = canonical_poisson(canonical_poisson(f, g), h) + sgn(f, g) * canonical_poisson(g, canonical_poisson(f, h))
    assert lhs == rhs


X11 = pi_cotangent_chart(R11)


def _shifted(a, b):
    return -1 if ((a.parity() + 1) * (b.parity() + 1)) % 2 else 1


@given(homogeneous(X11, terms=2, max_exp=1), homogeneous(X11, terms=2, max_exp=1),
       homogeneous(X11, terms=2, max_exp=1))
def test_schouten_odd_jacobi(T, S, U):
    B = schouten_antisymmetric
    lhs = B(T, B(S, U))
    assert lhs == B(B(T, S), U) + _shifted(T, S) * B(S, B(T, U))


@given(homogeneous(X11, terms=2, max_exp=1), homogeneous(X11, terms=2, max_exp=1))
def test_schouten_symmetry(T, S):
    assert schouten_antisymmetric(S, T) == -_shifted(T, S) * schouten_antisymmetric(T, S)
    sign = -1 if T.parity() and S.parity() else 1
    assert canonical_schouten(S, T) == sign * canonical_schouten(T, S)
