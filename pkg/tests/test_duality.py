from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given

from koszul.coeff import I, to_coeff
from koszul.duality import (
    Density,
    GeneratingFunction,
    bigrading,
    bv_pair,
    check_closure,
    classical_limit,
    double_dual_sign,
    dual_operator,
    dual_operator_rho,
    dual_quantum_pullback,
    fiber_fourier,
    fourier_normalization,
    hat_by_integral,
    inverse_fiber_fourier,
    linear_dual_pullback,
    linear_pullback,
    pairing,
    quantum_pullback,
)
from koszul.errors import KoszulError, ParityError, WindowError
from koszul.fixtures import fixture
from koszul.generators import random_operator, seeded
from koszul.geometry import BundlePair, bundle_chart, canonical_poisson, cotangent_chart, mackenzie_xu, momentum_of
from koszul.hbar_ops import HbarOperator, apply, de_rham, divergence_half, hat, principal_symbol
from koszul.superalgebra import declare_chart

from strategies import seeds

HALF = Fraction(1, 2)
BASE = declare_chart([("x", 0)])


def odd_bundle(m):
    return BundlePair.from_bundle(bundle_chart(BASE, tuple((f"u{k + 1}", 1) for k in range(m))))


def fiber_monomials(chart, names):
    out = []
    for ex in product((0, 1), repeat=len(names)):
        v = chart.one()
        for n, e in zip(names, ex):
            if e:
                v = v * chart.var(n)
        out.append(v)
    return out


MIXED = BundlePair.from_bundle(bundle_chart(declare_chart([("x", 0), ("y", 1)]), (("u1", 1), ("u2", 0))))


@pytest.mark.parametrize("name", ["A", "B", "C", "D", "M"])
def test_generator_examples(name):
    pf = fixture(name)
    pair = BundlePair.odd_tangent(pf.M)
    assert dual_operator(de_rham(pf.M), pair) == divergence_half(pf.M)
    assert dual_operator(hat(pf.P), pair) == HbarOperator.multiplication(pf.P)
    f = pf.X.var(pf.X.names[0]) ** 2 + 1
    assert dual_operator(HbarOperator.multiplication(f.to_chart(pf.Y)), pair) == HbarOperator.multiplication(f)


def test_bigrading_examples():
    pair = odd_bundle(1)
    K = cotangent_chart(pair.E)
    assert bigrading(HbarOperator(K.var("u1") * K.var("p_x")), pair) == (1, 2)
    assert bigrading(HbarOperator(K.var("u1") * K.var(momentum_of(K, "u1"))), pair) == (1, 1)
    assert bigrading(HbarOperator(K.one().hbar_shift(1)), pair) == (1, 1)
    mixed = bigrading(HbarOperator(K.var("p_x") + K.var("u1")), pair)
    assert isinstance(mixed, dict) and len(mixed) == 2


def _ops(s, n=4):
    rng = seeded(s)
    return [random_operator(MIXED.E, rng, terms=3, max_momenta=2) for _ in range(n)]


@given(seeds)
def test_anti_isomorphism(s):
    A, B = _ops(s, 2)
    for a in A.parity_parts():
        for b in B.parity_parts():
            if a and b:
                sign = -1 if a.parity() and b.parity() else 1
                assert dual_operator(a * b, MIXED) == sign * (dual_operator(b, MIXED) * dual_operator(a, MIXED))


@given(seeds)
def test_bigrading_swap_and_involution(s):
    for L in _ops(s):
        a = bigrading(L, MIXED)
        b = bigrading(dual_operator(L, MIXED), MIXED, "E*")
        ka = sorted([a] if isinstance(a, tuple) else a)
        kb = sorted([b] if isinstance(b, tuple) else b)
        assert sorted((y, x) for x, y in ka) == kb
        assert dual_operator(dual_operator(L, MIXED), MIXED.swapped()) == double_dual_sign(L, MIXED)
        assert check_closure(L, MIXED)


@given(seeds)
def test_classical_limit_is_mackenzie_xu(s):
    A, B = _ops(s, 2)
    for L in (A, B):
        lhs, rhs = classical_limit(L, MIXED)
        assert lhs == rhs
    h1, h2 = principal_symbol(A), principal_symbol(B)
    assert canonical_poisson(mackenzie_xu(h1, MIXED), mackenzie_xu(h2, MIXED)) == \
        -mackenzie_xu(canonical_poisson(h1, h2), MIXED)


def test_rho_dual():
    N = declare_chart([("x", 0), ("t1", 1), ("t2", 1)])
    pair = BundlePair.odd_tangent(N)
    d = de_rham(N)
    assert dual_operator_rho(d, pair, N.one()) == dual_operator(d, pair)
    rho = N.one() + N.var("x") * N.var("t1") * N.var("t2")
    diff = dual_operator_rho(d, pair, rho) - dual_operator(d, pair)
    # the change is a vector field term: first order in momenta
    assert diff and all(sum(m[i] for i in diff.cotangent.momenta) == 1 for m in diff.symbol.terms)


def test_fourier_normalization_table():
    expected = [(1, 0), (I, 1), (1, 2), (I, 3), (1, 4)]
    assert [fourier_normalization(m) for m in range(5)] == [(to_coeff(c), k) for c, k in expected]


def test_fourier_of_constant_density():
    for m in range(4):
        pair = odd_bundle(m)
        F = fiber_fourier(Density(pair, "E", pair.E.one(), 0, HALF))
        top = pair.Estar.one()
        for w in pair.w:
            top = top * pair.Estar.var(w)
        sign = [1, -I, 1, -I][m]
        assert F.value == top.as_laurent().hbar_shift(-m).scale(sign)
        assert F.side == "E*" and F.mu == 1 - HALF


@pytest.mark.parametrize("m", range(4))
def test_fourier_round_trip_and_weights(m):
    pair = odd_bundle(m)
    x = pair.E.var("x")
    for v in fiber_monomials(pair.E, pair.u):
        for mu in (Fraction(0), HALF, Fraction(1)):
            d = Density(pair, "E", v * (x + 2), 0, mu)
            F = fiber_fourier(d)
            assert inverse_fiber_fourier(F).value == d.value
            assert F.weight() == d.weight()


def test_fourier_intertwines_multiplication_and_derivative():
    pair = odd_bundle(3)
    for f in fiber_monomials(pair.E, pair.u):
        F = fiber_fourier(Density(pair, "E", f, 0, HALF)).value
        for u, w in zip(pair.u, pair.w):
            lhs = fiber_fourier(Density(pair, "E", pair.E.var(u) * f, 0, HALF)).value
            assert lhs == F.derivative(w).hbar_shift(1).scale(I)


def test_fourier_rejects_even_fibers():
    with pytest.raises(ParityError):
        fiber_fourier(Density(MIXED, "E", MIXED.E.one(), 0, HALF))


def test_pairing():
    pair = odd_bundle(1)
    E, Es = pair.E, pair.Estar
    f = Density(pair, "E", E.var("u1") * E.var("x"), 0, HALF)
    g = Density(pair, "E*", 3 * Es.var(pair.w[0]), 1, HALF)
    assert pairing(f, g) == 3 * BASE.var("x").to_chart(pairing(f, g).chart)
    assert not pairing(f, Density(pair, "E*", Es.one(), 1, HALF))
    with pytest.raises(KoszulError):
        pairing(f, Density(pair, "E*", Es.one(), 0, HALF))


def test_pairing_is_bilinear():
    pair = odd_bundle(2)
    E, Es = pair.E, pair.Estar
    a, b = E.var("u1") * E.var("x"), E.var("u1") * 2
    g = Es.var(pair.w[0])
    val = lambda f: pairing(Density(pair, "E", f, 0, HALF), Density(pair, "E*", g, 1, HALF))
    assert val(a + b) == val(a) + val(b)


def test_hat_by_integral_matches_substitution():
    for name in ("A", "B"):
        pf = fixture(name)
        Y = pf.Y
        forms = [f for f in fiber_monomials(Y, [Y.names[j] for _, j in Y.pairing])
                 if sum(sum(m) for m in f.terms) <= 2]
        for w in forms:
            w = Y.var(Y.names[0]) * w
            assert hat_by_integral(pf.P, w) == apply(hat(pf.P), w)


E1 = BundlePair.from_bundle(bundle_chart(BASE, (("u1", 1), ("u2", 1))))
E2 = BundlePair.from_bundle(bundle_chart(BASE, (("v1", 1), ("v2", 1))))


def test_linear_generating_function_identity():
    gf = GeneratingFunction.linear(E1, E2, [[1, 0], [0, 1]])
    for f in fiber_monomials(E2.E, E2.u):
        d = Density(E2, "E", f * (E2.E.var("x") + 1))
        assert quantum_pullback(gf, d).value == linear_pullback(d, E1, [[1, 0], [0, 1]]).value


def test_linear_pullback_and_dual():
    Phi = [[2, -1], [3, 1]]
    gf = GeneratingFunction.linear(E1, E2, Phi)
    u1, u2 = E1.E.var("u1"), E1.E.var("u2")
    v1 = Density(E2, "E", E2.E.var("v1"))
    # v^alpha -> u^i Phi_i^alpha
    assert quantum_pullback(gf, v1).value == 2 * u1 + 3 * u2
    for g in fiber_monomials(E1.Estar, E1.w):
        d = Density(E1, "E*", g * (E1.Estar.var("x") - 3), 1)
        assert dual_quantum_pullback(gf, d).value == linear_dual_pullback(d, E2, Phi).value


def test_nonlinear_pullback_has_quantum_correction():
    base = GeneratingFunction.linear(E1, E2, [[2, -1], [3, 1]])
    W = base.workspace
    quartic = W.var("u1") * W.var("u2") * W.var("v1_dual") * W.var("v2_dual") * (W.var("x") + 2)
    gf = GeneratingFunction(base.S + quartic, E1, E2)
    f = Density(E2, "E", E2.E.var("v1") * E2.E.var("v2"))
    out = quantum_pullback(gf, f).value
    lin = quantum_pullback(base, f).value
    assert out != lin
    for f_ in fiber_monomials(E2.E, E2.u):
        for g_ in fiber_monomials(E1.Estar, E1.w):
            a = Density(E2, "E", f_, 0, HALF)
            b = Density(E1, "E*", g_, 1, HALF)
            assert pairing(quantum_pullback(gf, a), b) == pairing(a, dual_quantum_pullback(gf, b))


def test_generating_function_with_pure_base_term_is_rejected():
    base = GeneratingFunction.linear(E1, E2, [[1, 0], [0, 1]])
    W = base.workspace
    gf = GeneratingFunction(base.S + W.var("x") ** 2, E1, E2)
    with pytest.raises(WindowError):
        quantum_pullback(gf, Density(E2, "E", E2.E.var("v1")))


def test_bv_pair_matches_symmetric_pair_and_squares():
    for name in ("A", "D"):
        multi, forms = bv_pair(fixture(name))
        assert not multi * multi and not forms * forms


def test_dual_of_form_operator_is_the_opposite_conjugation():
    from koszul.hbar_ops import conjugate_exp

    for name in ("A", "D"):
        pf = fixture(name)
        multi, forms = bv_pair(pf)
        pair = BundlePair.odd_tangent(pf.M)
        dual = dual_operator(forms, pair)
        opposite = conjugate_exp(HbarOperator.multiplication(-pf.P), divergence_half(pf.M))
        assert dual == opposite
        assert (dual == multi) == (not pf.P)
