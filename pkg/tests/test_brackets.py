import pytest
from hypothesis import given

from koszul.brackets import (
    TwistedOperator,
    check_koszul_axioms,
    check_quantum_leibniz,
    classical_bracket,
    derived_bracket,
    quantum_bracket,
    sigma_brackets,
)
from koszul.coeff import I
from koszul.errors import ChartError, DivisibilityError, NotInvertibleError
from koszul.fixtures import fixture
from koszul.geometry import cotangent_chart, master_D, pi_tangent_chart
from koszul.hbar_ops import HbarOperator, apply, principal_symbol
from koszul.koszul import binary_koszul, delta_P, exterior_d
from koszul.report import FAIL, PASS
from koszul.superalgebra import declare_chart

from strategies import operators

R = declare_chart([("x", 0)])
x = R.var("x")
p = HbarOperator.momentum(R, "x")


def test_quantum_bracket_examples():
    assert quantum_bracket(p, []) == R.zero()
    assert classical_bracket(p * p, [x ** 2, x ** 3]) == 12 * x ** 3
    # one-bracket of an operator with L(1) = 0 is (i/hbar) L(f)
    L = p * p + HbarOperator.multiplication(x) * p
    f = x ** 3
    assert quantum_bracket(L, [f]).hbar_shift(1).scale(-I) == apply(L, f)


def test_non_hbar_differential_operator_is_rejected():
    plain_derivative = p.div_laurent()  # d/dx = (i / hbar) p
    with pytest.raises(DivisibilityError):
        quantum_bracket(plain_derivative, [x])
    with pytest.raises(DivisibilityError):
        quantum_bracket(plain_derivative * plain_derivative, [x, x])


def test_derived_bracket_examples():
    M = declare_chart([("x1", 0), ("x2", 0)])
    Y = pi_tangent_chart(M)
    D = master_D(Y)
    f = Y.var("x1") ** 2 * Y.var("x2")
    assert derived_bracket(D, [f]) == exterior_d(f)
    K = cotangent_chart(Y)
    assert derived_bracket(K.zero(), [f, f]) == Y.zero()
    with pytest.raises(ChartError):
        derived_bracket(f, [f])


C = declare_chart([("x1", 0), ("x2", 0), ("theta", 1)])
FUNCS = [C.var("x1"), C.var("x2") ** 2, C.var("theta"), C.var("x1") * C.var("theta")]


@given(operators(C, terms=3, max_momenta=3))
def test_classical_brackets_are_derived_brackets(L):
    H = principal_symbol(L)
    for n in range(4):
        for k in range(len(FUNCS) - n + 1):
            args = FUNCS[k:k + n]
            assert classical_bracket(L, args) == derived_bracket(H, args)


def test_quantum_leibniz():
    assert check_quantum_leibniz(p * p, 1, [x, x ** 2, R.one()]).status == PASS
    L = delta_P(fixture("D"))
    Y = fixture("D").Y
    sample = [Y.var(n) for n in ("x", "xi", "dx", "dxi")] + [Y.var("x") * Y.var("dxi")]
    for n in (1, 2, 3):
        assert check_quantum_leibniz(L, n, sample, seed=n).status == PASS
    bad = check_quantum_leibniz(L, 2, sample, seed=2, sign=-1)
    assert bad.status == FAIL and bad.witness


def _sample(pf):
    Y = pf.Y
    gens = [Y.var(n) for n in Y.names if Y.variable(n).role == "coord"]
    return gens + [gens[0] * gens[-1]]


def test_koszul_axioms_of_binary_bracket():
    pf = fixture("A")
    rep = check_koszul_axioms(lambda a, b: binary_koszul(pf, a, b), _sample(pf), d=exterior_d)
    assert rep.status == PASS, rep.witness
    zero = check_koszul_axioms(lambda a, b: pf.Y.zero(), _sample(pf), d=exterior_d)
    assert zero.status == PASS


def test_koszul_axioms_negative_control():
    pf = fixture("A")

    def flipped(a, b):
        v = binary_koszul(pf, a, b)
        return v if a.parity() == 0 else -v

    rep = check_koszul_axioms(flipped, _sample(pf))
    assert rep.status == FAIL and "symmetry" in rep.witness


def test_sigma_brackets():
    N = declare_chart([("x", 0), ("t1", 1), ("t2", 1)])
    L = HbarOperator.momentum(N, "x") * HbarOperator.momentum(N, "x")
    f, g = N.var("x") ** 2, N.var("t1")
    plain = TwistedOperator(L, N.one())
    assert sigma_brackets(plain, [f]) == quantum_bracket(L, [f])
    twisted = plain.rescaled(N.var("x") * N.var("t1") * N.var("t2"))
    for args in ([f], [f, g], [f, g, N.var("t2")]):
        assert sigma_brackets(plain, args, "classical") == sigma_brackets(twisted, args, "classical")
    assert sigma_brackets(plain, [f], "quantum") != sigma_brackets(twisted, [f], "quantum")
    with pytest.raises(NotInvertibleError):
        TwistedOperator(L, N.var("t1") * N.var("t2"))
