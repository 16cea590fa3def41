from itertools import product

import pytest

from koszul.brackets import classical_bracket, derived_bracket, quantum_bracket
from koszul.coeff import I
from koszul.errors import NotPoissonError, ParityError
from koszul.fixtures import corrupted, fixture
from koszul.generators import random_multivector, seeded
from koszul.geometry import canonical_schouten, koszul_masters, pi_cotangent_chart
from koszul.hbar_ops import (
    HbarOperator,
    apply,
    commutator,
    de_rham,
    divergence_half,
    hat,
    koszul_brylinski,
    lie_derivative,
    principal_symbol,
)
from koszul.koszul import (
    adjoint_operator,
    big_D_P,
    binary_koszul,
    delta_P,
    exterior_d,
    higher_koszul_direct,
    higher_poisson,
    koszul_brackets_from_delta,
    lichnerowicz,
    modular_representative,
    naive_pencil_obstruction,
    pencil_form_side,
    pencil_multivector_side,
    symmetric_pair,
    validate_pinf,
)
from koszul.report import FAIL, PASS
from koszul.superalgebra import declare_chart

ALL = ["A", "B", "C", "D", "M"]


def _generators(chart):
    return [chart.var(n) for n in chart.names if chart.variable(n).role == "coord"]


@pytest.mark.parametrize("name", ALL)
def test_fixtures_are_certified(name):
    pf = fixture(name)
    assert not canonical_schouten(pf.P, pf.P)
    assert validate_pinf(pf.M, pf.P).P == pf.P


def test_lie_poisson_fixture_is_linear():
    pf = fixture("B")
    for m in pf.P.terms:
        assert sum(m[:3]) == 1


def test_rejection_with_witness():
    M = declare_chart([("x1", 0), ("x2", 0)])
    X = pi_cotangent_chart(M)
    P = X.var("x1") * X.var("xs1") * X.var("xs2")
    assert canonical_schouten(P, P) == X.zero()  # a bivector in two dimensions is Poisson
    bad = corrupted(fixture("A").P)
    with pytest.raises(NotPoissonError) as exc:
        validate_pinf(M, bad)
    assert exc.value.witness
    with pytest.raises(ParityError):
        validate_pinf(M, X.var("xs1"))


def test_higher_poisson_examples():
    A = fixture("A")
    x1, x2 = A.M.var("x1"), A.M.var("x2")
    assert higher_poisson(A, [x1, x2]) == A.M.const(3)
    assert higher_poisson(A, []) == A.M.zero()
    D = fixture("D")
    x, xi = D.M.var("x"), D.M.var("xi")
    assert higher_poisson(D, [x, xi, xi]) == -2 * xi
    assert higher_poisson(D, [x, xi]) == xi
    assert higher_poisson(D, [x]) == -xi


def test_brackets_alternate_parity():
    D = fixture("D")
    gens = [D.M.var("x"), D.M.var("xi")]
    for n in range(4):
        for args in product(gens, repeat=n):
            v = higher_poisson(D, list(args))
            if v:
                assert v.parity() == (n + sum(a.parity() for a in args)) % 2


def test_higher_koszul_direct_examples():
    A = fixture("A")
    Y = A.Y
    dx1, x2 = Y.var("dx1"), Y.var("x2")
    assert higher_koszul_direct(A, [dx1, x2]) == higher_poisson(A, [A.M.var("x1"), A.M.var("x2")]).to_chart(Y)
    assert higher_koszul_direct(A, [Y.var("x1"), x2]) == Y.zero()
    D = fixture("D")
    Y = D.Y
    value = higher_koszul_direct(D, [Y.var("dx"), Y.var("dxi"), Y.var("dxi")])
    assert value == 2 * Y.var("dxi")
    H, _ = koszul_masters(D.P)
    assert derived_bracket(H, [Y.var("dx"), Y.var("dxi"), Y.var("dxi")]) == value
    assert higher_koszul_direct(D, [Y.var("x"), Y.var("dxi"), Y.var("dxi")]) == -2 * Y.var("xi")


@pytest.mark.parametrize("name", ["A", "B", "D", "M"])
def test_delta_P_properties(name):
    pf = fixture(name)
    D = delta_P(pf)
    assert not D * D
    assert not commutator(de_rham(pf.M), D)
    assert principal_symbol(D) == koszul_masters(pf.P)[0]


def test_delta_P_on_constant_bivector():
    A = fixture("A")
    # Delta_P = -hbar^2 d_P with d_P = [d, i(P)]
    kb = koszul_brylinski(A.P).symbol.hbar_shift(2).scale(-1)
    assert delta_P(A).symbol == kb.formal()
    X = A.X
    from koszul.koszul import PinfStructure, Certificate
    zero = PinfStructure(A.M, X.zero(), Certificate(X.zero(), None))
    assert not delta_P(zero)


def test_delta_P_decomposition_on_differential_poisson():
    C = fixture("C")
    parts = C.components()
    P2 = parts[2]
    X = C.X
    Q = {"xi": -C.M.var("x")}
    from koszul.koszul import PinfStructure, Certificate
    P2s = PinfStructure(C.M, P2, Certificate(X.zero(), None))
    lhs = delta_P(C)
    rhs = lie_derivative(Q, C.M) + HbarOperator(koszul_brylinski(P2).symbol.hbar_shift(2).scale(-1).formal())
    assert lhs == rhs
    assert delta_P(P2s) == HbarOperator(koszul_brylinski(P2).symbol.hbar_shift(2).scale(-1).formal())


@pytest.mark.parametrize("name", ["A", "B"])
def test_koszul_brackets_on_poisson_structures(name):
    pf = fixture(name)
    Y = pf.Y
    gens = _generators(Y)
    assert koszul_brackets_from_delta(pf, []) == Y.zero()
    for g in gens:
        assert koszul_brackets_from_delta(pf, [g]) == Y.zero()
        q = koszul_brackets_from_delta(pf, [g], "quantum")
        # [w] = -i hbar d_P(w) with the plain Koszul-Brylinski differential d_P
        assert q == apply(koszul_brylinski(pf.P), g).hbar_shift(1).scale(-I).formal()
    for a, b in product(gens, repeat=2):
        cl = koszul_brackets_from_delta(pf, [a, b])
        assert cl == binary_koszul(pf, a, b)
        assert koszul_brackets_from_delta(pf, [a, b], "quantum") == cl
    for args in product(gens[:3], repeat=3):
        assert koszul_brackets_from_delta(pf, list(args), "quantum") == Y.zero()


def test_koszul_direct_matches_delta_on_homotopy_structure():
    D = fixture("D")
    gens = _generators(D.Y)
    for n in range(4):
        for args in product(gens, repeat=n):
            assert koszul_brackets_from_delta(D, list(args)) == higher_koszul_direct(D, list(args))


def test_binary_rule_differs_from_delta_on_odd_manifold():
    C = fixture("C")
    Y = C.Y
    dxi, xi = Y.var("dxi"), Y.var("xi")
    x = Y.var("x")
    assert binary_koszul(C, dxi, xi) == 2 * x
    assert classical_bracket(delta_P(C), [dxi, xi]) == -2 * x


@pytest.mark.parametrize("name", ["A", "D"])
def test_form_pencil(name):
    pf = fixture(name)
    pen = pencil_form_side(pf)
    assert not pen.square()
    assert pen.operator == pen.conjugated
    assert pen.at(0) == de_rham(pen.operator.chart)
    # (ad P^)^2 (d) is the hat of [[P, P]], which is zero
    Ph = hat(pf.P)
    assert not commutator(commutator(de_rham(pf.M), Ph), Ph)


@pytest.mark.parametrize("name", ["A", "D", "M"])
def test_multivector_pencil(name):
    pf = fixture(name)
    pen = pencil_multivector_side(pf)
    assert not pen.square()
    assert pen.operator == pen.conjugated
    assert pen.at(0) == divergence_half(pen.operator.chart)


@pytest.mark.parametrize("name", ["A", "D", "M"])
def test_big_D_P(name):
    pf = fixture(name)
    DP = big_D_P(pf)
    assert not DP * DP
    dP = modular_representative(pf)
    rhs = lichnerowicz(pf) + HbarOperator.multiplication(dP.hbar_shift(1).scale(-I))
    assert DP == rhs
    rng = seeded(3)
    for _ in range(4):
        T = random_multivector(pf.M, rng)
        # [delta, P](T) = delta(P) T + [[P, T]]
        lhs = apply(DP, T).hbar_shift(-1).scale(I)
        assert lhs == dP * T + canonical_schouten(pf.P, T)


def test_modular_obstruction():
    A = fixture("A")
    rep, sq, mod = naive_pencil_obstruction(A)
    assert rep.status == PASS and not sq and not mod
    M = fixture("M")
    X = M.X
    rep, sq, mod = naive_pencil_obstruction(M, samples=[X.var("x1"), X.var("xs1"), X.var("x2") * X.var("xs2")])
    assert rep.status == PASS
    assert mod == -X.var("xs2")
    assert sq
    assert adjoint_operator(mod)


def test_symmetric_pair():
    A = fixture("A")
    multi, forms = symmetric_pair(A)
    assert not multi * multi and not forms * forms
    assert forms == de_rham(A.M) + delta_P(A)
    D = fixture("D")
    multi, forms = symmetric_pair(D)
    assert not multi * multi and not forms * forms
    X = A.X
    from koszul.koszul import PinfStructure, Certificate
    zero = PinfStructure(A.M, X.zero(), Certificate(X.zero(), None))
    assert symmetric_pair(zero) == (divergence_half(A.M), de_rham(A.M))


def test_quantum_brackets_of_homotopy_structure_have_corrections():
    D = fixture("D")
    Y = D.Y
    q = quantum_bracket(delta_P(D), [Y.var("dxi")])
    assert q.set_hbar_zero() == classical_bracket(delta_P(D), [Y.var("dxi")])
    assert exterior_d(Y.var("x")) == Y.var("dx")
    assert FAIL != PASS


def test_higher_jacobi_identities_for_even_arguments():
    # sum over unshuffles of [[a_S], a_rest] vanishes when Delta^2 = 0; for
    # even arguments every Koszul sign is +1
    from itertools import combinations

    D = fixture("D")
    Y = D.Y
    L = delta_P(D)
    even = [Y.var("x"), Y.var("dxi"), Y.var("x") * Y.var("dxi"), Y.var("xi") * Y.var("dx")]

    def jacobiator(args):
        total = Y.zero()
        n = len(args)
        for k in range(n + 1):
            for S in combinations(range(n), k):
                inner = quantum_bracket(L, [args[i] for i in S])
                total = total + quantum_bracket(L, [inner] + [args[i] for i in range(n) if i not in S])
        return total

    for n in range(4):
        for S in combinations(range(len(even)), n):
            assert not jacobiator([even[i] for i in S])
