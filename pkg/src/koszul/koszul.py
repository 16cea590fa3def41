"""P-infinity structures and the brackets they generate.

A P-infinity structure on ``M`` is an even multivector ``P(x, x*)`` with
``[[P, P]] = 0``.  It gives higher Poisson brackets of functions (derived
brackets of the Schouten bracket), higher Koszul brackets of forms (defined
on functions and differentials, extended as multiderivations), and the
operator ``Delta_P = [d, P^]`` whose classical brackets are compared with the
direct construction.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .errors import ChartError, NotPoissonError, ParityError
from .geometry import (
    canonical_schouten,
    pi_cotangent_chart,
    pi_tangent_chart,
    with_params,
)
from .hbar_ops import (
    HbarOperator,
    apply,
    commutator,
    conjugate_exp,
    de_rham,
    divergence_half,
    divergence_rho,
    hat,
    vector_field_operator,
)
from .brackets import classical_bracket, quantum_bracket
from .report import Timer, verdict
from .superalgebra import EVEN, SuperPolynomial


@dataclass(frozen=True)
class Certificate:
    bracket: SuperPolynomial
    window: object

    @property
    def valid(self):
        return not self.bracket


@dataclass(frozen=True)
class PinfStructure:
    """A certified even multivector ``P`` on the odd cotangent chart of ``M``."""

    M: object
    P: SuperPolynomial
    certificate: Certificate = field(compare=False)

    @property
    def X(self):
        return pi_cotangent_chart(self.M)

    @property
    def Y(self):
        return pi_tangent_chart(self.M)

    def components(self):
        """Homogeneous k-vector parts of P."""
        return self.P.grade("fiber")


def validate_pinf(M, P):
    """Certify ``[[P, P]] = 0``; raise NotPoissonError with a witness term
    otherwise."""
    X = pi_cotangent_chart(M)
    if P.chart != X:
        P = P.to_chart(X)
    if P.parity() != EVEN:
        raise ParityError("a P-infinity structure must be even")
    br = canonical_schouten(P, P)
    if br:
        m, c = next(iter(sorted(br.terms.items(), key=lambda t: t[0])))
        witness = SuperPolynomial._make(X, {m: c})
        raise NotPoissonError(f"[[P, P]] = {br} is not zero (witness term {witness})", br)
    return PinfStructure(M, P, Certificate(br, P.window))


def schouten_antisymmetric(T, S):
    """The Schouten bracket in its antisymmetric normalization,
    ``(-1)^T [[T, S]]``, for which ``(S, T) -> -(-1)^{(T+1)(S+1)} (T, S)``
    and ``(x*_a, x^b) = -delta_a^b``."""
    out = canonical_schouten(T, S)
    return -out if T.parity() else out


def higher_poisson(pinf, fs):
    """``(...(P, f_1), ..., f_n)`` restricted to ``x* = 0``, nested with the
    antisymmetric normalization of the Schouten bracket.

    With this normalization a constant bivector ``P = c x*_2 x*_1`` gives
    ``{x^1, x^2} = c`` and a linear term ``P^a x*_a`` gives ``{f} = Q f`` with
    ``Q^a = -P^a``.
    """
    X = pinf.X
    T = pinf.P
    for f in fs:
        if f.chart.kind == "cotangent" or f.chart.kind == "pi_cotangent":
            raise ChartError("arguments must be functions on M")
        T = schouten_antisymmetric(T, f.to_chart(X))
    fibers = [X.names[j] for _, j in X.pairing]
    return T.drop(fibers, pinf.M)


def exterior_d(omega):
    """Plain de Rham differential ``dx^a d/dx^a`` on the odd tangent chart."""
    Y = omega.chart
    if Y.kind != "pi_tangent":
        raise ChartError("exterior_d acts on forms")
    out = Y.zero()
    for b, f in Y.pairing:
        der = omega.derivative(Y.names[b])
        if der:
            out = out + Y.var(Y.names[f]) * der
    return out


# -- direct higher Koszul brackets ------------------------------------------

def _expand(form):
    """Split a form into (scalar coefficient polynomial, generator tuple)
    pairs, generators listed in chart order with multiplicity."""
    Y = form.chart
    gen_idx = [i for i, v in enumerate(Y.variables) if v.role == "coord"]
    out = []
    for m, c in form.terms.items():
        gens = []
        for i in gen_idx:
            gens.extend([i] * m[i])
        scal = [0 if i in gen_idx else e for i, e in enumerate(m)]
        out.append((SuperPolynomial._make(Y, {tuple(scal): c}), tuple(gens)))
    return out


class _KoszulEvaluator:
    def __init__(self, pinf):
        self.pinf = pinf
        self.Y = pinf.Y
        Y = self.Y
        self.is_diff = {f: b for b, f in Y.pairing}
        self.cache = {}

    def par(self, gens):
        return sum(self.Y.parities[g] for g in gens) & 1

    def mono(self, gens):
        Y = self.Y
        out = Y.one()
        for g in gens:
            out = out * Y.var(Y.names[g])
        return out

    def value(self, slots):
        hit = self.cache.get(slots)
        if hit is not None:
            return hit
        res = self._value(slots)
        self.cache[slots] = res
        return res

    def _value(self, slots):
        Y = self.Y
        n = len(slots)
        if n == 0:
            return exterior_d(self.pinf.P.drop([self.pinf.X.names[j] for _, j in self.pinf.X.pairing],
                                               self.pinf.M).to_chart(Y))
        if any(len(s) == 0 for s in slots):
            return Y.zero()
        j = next((k for k, s in enumerate(slots) if len(s) >= 2), None)
        if j is None:
            return self._generators(tuple(s[0] for s in slots))
        # move slot j to the end using the symmetry of the bracket
        pj = self.par(slots[j])
        after = sum(self.par(s) for s in slots[j + 1:])
        sign = -1 if (pj * after) & 1 else 1
        rest = slots[:j] + slots[j + 1:]
        g1, R = slots[j][:1], slots[j][1:]
        S = sum(self.par(s) for s in rest)
        first = self.value(rest + (g1,)) * self.mono(R)
        second = self.mono(g1) * self.value(rest + (R,))
        if ((S + 1) * self.par(g1)) & 1:
            second = -second
        out = first + second
        return -out if sign < 0 else out

    def _generators(self, gens):
        Y = self.Y
        funcs = [k for k, g in enumerate(gens) if g not in self.is_diff]
        if len(funcs) >= 2:
            return Y.zero()
        sign = 1
        gens = list(gens)
        if funcs:
            k = funcs[0]
            f = gens[k]
            for other in gens[k + 1:]:
                if (Y.parities[f] * Y.parities[other]) & 1:
                    sign = -sign
            gens = gens[:k] + gens[k + 1:] + [f]
            names = [Y.names[self.is_diff.get(g, g)] for g in gens]
            value = self._poisson(tuple(names))
            odd = sum(Y.parities[Y.idx(n)] for n in names[:-1])
        else:
            names = [Y.names[self.is_diff[g]] for g in gens]
            value = exterior_d(self._poisson(tuple(names)))
            odd = len(names)
        if odd & 1:
            sign = -sign
        return -value if sign < 0 else value

    def _poisson(self, names):
        M = self.pinf.M
        out = higher_poisson(self.pinf, [M.var(n) for n in names])
        return out.to_chart(self.Y)


class _BinaryEvaluator(_KoszulEvaluator):
    """Binary bracket from the generator rules ``[f, g] = 0``,
    ``[df, g] = {f, g}``, ``[df, dg] = (-1)^f d{f, g}``, extended by symmetry
    and the Leibniz rule."""

    def _generators(self, gens):
        Y = self.Y
        if len(gens) != 2:
            return Y.zero()
        a, b = gens
        da, db = a in self.is_diff, b in self.is_diff
        if not da and not db:
            return Y.zero()
        if not da:
            # [f, dg] = (-1)^{f (g + 1)} [dg, f]
            g, f = self.is_diff[b], a
            val = self._poisson((Y.names[g], Y.names[f]))
            return -val if (Y.parities[f] * (Y.parities[g] + 1)) & 1 else val
        f = self.is_diff[a]
        if not db:
            return self._poisson((Y.names[f], Y.names[b]))
        g = self.is_diff[b]
        val = exterior_d(self._poisson((Y.names[f], Y.names[g])))
        return -val if Y.parities[f] else val


def binary_koszul(pinf, a, b):
    """The binary Koszul bracket of two forms built directly from its
    values on functions and differentials."""
    ev = _binary_evaluator(pinf)
    Y = pinf.Y
    total = Y.zero()
    for (s1, g1), (s2, g2) in product(_expand(a.to_chart(Y)), _expand(b.to_chart(Y))):
        total = total + s1 * s2 * ev.value((g1, g2))
    return total


@lru_cache(maxsize=64)
def _binary_evaluator(pinf):
    return _BinaryEvaluator(pinf)


@lru_cache(maxsize=64)
def _evaluator(pinf):
    return _KoszulEvaluator(pinf)


def higher_koszul_direct(pinf, forms):
    """Higher Koszul bracket of forms from the values on generators:

    * ``[df_1, ..., df_{n-1}, f_n] = (-1)^{f_1 + ... + f_{n-1}} {f_1, ..., f_n}_P``,
    * ``[df_1, ..., df_n] = (-1)^n d {f_1, ..., f_n}_P``,
    * zero on tuples with two or more functions,

    (tildes omitted).  On a purely even manifold the nonzero brackets have
    even arity and these reduce to ``[df_1, ..., f_n] = {f_1, ..., f_n}`` and
    ``[df_1, ..., df_n] = d{f_1, ..., f_n}``; the extra signs are the ones
    forced in the presence of odd coordinates (for instance by
    ``L_Q d = -d L_Q`` for an odd homological field ``Q``).

    extended to all forms as odd multiderivations.  The empty bracket is
    ``d(P|_M)``.
    """
    Y = pinf.Y
    ev = _evaluator(pinf)
    forms = [f.to_chart(Y) for f in forms]
    if not forms:
        return ev.value(())
    total = Y.zero()
    for combo in product(*[_expand(f) for f in forms]):
        scal = Y.one()
        for s, _ in combo:
            scal = scal * s
        total = total + scal * ev.value(tuple(g for _, g in combo))
    return total


# -- the operator Delta_P ----------------------------------------------------

def delta_P(pinf):
    """``Delta_P = [d, P^] = (-i hbar)^-1 [-i hbar d, P^]``."""
    return commutator(de_rham(pinf.Y), hat(pinf.P)).div_minus_i_hbar()


def koszul_brackets_from_delta(pinf, forms, mode="classical", delta=None):
    """Brackets ``(-i hbar)^-n [...[Delta_P, w_1], ..., w_n](1)``, reduced
    mod hbar in classical mode."""
    D = delta_P(pinf) if delta is None else delta
    if mode == "classical":
        return classical_bracket(D, forms)
    if mode == "quantum":
        return quantum_bracket(D, forms)
    raise ValueError(f"unknown mode {mode!r}")


# -- pencils ------------------------------------------------------------------

@dataclass(frozen=True)
class BialgebroidPencil:
    """A family of operators polynomial in the formal even parameter ``t``.

    ``operator`` is the affine form, ``conjugated`` the same family written
    as an exponential conjugation (both are kept so that they can be
    compared).
    """

    side: str
    operator: HbarOperator
    conjugated: HbarOperator
    t: SuperPolynomial

    def square(self):
        return self.operator * self.operator

    def at(self, value):
        """Specialize ``t`` to a number."""
        K = self.operator.cotangent
        sym = self.operator.symbol.substitute({self.t.chart.names[self.t.chart.idx(_t_name(self.t))]:
                                               K.const(value)}, K)
        return HbarOperator(sym)


def _t_name(t):
    (m,) = t.terms
    return t.chart.names[next(i for i, e in enumerate(m) if e)]


def _over_params(pinf, names):
    Mt = with_params(pinf.M, names)
    return Mt, pinf.P.to_chart(pi_cotangent_chart(Mt))


def pencil_form_side(pinf, t="t"):
    """``-i hbar d + t Delta_P`` and ``e^{-(i/hbar) t P^} (-i hbar d) e^{(i/hbar) t P^}``."""
    Mt, P = _over_params(pinf, [t])
    Y = pi_tangent_chart(Mt)
    tt = Y.var(t)
    d = de_rham(Y)
    Ph = hat(P)
    delta = commutator(d, Ph).div_minus_i_hbar()
    affine = d + HbarOperator.multiplication(tt) * delta
    conj = conjugate_exp(Ph, d, tt)
    return BialgebroidPencil("forms", affine, conj, tt)


def _minus_hbar2_delta(X, rho):
    if rho is None:
        return divergence_half(X)
    return divergence_rho(rho.to_chart(X.base), X)


def big_D_P(pinf, rho=None, params=()):
    """``D^_P = -i hbar [delta, P] = (-i hbar)^-1 [-hbar^2 delta, P]``."""
    Mt, P = _over_params(pinf, list(params)) if params else (pinf.M, pinf.P)
    X = pi_cotangent_chart(Mt)
    return commutator(_minus_hbar2_delta(X, rho), HbarOperator.multiplication(P)).div_minus_i_hbar()


def pencil_multivector_side(pinf, rho=None, t="t"):
    """``-hbar^2 delta + t D^_P`` and ``e^{-(i/hbar) t P} (-hbar^2 delta) e^{(i/hbar) t P}``."""
    Mt, P = _over_params(pinf, [t])
    X = pi_cotangent_chart(Mt)
    tt = X.var(t)
    base = _minus_hbar2_delta(X, rho)
    DP = commutator(base, HbarOperator.multiplication(P)).div_minus_i_hbar()
    affine = base + HbarOperator.multiplication(tt) * DP
    conj = conjugate_exp(HbarOperator.multiplication(P), base, tt)
    return BialgebroidPencil("multivectors", affine, conj, tt)


# -- modular obstruction ----------------------------------------------------

def divergence(T, rho=None):
    """``delta_rho(T)`` for a multivector ``T`` (``rho = 1`` by default)."""
    X = T.chart
    out = apply(_minus_hbar2_delta(X, rho), T)
    return out.hbar_shift(-2).scale(-1)


def modular_representative(pinf, rho=None):
    """``delta_rho(P)``, a representative of the modular class."""
    return divergence(pinf.P, rho)


def lichnerowicz(pinf, params=()):
    """``-i hbar d_P`` with ``d_P = [[P, -]]``, as the operator of the vector
    field with components ``[[P, y^A]]``."""
    Mt, P = _over_params(pinf, list(params)) if params else (pinf.M, pinf.P)
    X = pi_cotangent_chart(Mt)
    comps = {}
    for i in X.coordinates:
        name = X.names[i]
        c = canonical_schouten(P, X.var(name))
        if c:
            comps[name] = c
    return vector_field_operator(comps, X)


def adjoint_operator(T):
    """``-i hbar [[T, -]]`` as a vector field operator."""
    X = T.chart
    comps = {}
    for i in X.coordinates:
        name = X.names[i]
        c = canonical_schouten(T, X.var(name))
        if c:
            comps[name] = c
    return vector_field_operator(comps, X)


def naive_pencil_obstruction(pinf, rho=None, samples=(), t="t", check="naive_pencil"):
    """Square of the naive pencil ``-hbar^2 delta_rho + t (-i hbar) d_P``.

    Since ``delta^2 = 0`` and ``d_P^2 = 0`` the square is
    ``t [-hbar^2 delta, -i hbar d_P] = i hbar^3 t [delta, d_P]``, and
    ``[delta, d_P] = -[[delta(P), -]]``.  The report passes when the square
    equals the predicted term ``t hbar^2 (-i hbar [[delta(P), -]])`` exactly
    and ``[delta, d_P](T) = -[[delta(P), T]]`` holds on ``samples``; so the
    square vanishes exactly when ``delta(P)`` acts trivially.  Returns
    ``(report, square, delta(P))``.
    """
    failures = []
    with Timer() as timer:
        Mt, P = _over_params(pinf, [t])
        X = pi_cotangent_chart(Mt)
        tt = X.var(t)
        base = _minus_hbar2_delta(X, rho)
        dP = lichnerowicz(pinf, [t])
        L = base + HbarOperator.multiplication(tt) * dP
        sq = L * L
        mod = modular_representative(pinf, rho)
        modt = mod.to_chart(X)
        predicted = HbarOperator.multiplication(tt.hbar_shift(2)) * adjoint_operator(modt)
        if sq != predicted:
            failures.append(f"square {sq} differs from t hbar^2 (-i hbar [[delta(P), -]]) = {predicted}")
        comm = commutator(base, dP)
        for T in samples:
            T = T.to_chart(X)
            lhs = apply(comm, T)
            rhs = canonical_schouten(modt, T).hbar_shift(3).scale(-1j)
            if lhs != rhs:
                failures.append(f"[delta, d_P]({T}) != -[[delta(P), {T}]]")
    rep = verdict(check, failures, 0, 0, timer.millis)
    rep.details.append(f"delta(P) = {mod}")
    rep.details.append(f"square = {sq}")
    return rep, sq, mod


def symmetric_pair(pinf):
    """``(e^{-(i/hbar) P} (-hbar^2 delta) e^{(i/hbar) P},
    e^{-(i/hbar) P^} (-i hbar d) e^{(i/hbar) P^})``; the first acts on
    half-densities on the odd cotangent bundle (coefficients with respect to
    ``D(x, x*)^(1/2)``), the second on forms."""
    X, Y = pinf.X, pinf.Y
    multi = conjugate_exp(HbarOperator.multiplication(pinf.P), divergence_half(X))
    forms = conjugate_exp(hat(pinf.P), de_rham(Y))
    return multi, forms


def cartan_commutator(T, S):
    """``(-i hbar)^-1 [[d, T^], S^]`` for multivectors ``T`` and ``S``; it
    equals the hat of the Schouten bracket ``[[T, S]]``."""
    Y = pi_tangent_chart(T.chart.base)
    inner = commutator(de_rham(Y), hat(T)).div_minus_i_hbar()
    return commutator(inner, hat(S.to_chart(T.chart))).div_minus_i_hbar()
