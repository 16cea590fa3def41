"""Duality for operators on a vector bundle and its dual.

For a bundle E with fiber coordinates ``u^i`` and the dual bundle E* with
fiber coordinates ``w_i``:

* ``dual_operator`` is the algebraic anti-isomorphism given on generators by
  ``(p_a)* = -p_a``, ``(p_i)* = w_i``, ``(u^i)* = (-1)^i p^i``,
  ``f(x)* = f(x)`` and ``(L1 L2)* = (-1)^{L1 L2} L2* L1*``;
* ``fiber_fourier`` and ``pairing`` are Berezin integrals against
  ``exp(-(i/hbar) u^i w_i)`` (odd fibers only);
* ``quantum_pullback`` is the integral operator with a generating function
  ``S(x, u1 | w2)``.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .coeff import I, MINUS_I, to_coeff
from .errors import ChartError, KoszulError, ParityError
from .geometry import (
    BundlePair,
    _momentum_of,
    mackenzie_xu,
    pi_tangent_chart,
    with_params,
)
from .hbar_ops import HbarOperator, compose
from .superalgebra import (
    EVEN,
    HBAR,
    Chart,
    GradedVariable,
    SuperPolynomial,
    berezin_integral,
    exp_series,
    inverse_series,
)


# -- the generator map ----------------------------------------------------

def _pair_on(L_chart, pair):
    """``pair`` rebuilt so that its E chart is ``L_chart`` (extra params)."""
    if L_chart == pair.E:
        return pair
    extra = [L_chart.names[i] for i in L_chart.params if L_chart.names[i] != HBAR]
    E = with_params(pair.E, extra)
    if E != L_chart:
        raise ChartError("the operator does not act on the E side of the bundle pair")
    return BundlePair(E, with_params(pair.Estar, extra), pair.base_names, pair.u, pair.w)


def _generator_images(pair):
    """Image operator on E* of every variable of T*E, by name."""
    K, L = pair.TE, pair.TEstar
    Es = pair.Estar
    out = {}
    for name in K.base.names:
        if name in pair.u:
            i = pair.u.index(name)
            w = pair.w[i]
            p = HbarOperator(L.var(_momentum_of(L, w)))
            out[name] = p.scale(-1) if pair.fiber_parity(i) else p
        else:
            out[name] = HbarOperator.multiplication(Es.var(name))
    for a in pair.base_names:
        out[_momentum_of(K, a)] = HbarOperator(L.var(_momentum_of(L, a))).scale(-1)
    for u, w in zip(pair.u, pair.w):
        out[_momentum_of(K, u)] = HbarOperator.multiplication(Es.var(w))
    return out


def _word(K, m):
    """Variables of a monomial, left to right, with repetitions."""
    seq = []
    for i, e in enumerate(m):
        if e > 0:
            seq.extend([i] * e)
    return seq


def dual_operator(L, pair):
    """The dual ``L*`` acting on E*, for ``L`` acting on E.

    Every monomial of the normal-ordered symbol is read as the product of
    its variables in chart order; its image is the product of the generator
    images in reverse order, times the Koszul sign of the reversal.
    """
    pair = _pair_on(L.chart, pair)
    K = pair.TE
    if L.cotangent != K:
        raise ChartError("the operator does not act on the E side of the bundle pair")
    imgs = _generator_images(pair)
    Lst = pair.TEstar
    hb = K.hbar_index
    out = Lst.zero()
    if L.symbol.laurent:
        out = out.as_laurent()
    cache = {}
    for m, c in L.symbol.terms.items():
        e = list(m)
        k = e[hb]
        e[hb] = 0
        key = tuple(e)
        op = cache.get(key)
        if op is None:
            word = _word(K, key)
            nodd = sum(1 for i in word if K.parities[i])
            op = HbarOperator.identity(pair.Estar)
            for i in reversed(word):
                op = compose(op, imgs[K.names[i]])
            if (nodd * (nodd - 1) // 2) & 1:
                op = op.scale(-1)
            cache[key] = op
        term = op.symbol.hbar_shift(k) if k else op.symbol
        out = out + term.scale(c)
    return HbarOperator(out)


def double_dual_sign(L, pair):
    """``L**`` predicted from the generator map applied twice: every odd
    fiber coordinate and every momentum of an odd fiber coordinate
    contributes a factor -1."""
    pair = _pair_on(L.chart, pair)
    K = pair.TE
    idx = []
    for i, u in enumerate(pair.u):
        if pair.fiber_parity(i):
            idx.append(K.idx(u))
            idx.append(K.idx(_momentum_of(K, u)))
    terms = {}
    for m, c in L.symbol.terms.items():
        n = sum(m[i] for i in idx)
        terms[m] = -c if n & 1 else c
    return HbarOperator(SuperPolynomial._make(K, terms, L.symbol.window, L.symbol.laurent))


def dual_operator_rho(L, pair, rho):
    """``rho^-1 o L* o rho`` for an invertible even function ``rho`` on the
    base; ``rho = 1`` gives the plain dual."""
    if rho.parity() != EVEN:
        raise ParityError("rho must be even")
    rinv = inverse_series(rho)
    D = dual_operator(L, pair)
    X = D.chart
    return (HbarOperator.multiplication(rinv.to_chart(X)) * D
            * HbarOperator.multiplication(rho.to_chart(X)))


def check_closure(L, pair):
    """Finite type: the dual of a polynomial operator is polynomial with
    non-negative powers of hbar."""
    D = dual_operator(L, pair)
    return D.is_hbar_differential() and not D.symbol.laurent


# -- gradings ---------------------------------------------------------------

def _counts(pair, K, m, fibers, dual=False):
    base_p = sum(m[K.idx(_momentum_of(K, a))] for a in pair.base_names)
    fib_p = sum(m[K.idx(_momentum_of(K, u))] for u in fibers)
    fib = sum(m[K.idx(u)] for u in fibers)
    return base_p, fib_p, fib, m[K.hbar_index]


def bidegree_of_monomial(pair, m, side="E"):
    """``(deg, deg*)`` of a symbol monomial on ``T*E`` (side ``E``) or on
    ``T*E*`` (side ``E*``)."""
    if side == "E":
        K, fibers = pair.TE, pair.u
    elif side == "E*":
        K, fibers = pair.TEstar, pair.w
    else:
        raise ValueError(f"unknown side {side!r}")
    a, pf, f, h = _counts(pair, K, m, fibers)
    return a + pf + h, a + f + h


def bigrading(L, pair, side="E"):
    """``(deg_E, deg*_E)`` of a homogeneous operator, where
    ``deg_E = #p_a + #p_i + #hbar`` and ``deg*_E = #p_a + #u + #hbar``.

    For an inhomogeneous operator the result is a dict from bidegrees to the
    corresponding components.
    """
    pair = _pair_on(L.chart if side == "E" else pair.E, pair) if side == "E" else pair
    parts = {}
    for m, c in L.symbol.terms.items():
        parts.setdefault(bidegree_of_monomial(pair, m, side), {})[m] = c
    if len(parts) == 1:
        return next(iter(parts))
    K = L.cotangent
    return {d: HbarOperator(SuperPolynomial._make(K, t, L.symbol.window, L.symbol.laurent))
            for d, t in sorted(parts.items())}


def weight_E(L, pair):
    """``w_E = #u - #p_i`` of a homogeneous operator on E (None otherwise)."""
    pair = _pair_on(L.chart, pair)
    K = pair.TE
    ws = set()
    for m in L.symbol.terms:
        _, pf, f, _ = _counts(pair, K, m, pair.u)
        ws.add(f - pf)
    return ws.pop() if len(ws) == 1 else None


def classical_limit(L, pair):
    """Principal symbol of ``L*`` and the Mackenzie-Xu image of the principal
    symbol of ``L``; they agree."""
    pair = _pair_on(L.chart, pair)
    return dual_operator(L, pair).principal_symbol(), mackenzie_xu(L.principal_symbol(), pair)


# -- densities and the Fourier layer --------------------------------------

@dataclass(frozen=True)
class Density:
    """A (lambda, mu)-density ``value * Dx^lambda * Du^mu`` on the E side or
    ``value * Dx^lambda * Dw^mu`` on the E* side of a bundle pair."""

    pair: BundlePair
    side: str
    value: SuperPolynomial
    lam: Fraction = Fraction(0)
    mu: Fraction = Fraction(0)

    def __post_init__(self):
        if self.side not in ("E", "E*"):
            raise ValueError(f"unknown side {self.side!r}")
        object.__setattr__(self, "lam", Fraction(self.lam))
        object.__setattr__(self, "mu", Fraction(self.mu))

    @property
    def chart(self):
        return self.pair.E if self.side == "E" else self.pair.Estar

    @property
    def fibers(self):
        return self.pair.u if self.side == "E" else self.pair.w

    def _fiber_dims(self):
        m = sum(1 for i in range(len(self.pair.u)) if self.pair.fiber_parity(i))
        return len(self.pair.u) - m, m

    def weight(self):
        """``w_E`` of a homogeneous density: ``#u + mu (n - m)`` on E and
        ``-#w + mu (m - n)`` on E*, for fiber dimension ``n|m``.  None if
        the value is not homogeneous."""
        n, m = self._fiber_dims()
        C = self.value.chart
        idx = [C.idx(v) for v in self.fibers if v in C]
        counts = {sum(mm[i] for i in idx) for mm in self.value.terms}
        if len(counts) > 1:
            return None
        k = counts.pop() if counts else 0
        if self.side == "E":
            return k + self.mu * (n - m)
        return -k + self.mu * (m - n)

    def __eq__(self, other):
        if not isinstance(other, Density):
            return NotImplemented
        return (self.pair == other.pair and self.side == other.side and self.lam == other.lam
                and self.mu == other.mu and self.value == other.value)

    def __hash__(self):
        return hash((self.side, self.lam, self.mu))


def _require_odd(pair):
    for i, u in enumerate(pair.u):
        if not pair.fiber_parity(i):
            raise ParityError(f"fiber variable {u!r} is even; integral transforms need odd fibers")


@lru_cache(maxsize=None)
def _workspace(base, groups):
    """A flat chart with the base coordinates, the named odd fiber groups and
    the base parameters."""
    coords = [v for v in base.variables if v.role == "coord"]
    params = [v for v in base.variables if v.role == "param"]
    extra = [GradedVariable(n, p) for g in groups for n, p in g]
    return Chart(tuple(coords + extra + params), "base")


def _group(chart, names):
    return tuple((n, chart.parities[chart.idx(n)]) for n in names)


def _base(pair):
    return pair.E.base


def _inv_hbar(W):
    return W.const(1).as_laurent().hbar_shift(-1)


def _kernel(W, us, ws, c):
    """``exp(c / hbar * sum u^i w_i)`` on the workspace ``W``."""
    s = W.zero().as_laurent()
    for u, w in zip(us, ws):
        s = s + W.var(u) * W.var(w)
    return exp_series(s.as_laurent().hbar_shift(-1).scale(c))


def _raw_fourier(f, pair, forward=True):
    """Unnormalized transform E -> E* (forward) or E* -> E."""
    _require_odd(pair)
    src, dst = (pair.E, pair.Estar) if forward else (pair.Estar, pair.E)
    us, ws = (pair.u, pair.w) if forward else (pair.w, pair.u)
    W = _workspace(_base(pair), (_group(pair.E, pair.u), _group(pair.Estar, pair.w)))
    g = f.to_chart(W).as_laurent()
    # forward: int Du exp(-(i/h) u w) f ; backward: int Dw exp(+(i/h) u w) g
    k = _kernel(W, pair.u, pair.w, MINUS_I if forward else I)
    out = berezin_integral(k * g, us)
    return out.to_chart(dst)


# N_m = (-1)^{m(m-1)/2} (i hbar)^m, frozen for the fiber ranks in use: the
# coefficient of hbar^m, by rank.
_FOURIER_TABLE = {0: to_coeff(1), 1: I, 2: to_coeff(1), 3: I, 4: to_coeff(1)}


@lru_cache(maxsize=None)
def fourier_normalization(m):
    """Constant ``N_m`` (a coefficient and a power of hbar) such that
    ``N_m * int Dw exp((i/hbar) u w) (.)`` inverts the forward transform on
    an odd fiber of rank ``m``."""
    if m not in _FOURIER_TABLE:
        raise KoszulError(f"no frozen normalization for fiber rank {m}")
    return (_FOURIER_TABLE[m], m)


def _fiber_rank(pair):
    return len(pair.u)


def fiber_fourier(dens):
    """``F[f Dx^l Du^mu] = (int Du exp(-(i/hbar) u w) f) Dx^l Dw^(1-mu)``."""
    pair = dens.pair
    if dens.side == "E*":
        raise ChartError("fiber_fourier maps densities on E; use inverse_fiber_fourier on E*")
    value = _raw_fourier(dens.value, pair, True)
    return Density(pair, "E*", value, dens.lam, 1 - dens.mu)


def inverse_fiber_fourier(dens):
    """Inverse transform, normalized so that it inverts ``fiber_fourier``."""
    pair = dens.pair
    if dens.side == "E":
        raise ChartError("inverse_fiber_fourier maps densities on E*")
    c, k = fourier_normalization(_fiber_rank(pair))
    value = _raw_fourier(dens.value, pair, False).scale(c).hbar_shift(k)
    return Density(pair, "E", value, dens.lam, 1 - dens.mu)


def pairing(f, g):
    """``int Du Dw exp(-(i/hbar) u w) f g`` for a (lambda, mu)-density on E and
    a (1 - lambda, mu)-density on E*; a function on the base (Laurent in
    hbar).  Integration runs over ``u`` first, then ``w``."""
    if f.side != "E" or g.side != "E*" or f.pair != g.pair:
        raise ChartError("pairing takes a density on E and a density on E*")
    if g.lam != 1 - f.lam or g.mu != f.mu:
        raise KoszulError(f"weights ({f.lam}, {f.mu}) and ({g.lam}, {g.mu}) are not complementary")
    pair = f.pair
    _require_odd(pair)
    W = _workspace(_base(pair), (_group(pair.E, pair.u), _group(pair.Estar, pair.w)))
    k = _kernel(W, pair.u, pair.w, MINUS_I)
    integrand = k * f.value.to_chart(W).as_laurent() * g.value.to_chart(W).as_laurent()
    return berezin_integral(integrand, list(pair.u) + list(pair.w)).to_chart(_base(pair))


# -- quantum pullbacks --------------------------------------------------------

@dataclass(frozen=True)
class GeneratingFunction:
    """An even ``S(x, u1 | w2)`` for bundles ``E1`` (fibers ``u1``) and ``E2``
    (dual fibers ``w2``) over the same base."""

    S: SuperPolynomial
    E1: BundlePair
    E2: BundlePair

    def __post_init__(self):
        if self.S.parity() != EVEN:
            raise ParityError("a generating function must be even")
        _require_odd(self.E1)
        _require_odd(self.E2)
        names = set(self.E1.u) | set(self.E1.w)
        if names & (set(self.E2.u) | set(self.E2.w)):
            raise ChartError("the two bundles need distinct fiber names")
        W = self.workspace
        object.__setattr__(self, "S", self.S.to_chart(W))

    @property
    def workspace(self):
        a, b = self.E1, self.E2
        return _workspace(_base(a), (_group(a.E, a.u), _group(a.Estar, a.w),
                                     _group(b.E, b.u), _group(b.Estar, b.w)))

    @staticmethod
    def linear(E1, E2, Phi):
        """``S = u1^i Phi_i^alpha w2_alpha`` for a constant matrix ``Phi``."""
        g = GeneratingFunction.__new__(GeneratingFunction)
        object.__setattr__(g, "E1", E1)
        object.__setattr__(g, "E2", E2)
        W = g.workspace
        S = W.zero()
        for i, u in enumerate(E1.u):
            for a, w in enumerate(E2.w):
                if Phi[i][a]:
                    S = S + (W.var(u) * W.var(w)).scale(Phi[i][a])
        return GeneratingFunction(S, E1, E2)


def _pullback_integral(S, W, f, out_vars, in_u, in_w, integrate_first, integrate_second):
    """``int D(first) D(second) exp((i/hbar)(S - in_u . in_w)) f``."""
    phase = S.as_laurent()
    for u, w in zip(in_u, in_w):
        phase = phase - W.var(u) * W.var(w)
    k = exp_series(phase.hbar_shift(-1).scale(I))
    out = berezin_integral(k * f.to_chart(W).as_laurent(), list(integrate_first) + list(integrate_second))
    return out


@lru_cache(maxsize=None)
def pullback_normalization(m):
    """Constant making the identity generating function act as the identity
    for fiber rank ``m`` (a coefficient and a power of hbar)."""
    return fourier_normalization(m)


def _apply_norm(value, m):
    c, k = pullback_normalization(m)
    return value.scale(c).hbar_shift(k)


def quantum_pullback(gf, dens):
    """``f1(x, u1) = N int Du2 Dw2 exp((i/hbar)(S(u1|w2) - u2 w2)) f2(x, u2)``
    for a density ``f2`` on E2; integration over ``w2`` first, then ``u2``."""
    if dens.side != "E" or dens.pair != gf.E2:
        raise ChartError("quantum_pullback takes a density on E2")
    W = gf.workspace
    out = _pullback_integral(gf.S, W, dens.value, gf.E1.u, gf.E2.u, gf.E2.w, gf.E2.w, gf.E2.u)
    out = _apply_norm(out, len(gf.E2.u))
    return Density(gf.E1, "E", _finish(out, gf.E1.E), dens.lam, dens.mu)


def dual_quantum_pullback(gf, dens):
    """The dual transform ``g2(x, w2) = N int Dw1 Du1 exp((i/hbar)(S(u1|w2) -
    u1 w1)) g1(x, w1)`` for a density ``g1`` on E1*; integration over ``u1``
    first, then ``w1``."""
    if dens.side != "E*" or dens.pair != gf.E1:
        raise ChartError("dual_quantum_pullback takes a density on E1*")
    W = gf.workspace
    out = _pullback_integral(gf.S, W, dens.value, gf.E2.w, gf.E1.u, gf.E1.w, gf.E1.u, gf.E1.w)
    out = _apply_norm(out, len(gf.E1.u))
    return Density(gf.E2, "E*", _finish(out, gf.E2.Estar), dens.lam, dens.mu)


def _finish(value, chart):
    """Move a Laurent workspace result to ``chart``, dropping the Laurent flag
    when no negative powers of hbar remain."""
    hb = value.chart.hbar_index
    if all(m[hb] >= 0 for m in value.terms):
        value = SuperPolynomial._make(value.chart, value.terms, value.window, False)
    return value.to_chart(chart)


def linear_pullback(dens, target, Phi):
    """Direct substitution ``u2^alpha -> u1^i Phi_i^alpha`` (E2 to E1)."""
    C = target.E
    mapping = {}
    for a, v in enumerate(dens.pair.u):
        img = C.zero()
        for i, u in enumerate(target.u):
            if Phi[i][a]:
                img = img + C.var(u).scale(Phi[i][a])
        mapping[v] = img
    value = dens.value.substitute(mapping, C)
    return Density(target, "E", value, dens.lam, dens.mu)


def linear_dual_pullback(dens, target, Phi):
    """Direct substitution ``w1_i -> Phi_i^alpha w2_alpha`` (E1* to E2*)."""
    C = target.Estar
    mapping = {}
    for i, w in enumerate(dens.pair.w):
        img = C.zero()
        for a, v in enumerate(target.w):
            if Phi[i][a]:
                img = img + C.var(v).scale(Phi[i][a])
        mapping[w] = img
    value = dens.value.substitute(mapping, C)
    return Density(target, "E*", value, dens.lam, dens.mu)


# -- the symmetric BV pair -----------------------------------------------------

def bv_pair(pinf):
    """``(e^{-(i/h)P} (-h^2 delta) e^{(i/h)P}, e^{-(i/h)P^} (-i h d) e^{(i/h)P^})``."""
    from .koszul import symmetric_pair
    return symmetric_pair(pinf)


def hat_by_integral(P, omega):
    """``(P^ omega)(x, dx) = N int Dbar(x*) D(dx') exp((i/hbar)(dx - dx') x*)
    P(x, x*) omega(x, dx')`` for a manifold with even coordinates only;
    integration over ``dx'`` first, then ``x*``, with the same constant as
    the inverse Fourier transform."""
    X = P.chart
    M = X.base
    Y = pi_tangent_chart(M)
    if any(M.parities[i] for i in M.coordinates):
        raise ParityError("the integral form of P^ needs odd differentials (even coordinates)")
    dx = [Y.names[f] for _, f in Y.pairing]
    xs = [X.names[f] for _, f in X.pairing]
    primed = [f"{n}_int" for n in dx]
    W = _workspace(M, (tuple((n, 1) for n in dx), tuple((n, 1) for n in primed),
                       tuple((n, 1) for n in xs)))
    phase = W.zero().as_laurent()
    for a, b, s in zip(dx, primed, xs):
        phase = phase + (W.var(a) - W.var(b)) * W.var(s)
    k = exp_series(phase.hbar_shift(-1).scale(I))
    om = omega.to_chart(Y).substitute({a: W.var(b) for a, b in zip(dx, primed)}, W)
    out = berezin_integral(k * P.to_chart(W).as_laurent() * om.as_laurent(), primed + xs)
    c, h = fourier_normalization(len(dx))
    return _finish(out.scale(c).hbar_shift(h), Y)
