"""Formal hbar-differential operators in normal order.

An operator on a chart ``X`` is stored as its full normal-ordered symbol: a
SuperPolynomial on the cotangent chart of ``X`` in which every monomial is
read as ``coefficient(x, hbar) * p_1^k1 ... p_n^kn`` with the momenta acting
as ``p_a = -i hbar d/dx^a`` to the right of all coordinates.
"""

from dataclasses import dataclass
from functools import lru_cache

from .coeff import I, NEG_I_POWERS, inverse, is_coeff_like, to_coeff
from .errors import ChartError, CoordinateMapError, DivisibilityError, ParityError
from .geometry import (
    _d_cached,
    _dstar_cached,
    cotangent_chart,
    momentum_of,
    pi_cotangent_chart,
    pi_tangent_chart,
    star_substitution,
)
from .superalgebra import (
    EVEN,
    SuperPolynomial,
    combine_windows,
    grade,
    inverse_series,
    substitute,
)


class HbarOperator:
    """Normal-ordered operator.  ``A * B`` is composition, ``A + B`` the sum,
    ``c * A`` scalar multiplication."""

    __slots__ = ("symbol",)

    def __init__(self, symbol):
        if symbol.chart.kind != "cotangent":
            raise ChartError("an operator symbol lives on a cotangent chart")
        self.symbol = symbol

    # -- constructors ------------------------------------------------------
    @classmethod
    def multiplication(cls, f):
        return cls(f.to_chart(cotangent_chart(f.chart)))

    @classmethod
    def momentum(cls, chart, coord):
        K = cotangent_chart(chart)
        return cls(K.var(momentum_of(K, coord)))

    @classmethod
    def scalar(cls, chart, c):
        return cls(cotangent_chart(chart).const(c))

    @classmethod
    def identity(cls, chart):
        return cls.scalar(chart, 1)

    @classmethod
    def zero(cls, chart):
        return cls(cotangent_chart(chart).zero())

    # -- protocol ----------------------------------------------------------
    @property
    def chart(self):
        """The chart the operator acts on."""
        return self.symbol.chart.base

    @property
    def cotangent(self):
        return self.symbol.chart

    def __bool__(self):
        return bool(self.symbol)

    def __eq__(self, other):
        if isinstance(other, HbarOperator):
            return self.symbol == other.symbol
        if is_coeff_like(other):
            return self.symbol == other
        return NotImplemented

    def __hash__(self):
        return hash(self.symbol)

    def __repr__(self):
        return f"HbarOperator({self.symbol})"

    def __str__(self):
        return str(self.symbol)

    def _other(self, other):
        if isinstance(other, HbarOperator):
            if other.cotangent != self.cotangent:
                raise ChartError("operators act on different charts")
            return other
        if isinstance(other, SuperPolynomial):
            if other.chart == self.cotangent:
                return HbarOperator(other)
            return HbarOperator.multiplication(other.to_chart(self.chart))
        if is_coeff_like(other):
            return HbarOperator.scalar(self.chart, other)
        raise TypeError(f"cannot combine an operator with {type(other).__name__}")

    def __add__(self, other):
        return HbarOperator(self.symbol + self._other(other).symbol)

    __radd__ = __add__

    def __neg__(self):
        return HbarOperator(-self.symbol)

    def __sub__(self, other):
        return HbarOperator(self.symbol - self._other(other).symbol)

    def __rsub__(self, other):
        return HbarOperator(self._other(other).symbol - self.symbol)

    def scale(self, c):
        return HbarOperator(self.symbol.scale(c))

    def __mul__(self, other):
        if is_coeff_like(other):
            return self.scale(other)
        return compose(self, self._other(other))

    def __rmul__(self, other):
        if is_coeff_like(other):
            return self.scale(other)
        return compose(self._other(other), self)

    def __pow__(self, n):
        out = HbarOperator.identity(self.chart)
        for _ in range(n):
            out = out * self
        return out

    # -- structure ---------------------------------------------------------
    def parity(self):
        return self.symbol.parity()

    def parity_parts(self):
        e, o = self.symbol.parity_parts()
        return HbarOperator(e), HbarOperator(o)

    def div_minus_i_hbar(self, k=1):
        """Exact division by ``(-i hbar)^k``."""
        return HbarOperator(self.symbol.hbar_shift(-k).scale(NEG_I_POWERS[(-k) % 4]))

    def times_minus_i_hbar(self, k=1):
        return HbarOperator(self.symbol.hbar_shift(k).scale(NEG_I_POWERS[k % 4]))

    def principal_symbol(self):
        return principal_symbol(self)

    def apply(self, f):
        return apply(self, f)

    def components(self):
        return {n: HbarOperator(s) for n, s in grade(self.symbol, "deg").items()}

    def free_term(self):
        """The momentum-free part, as a function on the chart."""
        K = self.cotangent
        return self.symbol.drop([K.names[i] for i in K.momenta], self.chart)

    def formal(self):
        return HbarOperator(self.symbol.formal())

    def is_hbar_differential(self):
        """Every momentum must come with hbar: the symbol has non-negative
        hbar powers."""
        hb = self.cotangent.hbar_index
        return all(m[hb] >= 0 for m in self.symbol.terms)


def normal_order(raw, chart=None):
    """Normal form of a product of factors.

    Factors may be HbarOperators, SuperPolynomials on the base chart
    (multiplication operators), momentum names given as strings, or scalars.
    """
    factors = list(raw)
    if chart is None:
        for f in factors:
            if isinstance(f, HbarOperator):
                chart = f.chart
                break
            if isinstance(f, SuperPolynomial):
                chart = f.chart.base if f.chart.kind == "cotangent" else f.chart
                break
    if chart is None:
        raise ChartError("cannot infer the chart of an empty or scalar product")
    K = cotangent_chart(chart)
    out = HbarOperator.identity(chart)
    for f in factors:
        if isinstance(f, str):
            op = HbarOperator(K.var(f))
        elif isinstance(f, HbarOperator):
            op = f
        elif isinstance(f, SuperPolynomial):
            op = HbarOperator(f) if f.chart == K else HbarOperator.multiplication(f.to_chart(chart))
        else:
            op = HbarOperator.scalar(chart, f)
        out = compose(out, op)
    return out


def compose(A, B):
    K = A.cotangent
    if B.cotangent != K:
        raise ChartError("operators act on different charts")
    sa, sb = A.symbol, B.symbol
    terms = K.kernel.compose(sa.terms, sb.terms)
    window = combine_windows(sa.window, sb.window)
    return HbarOperator(SuperPolynomial._make(K, terms, window, sa.laurent or sb.laurent))


def commutator(A, B):
    """Graded commutator ``AB - (-1)^{|A||B|} BA`` (bilinear in parity parts)."""
    A = A if isinstance(A, HbarOperator) else B._other(A)
    B = A._other(B)
    pa, pb = A.parity(), B.parity()
    if pa is not None and pb is not None:
        ab, ba = compose(A, B), compose(B, A)
        return ab + ba if (pa and pb) else ab - ba
    out = HbarOperator.zero(A.chart)
    for x in A.parity_parts():
        if not x:
            continue
        for y in B.parity_parts():
            if y:
                out = out + commutator(x, y)
    return out


def total_degree_component(L, n):
    return HbarOperator(grade(L.symbol, "deg").get(n, L.cotangent.zero()))


def principal_symbol(L):
    """Set hbar to zero in the normal-ordered symbol."""
    return L.symbol.set_hbar_zero()


@lru_cache(maxsize=4096)
def _momentum_word(K, word):
    """Names of the coordinate derivatives of a momentum word, right to left."""
    pair = {m: c for c, m in K.pairing}
    nc = K.nvars - len(K.momenta)
    seq = []
    for k, e in enumerate(word):
        seq.extend([K.names[pair[nc + k]]] * e)
    return tuple(reversed(seq))


def apply(L, f):
    """Action of ``L`` on a function ``f`` of the chart (no momenta)."""
    X = L.chart
    K = L.cotangent
    if f.chart == K:
        raise ChartError("the argument of apply must not contain momenta")
    f = f.to_chart(X)
    nc = K.nvars - len(K.momenta)
    cache = {}
    out = X.zero()
    if L.symbol.laurent:
        out = out.as_laurent()
    for m, c in L.symbol.terms.items():
        word = m[nc:]
        g = cache.get(word)
        if g is None:
            g = f
            for name in _momentum_word(K, word):
                g = g.derivative(name)
                if not g:
                    break
            k = sum(word)
            if g and k:
                g = g.hbar_shift(k).scale(NEG_I_POWERS[k % 4])
            cache[word] = g
        if not g:
            continue
        coef = SuperPolynomial._make(X, {m[:nc]: c}, None, L.symbol.laurent)
        out = out + coef * g
    return out


def apply_by_composition(L, f):
    """Independent route: the free term of ``L o f``."""
    return compose(L, HbarOperator.multiplication(f.to_chart(L.chart))).free_term()


# -- exponential conjugation ---------------------------------------------

def conjugate_exp(G, A, s=1, max_terms=32):
    """``exp(-(i/hbar) s ad G)(A) = e^{-(i/hbar) s G} A e^{(i/hbar) s G}``.

    ``G`` must be even.  Each application of ``ad G`` is divided exactly by
    ``-i hbar`` so that no negative powers of hbar appear.  ``s`` is a
    scalar or an even parameter polynomial.  Raises if the series does not
    terminate within ``max_terms``.
    """
    if G.parity() != EVEN:
        raise ParityError("the conjugating operator must be even")
    if isinstance(s, SuperPolynomial):
        s_op = HbarOperator.multiplication(s.to_chart(A.chart))
    else:
        s_op = HbarOperator.scalar(A.chart, s)
    total = A
    term = A
    for k in range(1, max_terms + 1):
        step = commutator(G, term).div_minus_i_hbar()
        term = (s_op * step).scale(-inverse(to_coeff(k)))
        if not term:
            return total
        total = total + term
    raise DivisibilityError("conjugation series did not terminate")


# -- named operators ---------------------------------------------------------

def de_rham(chart):
    """``-i hbar d`` on the odd tangent chart (symbol ``D = dx^a p_a``)."""
    if chart.kind == "base":
        chart = pi_tangent_chart(chart)
    return HbarOperator(_d_cached(chart))


def de_rham_plain(chart):
    """The plain differential ``d``; its symbol has ``hbar^-1``."""
    return de_rham(chart).div_laurent()


def _div_laurent(self, k=1):
    return HbarOperator(self.symbol.as_laurent().hbar_shift(-k).scale(NEG_I_POWERS[(-k) % 4]))


HbarOperator.div_laurent = _div_laurent


def divergence_half(chart):
    """``-hbar^2 delta`` with ``delta = (-1)^a d/dx^a d/dx*_a`` on the odd
    cotangent chart (symbol ``D* = (-1)^a p_a pi^a``)."""
    if chart.kind == "base":
        chart = pi_cotangent_chart(chart)
    return HbarOperator(_dstar_cached(chart))


def divergence_rho(rho, chart=None):
    """``-hbar^2 delta_rho = rho^-1 o (-hbar^2 delta) o rho`` for an
    invertible even function ``rho`` on the base."""
    if rho.parity() != EVEN:
        raise ParityError("rho must be even")
    X = pi_cotangent_chart(rho.chart) if chart is None else chart
    r = HbarOperator.multiplication(rho.to_chart(X))
    rinv = HbarOperator.multiplication(inverse_series(rho).to_chart(X))
    return rinv * divergence_half(X) * r


def hat(P):
    """``P(x, -i hbar d/ddx)`` acting on forms: the antimomenta become the
    momenta of the differentials."""
    return HbarOperator(star_substitution(P))


def interior(P):
    """``i(P) = P(x, d/ddx)``, the plain interior product (Laurent symbol)."""
    Y = pi_tangent_chart(P.chart.base)
    K = cotangent_chart(Y)
    X = P.chart
    fibers = [X.names[f] for _, f in X.pairing]
    moms = [momentum_of(K, Y.names[f]) for _, f in Y.pairing]
    mapping = {xs: K.var(pi).as_laurent().hbar_shift(-1).scale(I) for xs, pi in zip(fibers, moms)}
    return HbarOperator(substitute(P.as_laurent(), mapping, K))


def koszul_brylinski(P):
    """``d_P = [d, i(P)]`` built from the plain de Rham differential and the
    plain interior product."""
    Y = pi_tangent_chart(P.chart.base)
    return commutator(de_rham_plain(Y), interior(P))


def vector_field_operator(components, chart):
    """``-i hbar X`` for the vector field ``X = X^A d/dy^A`` on ``chart``;
    ``components`` maps coordinate names to functions."""
    K = cotangent_chart(chart)
    out = K.zero()
    for name, comp in components.items():
        out = out + comp.to_chart(K) * K.var(momentum_of(K, name))
    return HbarOperator(out)


def lie_derivative(Q, chart):
    """``-i hbar L_Q`` on forms, ``L_Q = [i_Q, d]`` with ``i_Q = Q^a d/ddx^a``.

    ``Q`` maps base coordinate names to components (functions on the base).
    """
    Y = pi_tangent_chart(chart) if chart.kind == "base" else chart
    K = cotangent_chart(Y)
    iq = K.zero()
    for b, f in Y.pairing:
        name = Y.names[b]
        if name in Q:
            iq = iq + Q[name].to_chart(K) * K.var(momentum_of(K, Y.names[f]))
    # -i hbar i_Q has symbol Q^a pi_a; [-i hbar i_Q, d] = -i hbar L_Q
    return commutator(HbarOperator(iq), de_rham(Y)).div_minus_i_hbar()


# -- coordinate changes -----------------------------------------------------

@dataclass(frozen=True)
class CoordinateMap:
    """``new coordinates = formulas in old coordinates``.

    ``source`` and ``target`` are base charts; ``formulas`` maps each
    coordinate name of ``target`` to a polynomial on ``source``.
    """

    source: object
    target: object
    formulas: tuple

    @staticmethod
    def make(source, target, formulas):
        missing = [target.names[i] for i in target.coordinates if target.names[i] not in formulas]
        if missing:
            raise CoordinateMapError(f"no formula for {missing}")
        for name, f in formulas.items():
            if f.chart != source:
                raise ChartError("coordinate formulas must live on the source chart")
            if f.uses(["hbar"]):
                raise CoordinateMapError("coordinate changes must not depend on hbar")
            if f.parity() != target.variable(name).parity:
                raise ParityError(f"formula for {name!r} has the wrong parity")
        return CoordinateMap(source, target, tuple(sorted(formulas.items())))

    def as_dict(self):
        return dict(self.formulas)

    def pull(self, f):
        """``f o phi``: a function of the target coordinates re-expressed in
        the source coordinates."""
        return substitute(f, self.as_dict(), self.source)


def check_round_trip(fwd, inv, window=None):
    """``fwd o inv`` and ``inv o fwd`` must be the identity (after truncation
    to ``window`` when the inverse is a truncated series)."""
    for a, b in ((fwd, inv), (inv, fwd)):
        for name in a.source.names:
            if name == "hbar" or a.source.variable(name).role != "coord":
                continue
            lhs = _compose_maps(a, b, name)
            rhs = a.source.var(name)
            if window is not None:
                lhs, rhs = lhs.truncate(window), rhs.truncate(window)
            if lhs != rhs:
                raise CoordinateMapError(f"round trip fails on {name!r}: {lhs}")
    return True


def _compose_maps(a, b, name):
    """Coordinate ``name`` of ``a.source`` sent through ``a`` then ``b``.

    ``a`` expresses ``a.target`` coordinates in ``a.source`` ones and ``b``
    expresses ``b.target = a.source`` coordinates in ``b.source = a.target``
    ones, so ``b``'s formula for ``name`` composed with ``a`` gives ``name``
    in terms of itself.
    """
    return a.pull(b.as_dict()[name])


def change_coordinates(L, fwd, inv, window=None):
    """Rewrite ``L`` (acting on functions of ``fwd.source``) in the
    coordinates of ``fwd.target``.

    ``fwd`` gives new coordinates ``y = phi(x)``; ``inv`` gives ``x = psi(y)``.
    Coefficients ``c(x)`` become ``c(psi(y))`` and ``p_x^a`` becomes
    ``(d phi^b / dx^a)(psi(y)) p_y^b``; the words are re-normal-ordered.
    """
    if fwd.source != L.chart or inv.source != fwd.target or inv.target != fwd.source:
        raise ChartError("coordinate maps do not match the operator chart")
    check_round_trip(fwd, inv, window)
    X, Y = fwd.source, fwd.target
    KX = L.cotangent
    KY = cotangent_chart(Y)
    nc = KX.nvars - len(KX.momenta)
    moms = []
    for k in range(len(KX.momenta)):
        coord = KX.names[[c for c, m in KX.pairing if m == nc + k][0]]
        op = HbarOperator.zero(Y)
        for b, phi_b in fwd.formulas:
            jac = inv.pull(phi_b.derivative(coord))
            if window is not None:
                jac = jac.truncate(window)
            if jac:
                op = op + HbarOperator(jac.to_chart(KY) * KY.var(momentum_of(KY, b)))
        moms.append(op)
    out = HbarOperator.zero(Y)
    for m, c in L.symbol.terms.items():
        coef = SuperPolynomial._make(X, {m[:nc]: c})
        term = HbarOperator.multiplication(inv.pull(coef))
        for k, e in enumerate(m[nc:]):
            for _ in range(e):
                term = term * moms[k]
        out = out + term
    if window is not None:
        out = HbarOperator(out.symbol.truncate(window))
    return out


# -- exponential action -----------------------------------------------------

@dataclass
class LambdaExpansion:
    """``L(f e^{(i/hbar) lam g}) = (sum_{j,k} hbar^j lam^k c_{jk}) e^{(i/hbar) lam g}``.

    ``series`` maps ``(hbar degree, lambda degree)`` to a coefficient function
    (free of hbar).
    """

    phase: SuperPolynomial
    series: dict

    def block(self, n):
        """Terms of joint degree ``n`` in (hbar, lambda)."""
        return {k: v for k, v in self.series.items() if sum(k) == n}

    def total(self, lam=1):
        """Sum of the series as a polynomial in hbar at a numeric lambda."""
        chart = self.phase.chart
        out = chart.zero()
        hb = chart.var("hbar")
        for (j, k), c in self.series.items():
            out = out + c * hb ** j * to_coeff(lam) ** k
        return out


def apply_exponential(L, f, g, lam_order=None):
    """Expand ``L(f e^{(i/hbar) lam g})`` by replacing each momentum
    ``p_a`` with ``p_a + lam dg/dx^a`` (which is how ``-i hbar d/dx^a`` acts
    past the exponential) and applying the result to ``f``.

    ``lam_order`` optionally truncates the lambda degree.
    """
    X = L.chart
    if g.chart.kind == "cotangent":
        raise ChartError("the phase must not contain momenta")
    g = g.to_chart(X)
    if g.parity() != EVEN:
        raise ParityError("the phase must be even")
    f = f.to_chart(X)
    K = L.cotangent
    from .geometry import with_params
    XL = with_params(X, ["lam"])
    KL = cotangent_chart(XL)
    lam = KL.var("lam")
    mapping = {}
    for c, m in K.pairing:
        coord = K.names[c]
        mapping[K.names[m]] = KL.var(K.names[m]) + lam * g.derivative(coord).to_chart(KL)
    shifted = _substitute_momenta(L, mapping, KL)
    value = apply(shifted, f.to_chart(XL))
    hb_i = XL.hbar_index
    lam_i = XL.idx("lam")
    series = {}
    for m, c in value.terms.items():
        j, k = m[hb_i], m[lam_i]
        if lam_order is not None and k > lam_order:
            continue
        e = list(m)
        e[hb_i] = 0
        e[lam_i] = 0
        term = SuperPolynomial._make(XL, {tuple(e): c}).to_chart(X)
        series[(j, k)] = series.get((j, k), X.zero()) + term
    return LambdaExpansion(g, {k: v for k, v in series.items() if v})


def _substitute_momenta(L, mapping, KL):
    """Substitute the momenta of a normal-ordered symbol, keeping the
    normal-ordered reading: each word is rebuilt as an operator product."""
    K = L.cotangent
    nc = K.nvars - len(K.momenta)
    out = HbarOperator(KL.zero())
    imgs = [HbarOperator(mapping[K.names[nc + k]]) for k in range(len(K.momenta))]
    XL = KL.base
    for m, c in L.symbol.terms.items():
        coef = SuperPolynomial._make(K.base, {m[:nc]: c}).to_chart(XL)
        term = HbarOperator.multiplication(coef)
        for k, e in enumerate(m[nc:]):
            for _ in range(e):
                term = term * imgs[k]
        out = out + term
    return out
