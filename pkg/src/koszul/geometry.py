"""Charts for M, the odd tangent and cotangent bundles, vector bundles and
their cotangent bundles; the canonical even and odd brackets; master
Hamiltonians; the Mackenzie-Xu substitution.

Sign conventions
----------------
The canonical Poisson bracket on a cotangent chart with coordinates ``y^A``
and momenta ``p_A`` is::

    {F, G} = sum_A  F<-d/dp_A * d/dy^A G  -  (-1)^A  F<-d/dy^A * d/dp_A G

(right derivatives on F, left derivatives on G), so ``{p, x} = 1`` and
``{x, p} = -1``.  This is the sign for which the symbol of ``(i/hbar)[A, B]``
is ``{symb A, symb B}`` with momenta ``p = -i hbar d/dx``.

The Schouten bracket on the odd cotangent chart is the derived bracket
``[[T, S]] = {{D*, T}, S}`` of ``D* = (-1)^a pi^a p_a``; with it
``[[x^a, x*_b]] = [[x*_b, x^a]] = delta^a_b`` for even ``x^a``.  The derived
bracket does not depend on the overall sign of the Poisson bracket.
"""

from dataclasses import dataclass
from functools import lru_cache
import re

from .errors import ChartError, ParityError
from .superalgebra import (
    EVEN,
    ODD,
    Chart,
    GradedVariable,
    substitute,
)

_XK = re.compile(r"x(\d+)\Z")
_UK = re.compile(r"u(\d+)\Z")


def _star_name(name):
    m = _XK.match(name)
    return f"xs{m.group(1)}" if m else f"{name}s"


def _d_name(name):
    m = _XK.match(name)
    return f"dx{m.group(1)}" if m else f"d{name}"


def _dual_fiber_name(name):
    m = _UK.match(name)
    return f"w{m.group(1)}" if m else f"{name}_dual"


def _momentum_name(chart, i):
    """Momentum names: ``x<k> -> p<k>``; the fiber coordinates of the odd
    tangent/cotangent charts over ``x<k>`` get ``pi<k>``; otherwise
    ``p_<name>`` (and ``pi_<base>`` for fibers over other names)."""
    name = chart.names[i]
    if chart.kind in ("pi_tangent", "pi_cotangent"):
        for b, f in chart.pairing:
            if f == i:
                bname = chart.names[b]
                m = _XK.match(bname)
                return f"pi{m.group(1)}" if m else f"pi_{bname}"
    m = _XK.match(name)
    if m:
        return f"p{m.group(1)}"
    m = _UK.match(name)
    if m:
        return f"pu{m.group(1)}"
    return f"p_{name}"


def _flip(p):
    return ODD if p == EVEN else EVEN


def _negated(weights):
    return tuple((g, -w) for g, w in weights if g != "hbar")


def _split(chart):
    coords = [v for v in chart.variables if v.role == "coord"]
    params = [v for v in chart.variables if v.role == "param"]
    return coords, params


@lru_cache(maxsize=None)
def pi_tangent_chart(c):
    """ΠTM: base coordinates, then the odd-shifted differentials ``dx^a``."""
    if c.kind != "base":
        raise ChartError("the odd tangent chart is built over a base chart")
    coords, params = _split(c)
    fibers = [GradedVariable(_d_name(v.name), _flip(v.parity), (("fiber", 1),)) for v in coords]
    n = len(coords)
    pairing = tuple((k, n + k) for k in range(n))
    return Chart(tuple(coords + fibers + params), "pi_tangent", c, pairing)


@lru_cache(maxsize=None)
def pi_cotangent_chart(c):
    """ΠT*M: base coordinates, then the antimomenta ``x*_a``."""
    if c.kind != "base":
        raise ChartError("the odd cotangent chart is built over a base chart")
    coords, params = _split(c)
    fibers = [GradedVariable(_star_name(v.name), _flip(v.parity), (("fiber", 1),)) for v in coords]
    n = len(coords)
    pairing = tuple((k, n + k) for k in range(n))
    return Chart(tuple(coords + fibers + params), "pi_cotangent", c, pairing)


@lru_cache(maxsize=None)
def cotangent_chart(c):
    """T*C: all variables of C, then one momentum per coordinate of C (same
    parity, negated weights)."""
    if c.kind == "cotangent":
        raise ChartError("only one level of cotangent construction is supported")
    variables = list(c.variables)
    pairing = []
    for i, v in enumerate(c.variables):
        if v.role != "coord":
            continue
        pairing.append((i, len(variables)))
        variables.append(GradedVariable(_momentum_name(c, i), v.parity, _negated(v.weights), "momentum"))
    return Chart(tuple(variables), "cotangent", c, tuple(pairing))


@lru_cache(maxsize=None)
def bundle_chart(base, fibers):
    """Vector bundle E over a base chart with linear fiber coordinates.

    ``fibers`` is a tuple of ``(name, parity)``.  Fiber coordinates get
    weight +1 in the grading ``w_E``.
    """
    if base.kind != "base":
        raise ChartError("bundles are built over a base chart")
    coords, params = _split(base)
    fib = []
    for name, parity in fibers:
        fib.append(GradedVariable(name, parity, (("w_E", 1),)))
    n = len(coords)
    pairing = tuple((-1, n + k) for k in range(len(fib)))
    return Chart(tuple(coords + fib + params), "bundle", base, pairing)


@lru_cache(maxsize=None)
def dual_bundle_chart(E):
    """E* for a bundle chart E: fiber coordinates ``w_i`` of the same parity
    as ``u^i`` and weight -1 in ``w_E``."""
    if E.kind != "bundle":
        raise ChartError("dual bundle of a non-bundle chart")
    coords, params = _split(E.base)
    n = len(coords)
    fib = []
    for _, j in E.pairing:
        v = E.variables[j]
        fib.append(GradedVariable(_dual_fiber_name(v.name), v.parity, (("w_E", -1),)))
    pairing = tuple((-1, n + k) for k in range(len(fib)))
    return Chart(tuple(coords + fib + params), "dual_bundle", E, pairing)


def base_of(chart):
    """The base manifold chart underneath a derived chart."""
    c = chart
    while c.kind != "base":
        c = c.base
    return c


def with_params(chart, names):
    """The same chart rebuilt over a base with extra even parameters."""
    if chart.kind == "base":
        coords, params = _split(chart)
        have = {v.name for v in params}
        extra = [GradedVariable(n, EVEN, (), "param") for n in names if n not in have]
        if not extra:
            return chart
        hb = [v for v in params if v.name == "hbar"]
        rest = [v for v in params if v.name != "hbar"]
        return Chart(tuple(coords + rest + extra + hb), "base")
    inner = with_params(chart.base, names)
    if chart.kind == "pi_tangent":
        return pi_tangent_chart(inner)
    if chart.kind == "pi_cotangent":
        return pi_cotangent_chart(inner)
    if chart.kind == "cotangent":
        return cotangent_chart(inner)
    if chart.kind == "bundle":
        return bundle_chart(inner, tuple((chart.variables[j].name, chart.variables[j].parity)
                                         for _, j in chart.pairing))
    if chart.kind == "dual_bundle":
        return dual_bundle_chart(inner)
    raise ChartError(f"cannot extend chart of kind {chart.kind}")


# -- bracket helpers ------------------------------------------------------

def conjugate_pairs(chart):
    """``(coordinate name, momentum name, parity)`` for a cotangent chart."""
    if chart.kind != "cotangent":
        raise ChartError("expected a cotangent chart")
    return [(chart.names[c], chart.names[m], chart.parities[c]) for c, m in chart.pairing]


def canonical_poisson(f, g):
    """Canonical even Poisson bracket; ``{p, x} = 1``."""
    chart = f.chart
    if chart.kind != "cotangent":
        raise ChartError("canonical_poisson needs values on a cotangent chart")
    g = f._coerce(g)
    out = chart.zero()
    for y, p, par in conjugate_pairs(chart):
        fp = f.right_derivative(p)
        if fp:
            gy = g.derivative(y)
            if gy:
                out = out + fp * gy
        fy = f.right_derivative(y)
        if fy:
            gp = g.derivative(p)
            if gp:
                t = fy * gp
                out = out - t if par == EVEN else out + t
    return out


def master_D(chart):
    """``D = dx^a p_a`` on the cotangent chart of the odd tangent chart."""
    if chart.kind != "pi_tangent":
        raise ChartError("master_D needs the odd tangent chart")
    K = cotangent_chart(chart)
    out = K.zero()
    for b, f in chart.pairing:
        out = out + K.var(chart.names[f]) * K.var(_momentum_of(K, chart.names[b]))
    return out


def master_Dstar(chart):
    """``D* = (-1)^a pi^a p_a`` on the cotangent chart of the odd cotangent chart."""
    if chart.kind != "pi_cotangent":
        raise ChartError("master_Dstar needs the odd cotangent chart")
    K = cotangent_chart(chart)
    out = K.zero()
    for b, f in chart.pairing:
        term = K.var(_momentum_of(K, chart.names[f])) * K.var(_momentum_of(K, chart.names[b]))
        out = out - term if chart.parities[b] else out + term
    return out


def _momentum_of(K, name):
    i = K.idx(name)
    for c, m in K.pairing:
        if c == i:
            return K.names[m]
    raise ChartError(f"{name!r} has no momentum on {K.describe()}")


def momentum_of(K, name):
    return _momentum_of(K, name)


def lift(f, K):
    """A function on the underlying chart viewed on its cotangent chart."""
    return f.to_chart(K)


def canonical_schouten(T, S):
    """Schouten bracket of multivectors, as the derived bracket of ``D*``."""
    X = T.chart
    if X.kind != "pi_cotangent":
        raise ChartError("canonical_schouten needs multivectors on the odd cotangent chart")
    S = T._coerce(S)
    K = cotangent_chart(X)
    Ds = _dstar_cached(X)
    inner = canonical_poisson(Ds, T.to_chart(K))
    out = canonical_poisson(inner, S.to_chart(K))
    return out.to_chart(X)


@lru_cache(maxsize=None)
def _dstar_cached(X):
    return master_Dstar(X)


@lru_cache(maxsize=None)
def _d_cached(Y):
    return master_D(Y)


def star_substitution(P):
    """``P* = P(x, pi)``: antimomenta replaced by the momenta of the
    differentials, on the cotangent chart of the odd tangent chart."""
    X = P.chart
    if X.kind != "pi_cotangent":
        raise ChartError("expected a multivector on the odd cotangent chart")
    Y = pi_tangent_chart(X.base)
    K = cotangent_chart(Y)
    mapping = {}
    for b, f in X.pairing:
        dname = Y.names[[ff for bb, ff in Y.pairing if bb == b][0]]
        mapping[X.names[f]] = K.var(_momentum_of(K, dname))
    return substitute(P, mapping, K)


def koszul_masters(P):
    """``(H_P, H_P*) = ({D, P*}, {D*, P})``."""
    X = P.chart
    if P.parity() != EVEN:
        raise ParityError("the multivector must be even")
    Y = pi_tangent_chart(X.base)
    HP = canonical_poisson(_d_cached(Y), star_substitution(P))
    K = cotangent_chart(X)
    HPs = canonical_poisson(_dstar_cached(X), P.to_chart(K))
    return HP, HPs


# -- bundles and the Mackenzie-Xu map --------------------------------------

@dataclass(frozen=True)
class BundlePair:
    """A vector bundle E and its dual E* as a pair of charts with matched
    fiber coordinates ``u^i`` (on E) and ``w_i`` (on E*)."""

    E: Chart
    Estar: Chart
    base_names: tuple
    u: tuple
    w: tuple

    @staticmethod
    def from_bundle(E):
        Es = dual_bundle_chart(E)
        return BundlePair(E, Es, tuple(E.names[c] for c in E.coordinates if not _is_fiber(E, c)),
                          tuple(E.names[j] for _, j in E.pairing),
                          tuple(Es.names[j] for _, j in Es.pairing))

    @staticmethod
    def odd_tangent(M):
        """E = ΠTM with u = dx, E* = ΠT*M with w = x*."""
        Y, X = pi_tangent_chart(M), pi_cotangent_chart(M)
        return BundlePair(Y, X, tuple(Y.names[b] for b, _ in Y.pairing),
                          tuple(Y.names[f] for _, f in Y.pairing),
                          tuple(X.names[f] for _, f in X.pairing))

    @staticmethod
    def odd_cotangent(M):
        """E = ΠT*M with u = x*, E* = ΠTM with w = dx."""
        Y, X = pi_tangent_chart(M), pi_cotangent_chart(M)
        return BundlePair(X, Y, tuple(X.names[b] for b, _ in X.pairing),
                          tuple(X.names[f] for _, f in X.pairing),
                          tuple(Y.names[f] for _, f in Y.pairing))

    def swapped(self):
        return BundlePair(self.Estar, self.E, self.base_names, self.w, self.u)

    @property
    def TE(self):
        return cotangent_chart(self.E)

    @property
    def TEstar(self):
        return cotangent_chart(self.Estar)

    def fiber_parity(self, i):
        return self.E.parities[self.E.idx(self.u[i])]


def _is_fiber(chart, i):
    return any(j == i for _, j in chart.pairing)


def mackenzie_xu(h, pair):
    """Substitution ``p_a -> -p_a, p_i -> w_i, u^i -> (-1)^i p^i`` from
    T*E to T*(E*)."""
    K, L = pair.TE, pair.TEstar
    if not (h.chart == K):
        raise ChartError("mackenzie_xu expects a value on the cotangent chart of E")
    mapping = {}
    for a in pair.base_names:
        mapping[_momentum_of(K, a)] = -L.var(_momentum_of(L, a))
    for i, (u, w) in enumerate(zip(pair.u, pair.w)):
        mapping[_momentum_of(K, u)] = L.var(w)
        pw = L.var(_momentum_of(L, w))
        mapping[u] = -pw if pair.fiber_parity(i) else pw
    return substitute(h, mapping, L)


def mackenzie_xu_inverse(h, pair):
    """Inverse substitution from T*(E*) back to T*E."""
    K, L = pair.TE, pair.TEstar
    if not (h.chart == L):
        raise ChartError("expected a value on the cotangent chart of E*")
    mapping = {}
    for a in pair.base_names:
        mapping[_momentum_of(L, a)] = -K.var(_momentum_of(K, a))
    for i, (u, w) in enumerate(zip(pair.u, pair.w)):
        mapping[w] = K.var(_momentum_of(K, u))
        uu = K.var(u)
        mapping[_momentum_of(L, w)] = -uu if pair.fiber_parity(i) else uu
    return substitute(h, mapping, K)
