"""Named P-infinity structures used by tests, suites and the CLI.

Every fixture is certified by ``validate_pinf`` when built; the ones that
are not written down by hand are found by a deterministic enumeration over
small coefficients.

* ``A``: constant bivector ``P = 3 x*_2 x*_1`` on R^2 (``{x1, x2} = 3``).
* ``B``: Lie-Poisson structure of the Heisenberg algebra ``[e1, e2] = e3``
  on R^3, ``P = x3 x*_2 x*_1``.
* ``C``: differential Poisson structure ``P_1 + P_2`` on R^{1|1}: a nonzero
  homological vector field together with a nonzero bivector.
* ``D``: P-infinity structure on R^{1|1} with nonzero 1-, 2- and 3-vector
  parts involving both antimomenta, coordinate-dependent coefficients and a
  nonzero ternary bracket.
* ``M``: bivector on R^2 with nonzero divergence ``delta(P)``.
"""

from functools import lru_cache
from itertools import combinations, product

from .errors import KoszulError
from .geometry import canonical_schouten, pi_cotangent_chart
from .koszul import divergence, higher_poisson, validate_pinf
from .superalgebra import EVEN, declare_chart

COEFFICIENTS = (1, -1, 2)


def plane():
    return declare_chart([("x1", 0), ("x2", 0)])


def space3():
    return declare_chart([("x1", 0), ("x2", 0), ("x3", 0)])


def line_11():
    return declare_chart([("x", 0), ("xi", 1)])


def antimomentum_monomials(M, max_coord=1, max_fiber=3):
    """Even monomials on the odd cotangent chart with coordinate degree at
    most ``max_coord`` and antimomentum degree between 1 and ``max_fiber``,
    in a fixed order."""
    X = pi_cotangent_chart(M)
    coords = [X.names[b] for b, _ in X.pairing]
    fibers = [X.names[f] for _, f in X.pairing]
    out = []
    ranges = []
    for name in coords + fibers:
        cap = max_coord if name in coords else max_fiber
        ranges.append(range(0, 2 if X.parities[X.idx(name)] else cap + 1))
    for exps in product(*ranges):
        cd = sum(exps[:len(coords)])
        fd = sum(exps[len(coords):])
        if cd > max_coord or not 1 <= fd <= max_fiber:
            continue
        m = X.one()
        for name, e in zip(coords + fibers, exps):
            if e:
                m = m * X.var(name) ** e
        if m and m.parity() == EVEN:
            out.append(m)
    out.sort(key=lambda m: (m.degree_in(fibers), str(m)))
    return out


def search_pinf(M, predicate, monomials=None, sizes=(2, 3), coefficients=COEFFICIENTS):
    """First ``P`` (in a fixed enumeration order) with ``[[P, P]] = 0`` and
    ``predicate(P)`` true; returns the certified structure."""
    X = pi_cotangent_chart(M)
    monomials = antimomentum_monomials(M) if monomials is None else monomials
    for k in sizes:
        for combo in combinations(range(len(monomials)), k):
            for cs in product(coefficients, repeat=k):
                P = X.zero()
                for i, c in zip(combo, cs):
                    P = P + monomials[i].scale(c)
                if not P or canonical_schouten(P, P):
                    continue
                if predicate(P):
                    return validate_pinf(M, P)
    raise KoszulError("no structure found in the search space")


def _components(P):
    X = P.chart
    fibers = [X.names[f] for _, f in X.pairing]
    out = {}
    for m, c in P.terms.items():
        k = sum(m[X.idx(n)] for n in fibers)
        out.setdefault(k, X.zero())
        out[k] = out[k] + X.monomial(m, c)
    return out


def _coordinate_dependent(T):
    X = T.chart
    return any(T.derivative(X.names[b]) for b, _ in X.pairing)


def _is_fix_c(P):
    comps = _components(P)
    return (set(comps) == {1, 2} and _coordinate_dependent(comps[1]))


def _is_fix_d(M):
    def pred(P):
        comps = _components(P)
        if not {1, 2, 3} <= set(comps) or not _coordinate_dependent(P):
            return False
        if not all(P.uses([P.chart.names[f]]) for _, f in P.chart.pairing):
            return False
        from .koszul import PinfStructure, Certificate
        pf = PinfStructure(M, P, Certificate(P.chart.zero(), None))
        gens = [M.var(n) for n in M.names if n != "hbar"]
        return any(higher_poisson(pf, list(t)) for t in product(gens, repeat=3))
    return pred


@lru_cache(maxsize=None)
def fixture(name):
    """The certified fixture ``A``, ``B``, ``C``, ``D`` or ``M``."""
    name = name.upper()
    if name == "A":
        M = plane()
        X = pi_cotangent_chart(M)
        return validate_pinf(M, X("xs2") * X("xs1") * 3)
    if name == "B":
        M = space3()
        X = pi_cotangent_chart(M)
        return validate_pinf(M, X("x3") * X("xs2") * X("xs1"))
    if name == "C":
        M = line_11()
        mons = [m for m in antimomentum_monomials(M, 1, 2)]
        return search_pinf(M, _is_fix_c, mons)
    if name == "D":
        M = line_11()
        return search_pinf(M, _is_fix_d(M))
    if name == "M":
        M = plane()
        X = pi_cotangent_chart(M)
        mons = [X(a) * X("xs2") * X("xs1") for a in ("x1", "x2")]
        mons += [X(a) * X(b) * X("xs2") * X("xs1") for a, b in (("x1", "x1"), ("x1", "x2"), ("x2", "x2"))]
        return search_pinf(M, lambda P: bool(divergence(P)), mons, sizes=(1, 2))
    raise KoszulError(f"unknown fixture {name!r}")


FIXTURES = ("A", "B", "C", "D", "M")


def corrupted(P):
    """``P`` plus the first small even term that breaks ``[[P, P]] = 0``
    (for negative controls)."""
    X = P.chart
    M = X.base
    candidates = [X.var(X.names[b]) ** 2 for b, _ in X.pairing if not X.parities[b]]
    candidates += antimomentum_monomials(M, 2, 3)
    for extra in candidates:
        Q = P + extra
        if extra and Q.parity() == EVEN and canonical_schouten(Q, Q):
            return Q
    raise KoszulError("no corruption breaks the structure")
