"""Named verification suites.

Each suite takes a ``Context`` and returns a list of reports whose check ids
start with the suite name.  Suites that work with a P-infinity structure use
the one in the context when given and their default fixtures otherwise.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from sympy.polys.matrices import DomainMatrix

from .brackets import (
    TwistedOperator,
    classical_bracket,
    derived_bracket,
    quantum_bracket,
    sigma_brackets,
)
from .duality import (
    Density,
    GeneratingFunction,
    bigrading,
    classical_limit,
    double_dual_sign,
    dual_operator,
    dual_quantum_pullback,
    fiber_fourier,
    hat_by_integral,
    inverse_fiber_fourier,
    linear_dual_pullback,
    linear_pullback,
    pairing,
    quantum_pullback,
)
from .errors import KoszulError, NotPoissonError, WindowError
from .fixtures import fixture, line_11, plane
from .generators import random_homogeneous, random_multivector, random_operator, seeded
from .geometry import (
    BundlePair,
    bundle_chart,
    canonical_poisson,
    canonical_schouten,
    mackenzie_xu,
)
from .hbar_ops import (
    HbarOperator,
    apply,
    commutator,
    conjugate_exp,
    de_rham,
    divergence_half,
    hat,
    koszul_brylinski,
    lie_derivative,
    principal_symbol,
)
from .koszul import (
    PinfStructure,
    big_D_P,
    binary_koszul,
    cartan_commutator,
    delta_P,
    higher_koszul_direct,
    koszul_brackets_from_delta,
    lichnerowicz,
    naive_pencil_obstruction,
    pencil_form_side,
    pencil_multivector_side,
    symmetric_pair,
    validate_pinf,
)
from .report import FAIL, SKIPPED, Report, Timer, verdict
from .superalgebra import SuperPolynomial, declare_chart, joint_degree

DEFAULT_WINDOW = 8


@dataclass
class Context:
    seed: int = 0
    window: int = DEFAULT_WINDOW
    P: SuperPolynomial = None
    M: object = None
    rho: SuperPolynomial = None
    sigma: SuperPolynomial = None
    extras: dict = field(default_factory=dict)


def _stamp(reports, ctx):
    for r in reports:
        r.seed = ctx.seed
        r.window = ctx.window
    return reports


def _structures(ctx, defaults):
    """``[(label, PinfStructure or exception)]``: the context structure if
    any, the named default fixtures otherwise.  A structure whose joint
    degree exceeds the window is replaced by a WindowError."""
    if ctx.P is not None:
        if joint_degree(ctx.P) > ctx.window:
            return [("file", WindowError(f"structure degree {joint_degree(ctx.P)} > window {ctx.window}"))]
        try:
            return [("file", validate_pinf(ctx.M or ctx.P.chart.base, ctx.P))]
        except NotPoissonError as exc:
            return [("file", exc)]
    out = []
    for name in defaults:
        pf = fixture(name)
        if joint_degree(pf.P) > ctx.window:
            pf = WindowError(f"structure degree {joint_degree(pf.P)} > window {ctx.window}")
        out.append((name, pf))
    return out


def _certified(suite, label, pf):
    """Report for the certification step; None when ``pf`` is fine."""
    if isinstance(pf, NotPoissonError):
        return Report(f"{suite}.{label}.pinf", FAIL, f"[[P, P]] = {pf.witness}")
    if isinstance(pf, WindowError):
        return Report(f"{suite}.{label}.window", SKIPPED, str(pf))
    return None


def _generators(chart):
    return [chart.var(n) for n in chart.names if chart.variables[chart.idx(n)].role == "coord"]


def _run(name, ctx, fn):
    with Timer() as t:
        failures = fn()
    return verdict(name, failures, ctx.seed, ctx.window, t.millis)


# -- 1. symbol calculus --------------------------------------------------------

def suite_symbcalc(ctx):
    M = declare_chart([("x1", 0), ("x2", 0), ("theta", 1)])
    rng = seeded(ctx.seed)
    pairs = [(random_operator(M, rng, terms=4, window=ctx.window), random_operator(M, rng, terms=4, window=ctx.window)) for _ in range(20)]

    def product_rule():
        return [f"pair {k}" for k, (A, B) in enumerate(pairs)
                if principal_symbol(A * B) != principal_symbol(A) * principal_symbol(B)]

    def commutator_rule():
        out = []
        for k, (A, B) in enumerate(pairs):
            lhs = principal_symbol(commutator(A, B).div_minus_i_hbar())
            if lhs != canonical_poisson(principal_symbol(A), principal_symbol(B)):
                out.append(f"pair {k}")
        return out

    return [_run("symbcalc.product", ctx, product_rule),
            _run("symbcalc.commutator", ctx, commutator_rule)]


# -- 2. classical brackets are derived brackets --------------------------------

def suite_thmsymbol(ctx):
    M = declare_chart([("x1", 0), ("x2", 0), ("theta", 1)])
    rng = seeded(ctx.seed + 1)
    ops = [random_operator(M, rng, terms=3, max_momenta=3, window=ctx.window) for _ in range(10)]
    funcs = [random_homogeneous(M, rng, terms=2, window=ctx.window) for _ in range(6)] + _generators(M)

    def check():
        out = []
        for k, L in enumerate(ops):
            h = principal_symbol(L)
            for n in range(4):
                for _ in range(3 if n else 1):
                    fs = [rng.choice(funcs) for _ in range(n)]
                    if classical_bracket(L, fs) != derived_bracket(h, fs):
                        out.append(f"operator {k}, arity {n}, args {[str(f) for f in fs]}")
        return out

    return [_run("thmsymbol.classical_equals_derived", ctx, check)]


# -- 3. ordinary Poisson structures --------------------------------------------

def suite_ordpoiss(ctx):
    reports = []
    for label, pf in _structures(ctx, ("A", "B")):
        bad = _certified("ordpoiss", label, pf)
        if bad:
            reports.append(bad)
            continue
        p = f"ordpoiss.{label}"
        Y = pf.Y
        D = delta_P(pf)
        gens = _generators(Y)

        def kb_check():
            kb = koszul_brylinski(pf.P).symbol.hbar_shift(2).scale(-1)
            kb = SuperPolynomial._make(kb.chart, kb.terms)
            return [] if D.symbol == kb else [f"Delta_P - (-hbar^2 d_P) = {D.symbol - kb}"]

        def low():
            out = []
            if classical_bracket(D, []):
                out.append("0-bracket")
            out += [f"[{g}]" for g in gens if classical_bracket(D, [g])]
            return out

        def two():
            return [f"[{a}, {b}]: {classical_bracket(D, [a, b])} vs {binary_koszul(pf, a, b)}"
                    for a, b in product(gens, repeat=2)
                    if classical_bracket(D, [a, b]) != binary_koszul(pf, a, b)]

        def high():
            out = [f"{t}" for t in product(gens, repeat=3) if classical_bracket(D, list(t))]
            rng = seeded(ctx.seed)
            for _ in range(20):
                t = [rng.choice(gens) for _ in range(4)]
                if classical_bracket(D, t):
                    out.append(f"{t}")
            return out

        def quantum():
            out = []
            kbop = koszul_brylinski(pf.P)
            forms = gens + [a * b for a in gens for b in gens if a * b]
            if quantum_bracket(D, []):
                out.append("quantum 0-bracket")
            for w in forms:
                expect = apply(kbop, w).hbar_shift(1).scale(-1j)
                if quantum_bracket(D, [w]) != SuperPolynomial._make(Y, expect.terms):
                    out.append(f"quantum [{w}]")
            for a, b in product(gens, repeat=2):
                if quantum_bracket(D, [a, b]) != classical_bracket(D, [a, b]):
                    out.append(f"quantum [{a}, {b}]")
            for t in product(gens, repeat=3):
                if quantum_bracket(D, list(t)):
                    out.append(f"quantum {t}")
            return out

        reports += [_run(f"{p}.delta_is_koszul_brylinski", ctx, kb_check),
                    _run(f"{p}.low_arity_vanish", ctx, low),
                    _run(f"{p}.binary_koszul", ctx, two),
                    _run(f"{p}.high_arity_vanish", ctx, high),
                    _run(f"{p}.quantum_table", ctx, quantum)]
    return reports


# -- 4. differential Poisson structures ---------------------------------------

def _vector_part(pf):
    """``Q`` with ``Q^a = -P^a`` for the 1-vector part ``P^a x*_a``."""
    X, M = pf.X, pf.M
    P1 = pf.components().get(1)
    Q = {}
    if P1:
        for b, f in X.pairing:
            c = P1.derivative(X.names[f]).to_chart(M)
            if c:
                Q[X.names[b]] = -c
    return Q


def suite_difpoiss(ctx):
    reports = []
    for label, pf in _structures(ctx, ("C",)):
        bad = _certified("difpoiss", label, pf)
        if bad:
            reports.append(bad)
            continue
        p = f"difpoiss.{label}"
        Y = pf.Y
        D = delta_P(pf)
        comps = pf.components()
        if set(comps) - {1, 2}:
            reports.append(Report(f"{p}.shape", FAIL, f"P has components of degrees {sorted(comps)}"))
            continue
        P2 = PinfStructure(pf.M, comps.get(2, pf.X.zero()), pf.certificate)
        Q = _vector_part(pf)
        LQ = lie_derivative(Q, pf.M) if Q else HbarOperator.zero(Y)
        gens = _generators(Y)
        forms = gens + [a * b for a in gens for b in gens if a * b]

        def decomposition():
            kb = koszul_brylinski(P2.P).symbol.hbar_shift(2).scale(-1)
            kb = HbarOperator(SuperPolynomial._make(kb.chart, kb.terms))
            return [] if D == LQ + kb else [f"Delta_P - (-i hbar L_Q - hbar^2 d_P2) = {D - LQ - kb}"]

        def one():
            out = []
            for w in forms:
                lq = apply(LQ, w).hbar_shift(-1).scale(1j)
                if classical_bracket(D, [w]) != lq:
                    out.append(f"[{w}] = {classical_bracket(D, [w])}, L_Q = {lq}")
            return out

        def two():
            return [f"[{a}, {b}]" for a, b in product(forms, gens)
                    if classical_bracket(D, [a, b]) != higher_koszul_direct(P2, [a, b])]

        reports += [_run(f"{p}.decomposition", ctx, decomposition),
                    _run(f"{p}.one_bracket_is_lie_derivative", ctx, one),
                    _run(f"{p}.two_bracket_is_koszul", ctx, two)]
    return reports


# -- 5. Delta_P generates the higher Koszul brackets ---------------------------

def suite_thmdp(ctx):
    reports = []
    for label, pf in _structures(ctx, ("D",)):
        bad = _certified("thmdp", label, pf)
        if bad:
            reports.append(bad)
            continue
        p = f"thmdp.{label}"
        D = delta_P(pf)
        gens = _generators(pf.Y)

        def square():
            sq = D * D
            return [f"Delta_P^2 = {sq}"] if sq else []

        def brackets():
            out = []
            for n in range(5):
                for t in product(gens, repeat=n):
                    a = koszul_brackets_from_delta(pf, list(t), delta=D)
                    b = higher_koszul_direct(pf, list(t))
                    if a != b:
                        out.append(f"{[str(g) for g in t]}: {a} vs {b}")
            return out

        reports += [_run(f"{p}.square_zero", ctx, square),
                    _run(f"{p}.brackets_match_direct", ctx, brackets)]
    return reports


# -- 6. generalized Cartan identity ------------------------------------------

def suite_verscartan(ctx):
    rng = seeded(ctx.seed + 6)
    reports = []
    for label, M in (("R11", line_11()), ("R2", plane())):
        pairs = [(random_multivector(M, rng, window=ctx.window), random_multivector(M, rng, window=ctx.window)) for _ in range(10)]

        def check(pairs=pairs):
            out = []
            for k, (T, S) in enumerate(pairs):
                for Tp in T.parity_parts():
                    if Tp and cartan_commutator(Tp, S) != hat(canonical_schouten(Tp, S)):
                        out.append(f"pair {k}: T = {Tp}, S = {S}")
            return out

        reports.append(_run(f"verscartan.{label}", ctx, check))
    return reports


# -- 7. bialgebroid pencils ----------------------------------------------------

def suite_pencil(ctx):
    reports = []
    for label, pf in _structures(ctx, ("A", "D")):
        bad = _certified("pencil", label, pf)
        if bad:
            reports.append(bad)
            continue
        for side, build in (("forms", pencil_form_side), ("multivectors", pencil_multivector_side)):
            pen = build(pf)

            def affine(pen=pen):
                diff = pen.operator - pen.conjugated
                return [f"affine - conjugated = {diff}"] if diff else []

            def square(pen=pen):
                sq = pen.square()
                return [f"square = {sq}"] if sq else []

            reports += [_run(f"pencil.{label}.{side}.affine_form", ctx, affine),
                        _run(f"pencil.{label}.{side}.square_zero", ctx, square)]
    return reports


# -- 8. modular obstruction ---------------------------------------------------

def suite_modular(ctx):
    reports = []
    for label, pf in _structures(ctx, ("M",)):
        bad = _certified("modular", label, pf)
        if bad:
            reports.append(bad)
            continue
        p = f"modular.{label}"
        X = pf.X
        gens = _generators(X)
        samples = gens + [a * b for a in gens for b in gens if a * b]
        rep, sq, mod = naive_pencil_obstruction(pf, ctx.rho, samples, check=f"{p}.naive_square")
        reports.append(rep)

        def nonzero():
            if not mod:
                return ["delta(P) = 0: no obstruction to exhibit"]
            return [] if sq else ["naive square vanishes"]

        DP = big_D_P(pf, ctx.rho)

        def square():
            s = DP * DP
            return [f"D_P^2 = {s}"] if s else []

        def formula():
            L = lichnerowicz(pf) + HbarOperator.multiplication(mod.to_chart(X).hbar_shift(1).scale(-1j))
            return [f"on {T}" for T in samples if apply(DP, T) != apply(L, T)]

        reports += [_run(f"{p}.obstruction_nonzero", ctx, nonzero),
                    _run(f"{p}.D_P_square_zero", ctx, square),
                    _run(f"{p}.D_P_formula", ctx, formula)]
        reports[-4].details.append(f"witness: delta(P) = {mod}")
    return reports


# -- 9. operator duality -------------------------------------------------------

def _random_bundle():
    M = declare_chart([("x", 0), ("y", 1)])
    E = bundle_chart(M, (("u1", 1), ("u2", 0)))
    return BundlePair.from_bundle(E)


def suite_dualdo(ctx):
    reports = []

    def examples():
        out = []
        for name in ("A", "B", "C", "D", "M"):
            pf = fixture(name)
            pair = BundlePair.odd_tangent(pf.M)
            if dual_operator(de_rham(pf.M), pair) != divergence_half(pf.M):
                out.append(f"(-i hbar d)* on {name}")
            if dual_operator(hat(pf.P), pair) != HbarOperator.multiplication(pf.P):
                out.append(f"P^* on {name}")
            X = pf.X
            f = X.var(X.names[0]) ** 2
            if dual_operator(HbarOperator.multiplication(f.to_chart(pf.Y)), pair) != HbarOperator.multiplication(f):
                out.append(f"f(x)* on {name}")
        return out

    reports.append(_run("dualdo.examples", ctx, examples))
    pair = _random_bundle()
    rng = seeded(ctx.seed + 9)
    ops = [random_operator(pair.E, rng, terms=3, max_momenta=2, window=ctx.window) for _ in range(20)]

    def antiiso():
        out = []
        for k in range(0, 20, 2):
            for A in ops[k].parity_parts():
                for B in ops[k + 1].parity_parts():
                    if not (A and B):
                        continue
                    lhs = dual_operator(A * B, pair)
                    rhs = dual_operator(B, pair) * dual_operator(A, pair)
                    if A.parity() and B.parity():
                        rhs = -rhs
                    if lhs != rhs:
                        out.append(f"pair {k}")
        return out

    def swap():
        out = []
        for k, L in enumerate(ops):
            a = bigrading(L, pair)
            b = bigrading(dual_operator(L, pair), pair, "E*")
            ka = sorted([a] if isinstance(a, tuple) else a)
            kb = sorted([b] if isinstance(b, tuple) else b)
            if sorted((y, x) for x, y in ka) != kb:
                out.append(f"operator {k}: {ka} vs {kb}")
        return out

    def involution():
        return [f"operator {k}" for k, L in enumerate(ops)
                if dual_operator(dual_operator(L, pair), pair.swapped()) != double_dual_sign(L, pair)]

    def limit():
        out = []
        for k, L in enumerate(ops):
            a, b = classical_limit(L, pair)
            if a != b:
                out.append(f"operator {k}: symbol of dual differs from Mackenzie-Xu")
        for k in range(0, 20, 2):
            h1, h2 = principal_symbol(ops[k]), principal_symbol(ops[k + 1])
            lhs = canonical_poisson(mackenzie_xu(h1, pair), mackenzie_xu(h2, pair))
            if lhs != -mackenzie_xu(canonical_poisson(h1, h2), pair):
                out.append(f"bracket pair {k}")
        return out

    reports += [_run("dualdo.anti_isomorphism", ctx, antiiso),
                _run("dualdo.bigrading_swap", ctx, swap),
                _run("dualdo.involution_sign", ctx, involution),
                _run("dualdo.classical_limit", ctx, limit)]
    return reports


# -- 10. Fourier layer ---------------------------------------------------------

def _odd_bundle(m, prefix="u"):
    M = declare_chart([("x", 0)])
    return BundlePair.from_bundle(bundle_chart(M, tuple((f"{prefix}{k + 1}", 1) for k in range(m))))


def _fiber_monomials(chart, names):
    out = []
    for ex in product((0, 1), repeat=len(names)):
        v = chart.one()
        for n, e in zip(names, ex):
            if e:
                v = v * chart.var(n)
        out.append(v)
    return out


def _rank(rows):
    from .coeff import to_coeff
    from sympy.polys.domains import QQ_I
    n = len(rows)
    if n == 0:
        return 0
    return DomainMatrix([[to_coeff(c) for c in r] for r in rows], (n, len(rows[0])), QQ_I).rank()


def suite_fourier(ctx):
    rng = seeded(ctx.seed + 10)
    mu = Fraction(1, 2)

    def round_trip():
        out = []
        for m in range(4):
            pair = _odd_bundle(m)
            x = pair.E.var("x")
            for v in _fiber_monomials(pair.E, pair.u):
                f = v * (x + rng.randint(1, 3)).scale(rng.choice((1, -2, 3)))
                d = Density(pair, "E", f, 0, mu)
                if inverse_fiber_fourier(fiber_fourier(d)).value != f:
                    out.append(f"F^-1 F on rank {m}: {f}")
            xs = pair.Estar.var("x")
            for v in _fiber_monomials(pair.Estar, pair.w):
                g = v * (xs - 2)
                d = Density(pair, "E*", g, 1, mu)
                if fiber_fourier(inverse_fiber_fourier(d)).value != g:
                    out.append(f"F F^-1 on rank {m}: {g}")
        return out

    def weights():
        out = []
        for m in range(4):
            pair = _odd_bundle(m)
            for v in _fiber_monomials(pair.E, pair.u):
                for mu_ in (Fraction(0), mu, Fraction(1)):
                    d = Density(pair, "E", v, 0, mu_)
                    F = fiber_fourier(d)
                    if F.weight() != d.weight():
                        out.append(f"rank {m}, {v}, mu = {mu_}: {d.weight()} -> {F.weight()}")
        return out

    def pairing_check():
        out = []
        for m in range(4):
            pair = _odd_bundle(m)
            us = _fiber_monomials(pair.E, pair.u)
            ws = _fiber_monomials(pair.Estar, pair.w)
            by_weight = {}
            for f in us:
                df = Density(pair, "E", f, 0, mu)
                for g in ws:
                    dg = Density(pair, "E*", g, 1, mu)
                    val = pairing(df, dg)
                    if df.weight() + dg.weight() != 0:
                        if val:
                            out.append(f"rank {m}: <{f}, {g}> = {val} at mismatched weights")
                    else:
                        by_weight.setdefault(df.weight(), {}).setdefault(str(f), []).append(val)
            for wgt, rows in by_weight.items():
                mat = []
                for vals in rows.values():
                    row = []
                    for v in vals:
                        if len(v.terms) > 1:
                            raise KoszulError("pairing of monomials should be a single term")
                        row.append(next(iter(v.terms.values())) if v.terms else 0)
                    mat.append(row)
                if _rank(mat) != len(mat):
                    out.append(f"rank {m}: degenerate pairing at weight {wgt}")
        return out

    def intertwining():
        out = []
        pair = _odd_bundle(3)
        for f in _fiber_monomials(pair.E, pair.u):
            F = fiber_fourier(Density(pair, "E", f, 0, mu)).value
            for u, w in zip(pair.u, pair.w):
                lhs = fiber_fourier(Density(pair, "E", pair.E.var(u) * f, 0, mu)).value
                if lhs != F.derivative(w).hbar_shift(1).scale(1j):
                    out.append(f"F[{u} {f}] != i hbar d/d{w} F[{f}]")
        return out

    def hat_integral():
        out = []
        for name in ("A", "B"):
            pf = fixture(name)
            Y = pf.Y
            X = pf.X
            forms = [f for f in _fiber_monomials(Y, [Y.names[j] for _, j in Y.pairing])
                     if sum(sum(m) for m in f.terms) <= 2]
            forms = [Y.var(Y.names[0]) * f for f in forms]
            for P in (pf.P, X.var(X.names[len(pf.M.coordinates)]) * X.var(X.names[0])):
                for w in forms:
                    if hat_by_integral(P, w) != apply(hat(P), w):
                        out.append(f"{name}: P = {P}, form {w}")
        return out

    return [_run("fourier.round_trip", ctx, round_trip),
            _run("fourier.weight_preserved", ctx, weights),
            _run("fourier.pairing", ctx, pairing_check),
            _run("fourier.intertwining", ctx, intertwining),
            _run("fourier.hat_integral_form", ctx, hat_integral)]


# -- 11. quantum pullbacks ------------------------------------------------------

def suite_quapull(ctx):
    rng = seeded(ctx.seed + 11)
    M = declare_chart([("x", 0)])
    E1 = BundlePair.from_bundle(bundle_chart(M, (("u1", 1), ("u2", 1))))
    E2 = BundlePair.from_bundle(bundle_chart(M, (("v1", 1), ("v2", 1))))
    mats = [[[1, 0], [0, 1]]] + [[[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)] for _ in range(5)]
    x2 = E2.E.var("x")
    x1s = E1.Estar.var("x")
    fs = [v * (x2 + 1) for v in _fiber_monomials(E2.E, E2.u)]
    gs = [v * (x1s - 3) for v in _fiber_monomials(E1.Estar, E1.w)]

    def linear():
        out = []
        for Phi in mats:
            gf = GeneratingFunction.linear(E1, E2, Phi)
            for f in fs:
                d = Density(E2, "E", f)
                if quantum_pullback(gf, d).value != linear_pullback(d, E1, Phi).value:
                    out.append(f"Phi = {Phi}: pullback of {f}")
            for g in gs:
                d = Density(E1, "E*", g, 1)
                if dual_quantum_pullback(gf, d).value != linear_dual_pullback(d, E2, Phi).value:
                    out.append(f"Phi = {Phi}: dual pullback of {g}")
        return out

    def pairing_identity():
        out = []
        base = GeneratingFunction.linear(E1, E2, mats[1])
        W = base.workspace
        quartic = W.var("u1") * W.var("u2") * W.var("v1_dual") * W.var("v2_dual") * (W.var("x") + 2)
        for gf in (base, GeneratingFunction(base.S + quartic, E1, E2)):
            for f in fs:
                for g in gs:
                    f2, g1 = Density(E2, "E", f, 0, Fraction(1, 2)), Density(E1, "E*", g, 1, Fraction(1, 2))
                    lhs = pairing(quantum_pullback(gf, f2), g1)
                    rhs = pairing(f2, dual_quantum_pullback(gf, g1))
                    if lhs != rhs:
                        out.append(f"<L {f}, {g}> = {lhs} vs <{f}, L* {g}> = {rhs}")
        return out

    return [_run("quapull.linear", ctx, linear),
            _run("quapull.pairing_identity", ctx, pairing_identity)]


# -- 12. sigma independence ----------------------------------------------------

def suite_sigma(ctx):
    reports = []
    for label, pf in _structures(ctx, ("A",)):
        bad = _certified("sigma", label, pf)
        if bad:
            reports.append(bad)
            continue
        p = f"sigma.{label}"
        X = pf.X
        L = symmetric_pair(pf)[0]
        fib = [X.var(X.names[j]) for _, j in X.pairing]
        crd = [X.var(X.names[b]) for b, _ in X.pairing]
        sigma = ctx.sigma.to_chart(X) if ctx.sigma is not None else X.one() + fib[0] * fib[-1] * crd[0]
        g = (fib[0] * fib[-1]) * (crd[-1] + 2) if len(fib) > 1 else fib[0] * crd[0] * 0
        T1 = TwistedOperator(L, sigma)
        T2 = T1.rescaled(g)
        gens = _generators(X)
        witness = []

        def classical():
            out = []
            for n in range(4):
                for t in product(gens, repeat=n):
                    a = sigma_brackets(T1, list(t), "classical")
                    b = sigma_brackets(T2, list(t), "classical")
                    if a != b:
                        out.append(f"{[str(s) for s in t]}: {a} vs {b}")
            return out

        def quantum():
            for n in range(4):
                for t in product(gens, repeat=n):
                    a = sigma_brackets(T1, list(t))
                    b = sigma_brackets(T2, list(t))
                    if a != b:
                        diff = a - b
                        witness.append(f"{[str(s) for s in t]}: difference {diff}")
                        if diff.set_hbar_zero():
                            return [f"difference {diff} does not vanish mod hbar"]
            return [] if witness else ["quantum brackets do not depend on sigma (no witness)"]

        reports += [_run(f"{p}.classical_independent", ctx, classical),
                    _run(f"{p}.quantum_witness", ctx, quantum)]
        reports[-1].details.extend(witness[:3])
    return reports


# -- 13. symmetric BV pair ---------------------------------------------------------

def suite_bvsym(ctx):
    reports = []
    for label, pf in _structures(ctx, ("A", "D")):
        bad = _certified("bvsym", label, pf)
        if bad:
            reports.append(bad)
            continue
        p = f"bvsym.{label}"
        bv1, bv2 = symmetric_pair(pf)
        pair = BundlePair.odd_tangent(pf.M)
        dual = dual_operator(bv2, pair)

        def squares():
            out = []
            if bv1 * bv1:
                out.append("multivector operator squares to nonzero")
            if bv2 * bv2:
                out.append("form operator squares to nonzero")
            return out

        def mutual():
            diff = dual - bv1
            return [f"(bv2)* - bv1 = {diff}"] if diff else []

        def flipped():
            neg = conjugate_exp(HbarOperator.multiplication(-pf.P), divergence_half(pf.X))
            return [] if dual == neg else [f"(bv2)* - bv1(-P) = {dual - neg}"]

        reports += [_run(f"{p}.squares_zero", ctx, squares),
                    _run(f"{p}.mutual_duals", ctx, mutual),
                    _run(f"{p}.dual_is_opposite_conjugation", ctx, flipped)]
    return reports


SUITES = {
    "symbcalc": suite_symbcalc,
    "thmsymbol": suite_thmsymbol,
    "ordpoiss": suite_ordpoiss,
    "difpoiss": suite_difpoiss,
    "thmdp": suite_thmdp,
    "verscartan": suite_verscartan,
    "pencil": suite_pencil,
    "modular": suite_modular,
    "dualdo": suite_dualdo,
    "fourier": suite_fourier,
    "quapull": suite_quapull,
    "sigma": suite_sigma,
    "bvsym": suite_bvsym,
}

# acceptance criterion number -> (suite, time bound in seconds)
CRITERIA = {
    1: ("symbcalc", 10), 2: ("thmsymbol", 15), 3: ("ordpoiss", 5), 4: ("difpoiss", 5),
    5: ("thmdp", 30), 6: ("verscartan", 10), 7: ("pencil", 10), 8: ("modular", 5),
    9: ("dualdo", 15), 10: ("fourier", 10), 11: ("quapull", 5), 12: ("sigma", 5),
    13: ("bvsym", 10),
}


def run_suite(name, ctx=None):
    """Run a named suite; reports sorted by check id."""
    ctx = Context() if ctx is None else ctx
    try:
        fn = SUITES[name]
    except KeyError:
        raise KoszulError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}") from None
    return sorted(_stamp(fn(ctx), ctx), key=lambda r: r.check)
