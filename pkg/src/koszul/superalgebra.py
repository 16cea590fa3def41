"""Graded-commutative polynomials with Gaussian rational coefficients.

Everything else in the package is built on :class:`SuperPolynomial`: a finite
sum of monomials in even and odd variables declared on a :class:`Chart`.
Monomials are stored as exponent tuples in the chart's declaration order, and
products are brought to that order with the Koszul sign.

Planck's constant is an ordinary even variable ``hbar`` that every chart
carries.  Negative powers of ``hbar`` are allowed only on polynomials flagged
``laurent`` (needed for kernels such as ``exp(-(i/hbar) u w)``).
"""

from dataclasses import dataclass, field
from functools import cached_property
import re

from . import kernel
from .coeff import ONE, ZERO, format_coeff, inverse, is_coeff_like, to_coeff
from .errors import (
    ChartError,
    DivisibilityError,
    NotInvertibleError,
    ParityError,
    WindowError,
)

EVEN, ODD = 0, 1
HBAR = "hbar"
RESERVED = frozenset({HBAR, "i"})
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


def parse_parity(value):
    if value in (0, "even", "0", "e", EVEN):
        return EVEN
    if value in (1, "odd", "1", "o", ODD):
        return ODD
    raise ParityError(f"unknown parity {value!r}")


@dataclass(frozen=True)
class GradedVariable:
    """A coordinate of a chart.

    ``role`` is ``"coord"`` for dynamical coordinates, ``"param"`` for
    constants of the calculus such as ``hbar`` or a pencil parameter, and
    ``"momentum"`` for the momenta of a cotangent chart.
    """

    name: str
    parity: int
    weights: tuple = ()
    role: str = "coord"

    def weight(self, grading):
        for g, w in self.weights:
            if g == grading:
                return w
        return 0

    @property
    def is_odd(self):
        return self.parity == ODD


@dataclass(frozen=True)
class TruncationWindow:
    """Keep terms of degree at most ``max_total_degree`` in the series
    variables.

    With ``series_vars=None`` the series variables are the momenta and
    ``hbar`` of whatever chart the value lives on, which is the total degree
    of an hbar-differential operator.
    """

    max_total_degree: int = 8
    series_vars: frozenset = None

    def __post_init__(self):
        if self.max_total_degree < 0:
            raise WindowError("window degree must be non-negative")
        if self.series_vars is not None and not isinstance(self.series_vars, frozenset):
            object.__setattr__(self, "series_vars", frozenset(self.series_vars))

    def indices(self, chart):
        if self.series_vars is None:
            return chart.default_series
        return tuple(i for i, v in enumerate(chart.variables) if v.name in self.series_vars)

    def lowered(self, k):
        return TruncationWindow(self.max_total_degree - k, self.series_vars)


def combine_windows(a, b):
    if a is None:
        return b
    if b is None or a == b:
        return a
    if a.series_vars != b.series_vars:
        raise WindowError(f"incompatible truncation windows {a} and {b}")
    return a if a.max_total_degree <= b.max_total_degree else b


@dataclass(frozen=True, eq=True)
class Chart:
    """An ordered list of graded variables.

    ``kind`` is one of ``base``, ``pi_tangent``, ``pi_cotangent``,
    ``bundle``, ``cotangent``.  Derived charts keep a reference to the chart
    they were built from and a ``pairing`` of variable indices (for a
    cotangent chart: coordinate index to momentum index; for the odd tangent
    and cotangent charts: base coordinate index to fiber coordinate index).
    """

    variables: tuple
    kind: str = "base"
    base: "Chart" = field(default=None, compare=True)
    pairing: tuple = ()

    def __post_init__(self):
        seen = set()
        for v in self.variables:
            if not isinstance(v, GradedVariable):
                raise ChartError(f"not a GradedVariable: {v!r}")
            if v.name in seen:
                raise ChartError(f"duplicate variable name {v.name!r}")
            seen.add(v.name)

    # -- lookups -----------------------------------------------------------
    @cached_property
    def names(self):
        return tuple(v.name for v in self.variables)

    @cached_property
    def index(self):
        return {v.name: i for i, v in enumerate(self.variables)}

    @cached_property
    def odd(self):
        return tuple(i for i, v in enumerate(self.variables) if v.parity)

    @cached_property
    def parities(self):
        return tuple(v.parity for v in self.variables)

    @cached_property
    def hbar_index(self):
        return self.index[HBAR]

    @cached_property
    def momenta(self):
        return tuple(i for i, v in enumerate(self.variables) if v.role == "momentum")

    @cached_property
    def coordinates(self):
        return tuple(i for i, v in enumerate(self.variables) if v.role == "coord")

    @cached_property
    def params(self):
        return tuple(i for i, v in enumerate(self.variables) if v.role == "param")

    @cached_property
    def default_series(self):
        return tuple(sorted(self.momenta + (self.hbar_index,)))

    @cached_property
    def joint_series(self):
        """Momenta, ``hbar`` and fiber variables: the slots counted by
        ``joint_degree``."""
        fib = tuple(i for i, v in enumerate(self.variables) if v.weight("fiber"))
        return tuple(sorted(set(self.default_series + fib)))

    @cached_property
    def gradings(self):
        out = {HBAR}
        for v in self.variables:
            for g, _ in v.weights:
                out.add(g)
        if self.kind == "cotangent":
            out.add("deg")
        return frozenset(out)

    @cached_property
    def nvars(self):
        return len(self.variables)

    def __len__(self):
        return len(self.variables)

    def __contains__(self, name):
        return name in self.index

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((self.variables, self.kind, self.base, self.pairing))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Chart):
            return NotImplemented
        return (self.variables == other.variables and self.kind == other.kind
                and self.pairing == other.pairing and self.base == other.base)

    def variable(self, name):
        try:
            return self.variables[self.index[name]]
        except KeyError:
            raise ChartError(f"unknown variable {name!r} on chart {self.describe()}") from None

    def idx(self, var):
        name = var.name if isinstance(var, GradedVariable) else var
        try:
            return self.index[name]
        except KeyError:
            raise ChartError(f"unknown variable {name!r} on chart {self.describe()}") from None

    def describe(self):
        inner = ", ".join(f"{v.name}{'*' if v.parity else ''}" for v in self.variables)
        return f"{self.kind}({inner})"

    # -- element constructors ---------------------------------------------
    def zero(self):
        return SuperPolynomial._make(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = to_coeff(c)
        if not c:
            return self.zero()
        return SuperPolynomial._make(self, {(0,) * self.nvars: c})

    def var(self, name):
        i = self.idx(name)
        e = [0] * self.nvars
        e[i] = 1
        return SuperPolynomial._make(self, {tuple(e): ONE})

    def monomial(self, exps, coeff=1):
        return SuperPolynomial(self, {tuple(exps): coeff})

    def __call__(self, name):
        return self.var(name)

    @cached_property
    def kernel(self):
        """Normal-ordering kernel for cotangent charts."""
        if self.kind != "cotangent":
            raise ChartError("normal ordering needs a cotangent chart")
        nc = self.nvars - len(self.momenta)
        if self.momenta != tuple(range(nc, self.nvars)):
            raise ChartError("momenta must come last on a cotangent chart")
        odd_c = tuple(i for i in self.odd if i < nc)
        odd_m = tuple(i - nc for i in self.odd if i >= nc)
        pair = [0] * len(self.momenta)
        for c, m in self.pairing:
            pair[m - nc] = c
        return kernel.OrderingKernel(nc, odd_c, odd_m, tuple(pair), self.hbar_index)


def declare_chart(variables, params=(), kind="base"):
    """Declare a base chart.

    ``variables`` is a list of ``(name, parity)`` or ``(name, parity,
    weights)`` where weights is a mapping from grading name to integer.
    ``params`` lists extra even parameters (for instance a pencil parameter
    ``t``).  ``hbar`` is appended automatically.
    """
    out = []
    for spec in variables:
        if isinstance(spec, GradedVariable):
            out.append(spec)
            continue
        if isinstance(spec, str):
            name, parity, weights = spec, EVEN, {}
        elif len(spec) == 2:
            (name, parity), weights = spec, {}
        else:
            name, parity, weights = spec
        _check_name(name)
        out.append(GradedVariable(name, parse_parity(parity), tuple(sorted(dict(weights).items()))))
    for name in params:
        _check_name(name)
        out.append(GradedVariable(name, EVEN, (), "param"))
    out.append(GradedVariable(HBAR, EVEN, ((HBAR, 1),), "param"))
    return Chart(tuple(out), kind)


def _check_name(name):
    if not isinstance(name, str) or not _IDENT.match(name):
        raise ChartError(f"invalid variable name {name!r}")
    if name in RESERVED:
        raise ChartError(f"reserved name {name!r}")


_CONVERSIONS = {}


def _conversion(src, tgt):
    key = (src, tgt)
    hit = _CONVERSIONS.get(key)
    if hit is None:
        try:
            perm = tuple(tgt.index[n] for n in src.names)
        except KeyError as exc:
            raise ChartError(f"variable {exc.args[0]!r} missing on target chart {tgt.describe()}") from None
        for i, j in enumerate(perm):
            if src.parities[i] != tgt.parities[j]:
                raise ParityError(f"variable {src.names[i]!r} changes parity between charts")
        monotone = all(perm[src.odd[k]] < perm[src.odd[k + 1]] for k in range(len(src.odd) - 1))
        hit = (perm, monotone)
        _CONVERSIONS[key] = hit
    return hit


class SuperPolynomial:
    """Immutable finite sum of monomials on a chart.

    ``terms`` maps exponent tuples (chart order) to nonzero QQ_I coefficients.
    """

    __slots__ = ("chart", "terms", "window", "laurent")

    def __init__(self, chart, terms=None, window=None, laurent=False):
        clean = {}
        n = chart.nvars
        hb = chart.hbar_index
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != n:
                raise ChartError(f"monomial {m} has wrong length for {chart.describe()}")
            for i in chart.odd:
                if m[i] > 1:
                    raise ParityError(f"odd variable {chart.names[i]!r} squared")
            for i, e in enumerate(m):
                if e < 0 and not (i == hb and laurent):
                    raise ValueError(f"negative exponent of {chart.names[i]!r}")
            c = to_coeff(c)
            if c:
                prev = clean.get(m)
                clean[m] = c if prev is None else prev + c
        clean = {m: c for m, c in clean.items() if c}
        self.chart = chart
        self.terms = clean
        self.window = window
        self.laurent = laurent
        if window is not None:
            self._truncate_in_place()

    @classmethod
    def _make(cls, chart, terms, window=None, laurent=False):
        obj = object.__new__(cls)
        obj.chart = chart
        obj.terms = terms
        obj.window = window
        obj.laurent = laurent
        if window is not None:
            obj._truncate_in_place()
        return obj

    def _truncate_in_place(self):
        idx = self.window.indices(self.chart)
        top = self.window.max_total_degree
        if any(sum(m[i] for i in idx) > top for m in self.terms):
            self.terms = {m: c for m, c in self.terms.items() if sum(m[i] for i in idx) <= top}

    # -- basic protocol ----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __eq__(self, other):
        if isinstance(other, SuperPolynomial):
            if not _same_chart(self.chart, other.chart):
                return False
            return self.terms == other.terms
        if is_coeff_like(other):
            return self.terms == self.chart.const(other).terms
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.chart, frozenset(self.terms.items())))

    def __repr__(self):
        return f"SuperPolynomial({self})"

    def __str__(self):
        return format_polynomial(self)

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, SuperPolynomial):
            if not _same_chart(self.chart, other.chart):
                raise ChartError(
                    f"chart mismatch: {self.chart.describe()} vs {other.chart.describe()}")
            return other
        if is_coeff_like(other):
            return self.chart.const(other)
        raise TypeError(f"cannot combine SuperPolynomial with {type(other).__name__}")

    def _meta(self, other):
        return combine_windows(self.window, other.window), self.laurent or other.laurent

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            prev = out.get(m)
            out[m] = c if prev is None else prev + c
        w, lau = self._meta(other)
        return SuperPolynomial._make(self.chart, {m: c for m, c in out.items() if c}, w, lau)

    __radd__ = __add__

    def __neg__(self):
        return SuperPolynomial._make(self.chart, {m: -c for m, c in self.terms.items()},
                                     self.window, self.laurent)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = to_coeff(c)
        if not c:
            return SuperPolynomial._make(self.chart, {}, self.window, self.laurent)
        return SuperPolynomial._make(self.chart, {m: v * c for m, v in self.terms.items()},
                                     self.window, self.laurent)

    def __mul__(self, other):
        if is_coeff_like(other):
            return self.scale(other)
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        other = self._coerce(other)
        w, lau = self._meta(other)
        return SuperPolynomial._make(
            self.chart, kernel.poly_mul(self.terms, other.terms, self.chart.odd), w, lau)

    def __rmul__(self, other):
        if is_coeff_like(other):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out = self.chart.one()
        out = SuperPolynomial._make(self.chart, out.terms, self.window, self.laurent)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    # -- structure ---------------------------------------------------------
    def monomial_parity(self, m):
        return sum(m[i] for i in self.chart.odd) & 1

    def parity(self):
        """0 or 1 for homogeneous values (zero counts as even), else None."""
        pars = {self.monomial_parity(m) for m in self.terms}
        if not pars:
            return EVEN
        if len(pars) == 1:
            return pars.pop()
        return None

    def parity_parts(self):
        even, odd = {}, {}
        for m, c in self.terms.items():
            (odd if self.monomial_parity(m) else even)[m] = c
        return (SuperPolynomial._make(self.chart, even, self.window, self.laurent),
                SuperPolynomial._make(self.chart, odd, self.window, self.laurent))

    def free_term(self):
        return self.terms.get((0,) * self.chart.nvars, ZERO)

    def uses(self, names):
        idx = [self.chart.idx(n) for n in names]
        return any(m[i] for m in self.terms for i in idx)

    def degree_in(self, names):
        idx = [self.chart.idx(n) for n in names]
        return max((sum(m[i] for i in idx) for m in self.terms), default=-1)

    def with_window(self, window):
        return SuperPolynomial._make(self.chart, dict(self.terms), window, self.laurent)

    def truncate(self, window=None):
        return self.with_window(window if window is not None else self.window)

    def as_laurent(self):
        return SuperPolynomial._make(self.chart, self.terms, self.window, True)

    def formal(self):
        """Leave the transform layer: check that no negative hbar powers remain."""
        hb = self.chart.hbar_index
        for m in self.terms:
            if m[hb] < 0:
                raise DivisibilityError(f"negative power of hbar in {self}")
        return SuperPolynomial._make(self.chart, self.terms, self.window, False)

    # -- calculus ----------------------------------------------------------
    def derivative(self, var):
        """Left derivative."""
        i = self.chart.idx(var)
        w = self.window
        if w is not None and i in w.indices(self.chart):
            w = w.lowered(1)
        return SuperPolynomial._make(self.chart, kernel.left_derivative(self.terms, i, self.chart.odd),
                                     w, self.laurent)

    def right_derivative(self, var):
        """Right derivative: ``a <- d_v = (-1)^{v(a+1)} d_v a`` termwise."""
        i = self.chart.idx(var)
        left = self.derivative(var)
        if not self.chart.parities[i]:
            return left
        # for odd v the sign is (-1)^{|a|+1}, i.e. the parity of the result
        out = {m: (-c if self.monomial_parity(m) else c) for m, c in left.terms.items()}
        return SuperPolynomial._make(self.chart, out, left.window, self.laurent)

    def substitute(self, mapping, target=None):
        return substitute(self, mapping, target)

    def to_chart(self, target):
        """Re-express on another chart that has all the variables in use."""
        src = self.chart
        if _same_chart(src, target):
            return self
        perm, monotone = _conversion_for_used(self, target)
        n = target.nvars
        odd = src.odd
        out = {}
        for m, c in self.terms.items():
            e = [0] * n
            for i, x in enumerate(m):
                if x:
                    e[perm[i]] = x
            if not monotone:
                pos = [perm[i] for i in odd if m[i]]
                inv = 0
                for a in range(len(pos)):
                    for b in range(a + 1, len(pos)):
                        if pos[a] > pos[b]:
                            inv += 1
                if inv & 1:
                    c = -c
            out[tuple(e)] = c
        return SuperPolynomial._make(target, out, self.window, self.laurent)

    def drop(self, names, target=None):
        """Set the named variables to zero, then optionally move to ``target``."""
        idx = [self.chart.idx(n) for n in names]
        kept = {m: c for m, c in self.terms.items() if not any(m[i] for i in idx)}
        out = SuperPolynomial._make(self.chart, kept, self.window, self.laurent)
        return out.to_chart(target) if target is not None else out

    def set_hbar_zero(self):
        hb = self.chart.hbar_index
        for m in self.terms:
            if m[hb] < 0:
                raise DivisibilityError("cannot reduce a Laurent series mod hbar")
        return SuperPolynomial._make(self.chart, {m: c for m, c in self.terms.items() if not m[hb]},
                                     self.window, self.laurent)

    def hbar_shift(self, k):
        """Multiply by hbar^k; negative k divides, exactly."""
        hb = self.chart.hbar_index
        out = {}
        for m, c in self.terms.items():
            e = list(m)
            e[hb] += k
            if e[hb] < 0 and not self.laurent:
                raise DivisibilityError(f"{self} is not divisible by hbar^{-k}")
            out[tuple(e)] = c
        w = self.window
        if w is not None and k < 0 and hb in w.indices(self.chart):
            w = w.lowered(-k)
        return SuperPolynomial._make(self.chart, out, w, self.laurent)

    def grade(self, grading):
        return grade(self, grading)

    def map_coefficients(self, fn):
        out = {}
        for m, c in self.terms.items():
            v = to_coeff(fn(c))
            if v:
                out[m] = v
        return SuperPolynomial._make(self.chart, out, self.window, self.laurent)


def _same_chart(a, b):
    return a is b or a == b


def _conversion_for_used(p, target):
    src = p.chart
    try:
        return _conversion(src, target)
    except ChartError:
        pass
    # only some source variables are in use; build a partial map
    used = set()
    for m in p.terms:
        for i, e in enumerate(m):
            if e:
                used.add(i)
    perm = []
    for i, name in enumerate(src.names):
        if name in target.index:
            j = target.index[name]
            if src.parities[i] != target.parities[j]:
                raise ParityError(f"variable {name!r} changes parity between charts")
            perm.append(j)
        elif i in used:
            raise ChartError(f"variable {name!r} missing on target chart {target.describe()}")
        else:
            perm.append(-1)
    odd_used = [i for i in src.odd if perm[i] >= 0]
    monotone = all(perm[odd_used[k]] < perm[odd_used[k + 1]] for k in range(len(odd_used) - 1))
    return tuple(perm), monotone


# -- module-level operations ----------------------------------------------

def multiply(a, b):
    return a * b


def left_derivative(a, v):
    return a.derivative(v)


def right_derivative(a, v):
    return a.right_derivative(v)


def substitute(a, mapping, target=None):
    """Algebra morphism defined on generators.

    ``mapping`` sends variable names of ``a.chart`` to SuperPolynomials on the
    target chart (default: the chart of the images, else ``a.chart``).
    Unmapped variables go to the same-named variable of the target chart.
    """
    if target is None:
        target = next((v.chart for v in mapping.values() if isinstance(v, SuperPolynomial)), a.chart)
    images = {}
    for name, img in mapping.items():
        i = a.chart.idx(name)
        if not isinstance(img, SuperPolynomial):
            img = target.const(img)
        elif not _same_chart(img.chart, target):
            raise ChartError("substitution images must share one chart")
        par = img.parity()
        if img and par != a.chart.parities[i]:
            raise ParityError(f"image of {name!r} has the wrong parity")
        images[i] = img
    gens = []
    for i, name in enumerate(a.chart.names):
        if i in images:
            gens.append(images[i])
        elif name in target.index:
            gens.append(target.var(name))
        else:
            gens.append(None)
    laurent = a.laurent or any(g.laurent for g in images.values())
    window = a.window
    for g in images.values():
        window = combine_windows(window, g.window)
    powers = {}
    out = SuperPolynomial._make(target, {}, window, laurent)
    hb = a.chart.hbar_index
    acc = {}
    for m, c in a.terms.items():
        term = None
        for i, e in enumerate(m):
            if not e:
                continue
            g = gens[i]
            if g is None:
                raise ChartError(f"variable {a.chart.names[i]!r} has no image on the target chart")
            if e < 0:
                if i != hb:
                    raise ValueError("negative exponent")
                key = (i, e)
                if key not in powers:
                    powers[key] = _hbar_power(target, e)
            else:
                key = (i, e)
                if key not in powers:
                    powers[key] = g ** e
            f = powers[key]
            term = f if term is None else term * f
            if not term:
                break
        if term is None:
            term = target.one()
        for mm, cc in term.terms.items():
            v = cc * c
            prev = acc.get(mm)
            acc[mm] = v if prev is None else prev + v
    out = SuperPolynomial._make(target, {m: c for m, c in acc.items() if c}, window, laurent)
    return out


def _hbar_power(chart, e):
    m = [0] * chart.nvars
    m[chart.hbar_index] = e
    return SuperPolynomial._make(chart, {tuple(m): ONE}, None, e < 0)


def berezin_integral(a, odd_vars):
    """Berezin integral over the listed odd variables.

    Convention: the integral over ``D(t1, ..., tk)`` applies the left
    derivative in ``t1`` first, then ``t2``, and so on, so that the integral
    of the monomial ``t1*t2*...*tk`` is 1.
    """
    out = a
    for v in odd_vars:
        name = v.name if isinstance(v, GradedVariable) else v
        if not a.chart.variable(name).parity:
            raise ParityError(f"Berezin integration over even variable {name!r}")
        out = out.derivative(name)
    return out


def grade(a, grading):
    """Split ``a`` into homogeneous components of a grading.

    The grading ``hbar`` counts powers of hbar; on cotangent charts the
    grading ``deg`` is the total degree (momenta plus hbar).
    """
    chart = a.chart
    if grading not in chart.gradings:
        raise ChartError(f"grading {grading!r} is not declared on {chart.describe()}")
    if grading == "deg":
        weights = [1 if (i in chart.momenta or i == chart.hbar_index) else 0
                   for i in range(chart.nvars)]
    else:
        weights = [v.weight(grading) for v in chart.variables]
    parts = {}
    for m, c in a.terms.items():
        w = sum(e * x for e, x in zip(m, weights))
        parts.setdefault(w, {})[m] = c
    return {w: SuperPolynomial._make(chart, t, a.window, a.laurent) for w, t in sorted(parts.items())}


def joint_degree(a):
    """Largest total degree of a term of ``a`` in momenta, ``hbar`` and fiber
    variables (0 for the zero polynomial)."""
    idx = a.chart.joint_series
    return max((sum(m[i] for i in idx) for m in a.terms), default=0)


def exp_series(g, max_terms=64):
    """``exp(g)`` for an even element with nilpotent (or window-truncated)
    powers.  Raises WindowError if the series does not close."""
    par = g.parity()
    if par != EVEN:
        raise ParityError("exponential of a non-even element")
    if g.free_term():
        raise NotInvertibleError("exponential needs an element without constant term")
    total = g.chart.one()
    total = SuperPolynomial._make(g.chart, total.terms, g.window, g.laurent)
    term = total
    for k in range(1, max_terms + 1):
        term = (term * g).scale(to_coeff(1) if k == 1 else inverse(to_coeff(k)))
        if not term:
            return total
        total = total + term
    raise WindowError("exponential series did not terminate; use a truncation window")


def inverse_series(rho, max_terms=64):
    """Inverse of ``c + n`` with ``c`` a nonzero constant and ``n`` nilpotent
    (or truncated by the window)."""
    c = rho.free_term()
    if not c:
        raise NotInvertibleError(f"{rho} has zero constant term")
    cinv = inverse(c)
    n = rho - rho.chart.const(c)
    step = n.scale(-cinv)
    total = rho.chart.const(cinv)
    total = SuperPolynomial._make(rho.chart, total.terms, rho.window, rho.laurent)
    term = total
    for _ in range(max_terms):
        term = term * step
        if not term:
            return total
        total = total + term
    raise NotInvertibleError(f"{rho} is not invertible by a terminating series")


def format_monomial(chart, m):
    parts = []
    for name, e in zip(chart.names, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(p):
    if not p.terms:
        return "0"
    pieces = []
    for m in sorted(p.terms, key=lambda m: (sum(abs(e) for e in m), tuple(-e for e in m))):
        c = p.terms[m]
        mono = format_monomial(p.chart, m)
        cs = format_coeff(c)
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        elif cs == "-1":
            body = "-" + mono
        else:
            body = f"{cs}*{mono}"
        pieces.append(body)
    text = pieces[0]
    for b in pieces[1:]:
        text += " - " + b[1:] if b.startswith("-") else " + " + b
    return text
