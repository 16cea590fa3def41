"""Brackets generated by operators and by Hamiltonians, and axiom checks.

The quantum n-bracket of an operator ``L`` is
``(-i hbar)^-n [...[L, f_1], ..., f_n](1)``; the classical bracket is its
reduction mod hbar.  The derived bracket of a Hamiltonian ``H`` is
``{...{H, f_1}, ..., f_n}`` restricted to zero momenta.
"""

from dataclasses import dataclass
import random

from .errors import ChartError, DivisibilityError, ParityError
from .geometry import canonical_poisson
from .hbar_ops import HbarOperator, apply, commutator
from .report import Timer, verdict
from .superalgebra import EVEN, SuperPolynomial, exp_series, inverse_series


def nested_commutator(L, args):
    """``(-i hbar)^-n [...[L, f_1], ..., f_n]`` as an operator, dividing
    exactly at each step."""
    op = L
    hb = L.cotangent.hbar_index
    for f in args:
        op = commutator(op, HbarOperator.multiplication(f.to_chart(L.chart)))
        try:
            op = op.div_minus_i_hbar()
        except DivisibilityError as exc:
            raise DivisibilityError(
                f"commutator with {f} is not divisible by -i*hbar; "
                "the operator is not hbar-differential") from exc
        if op.symbol.laurent and any(m[hb] < 0 for m in op.symbol.terms):
            raise DivisibilityError(
                f"commutator with {f} is not divisible by -i*hbar; "
                "the operator is not hbar-differential")
    return op


def quantum_bracket(L, args):
    """Quantum n-bracket; ``n = 0`` gives ``L(1)``."""
    return nested_commutator(L, args).free_term()


def classical_bracket(L, args):
    return quantum_bracket(L, args).set_hbar_zero()


def derived_bracket(H, args):
    """``{...{H, f_1}, ..., f_n}`` with momenta set to zero."""
    K = H.chart
    if K.kind != "cotangent":
        raise ChartError("derived brackets need a Hamiltonian on a cotangent chart")
    out = H
    for f in args:
        if f.chart == K:
            raise ChartError("arguments of a derived bracket must be momentum-free")
        out = canonical_poisson(out, f.to_chart(K))
    return out.drop([K.names[i] for i in K.momenta], K.base)


@dataclass(frozen=True)
class TwistedOperator:
    """``L`` acting on a rank-one module with generator ``sigma``:
    ``L_sigma(f) = sigma^-1 L(sigma f)``."""

    L: HbarOperator
    sigma: SuperPolynomial

    def __post_init__(self):
        s = self.sigma.to_chart(self.L.chart)
        if s.parity() != EVEN:
            raise ParityError("sigma must be even")
        inverse_series(s)  # raises if not invertible
        object.__setattr__(self, "sigma", s)

    @property
    def sigma_inverse(self):
        return inverse_series(self.sigma)

    def operator(self):
        """``sigma^-1 o L o sigma`` as a normal-ordered operator."""
        return (HbarOperator.multiplication(self.sigma_inverse) * self.L
                * HbarOperator.multiplication(self.sigma))

    def rescaled(self, g):
        """The same operator on the generator ``e^g sigma``."""
        return TwistedOperator(self.L, exp_series(g.to_chart(self.L.chart)) * self.sigma)


def sigma_brackets(T, args, mode="quantum"):
    """``sigma^-1 (-i hbar)^-n [...[L, f_1], ..., f_n](sigma)``."""
    C = nested_commutator(T.L, args)
    value = T.sigma_inverse * apply(C, T.sigma)
    if mode == "quantum":
        return value
    if mode == "classical":
        return value.set_hbar_zero()
    raise ValueError(f"unknown mode {mode!r}")


# -- checks -------------------------------------------------------------------

def check_quantum_leibniz(L, n, samples, seed=0, check="quantum_leibniz", sign=1):
    """Check the quantum Leibniz rule

    ``{f_1..f_{n-1}, f g} = {.., f} g + (-1)^e f {.., g} + (-i hbar){.., f, g}``

    with ``e = (|L| + |f_1| + ... + |f_{n-1}|) |f|`` on tuples drawn from
    ``samples`` (homogeneous functions).  ``sign`` = -1 flips the sign of the
    middle term (a negative control).
    """
    rng = random.Random(seed)
    failures = []
    pl = L.parity()
    with Timer() as t:
        for trial in range(len(samples)):
            fs = [rng.choice(samples) for _ in range(n - 1)]
            f, g = rng.choice(samples), rng.choice(samples)
            lhs = quantum_bracket(L, fs + [f * g])
            e = (pl + sum(x.parity() for x in fs)) * f.parity()
            mid = f * quantum_bracket(L, fs + [g])
            rhs = (quantum_bracket(L, fs + [f]) * g + (mid if e % 2 == 0 else -mid).scale(sign)
                   + quantum_bracket(L, fs + [f, g]).hbar_shift(1).scale(-1j))
            if lhs != rhs:
                failures.append(f"trial {trial}: difference {lhs - rhs}")
    return verdict(check, failures, seed, 0, t.millis)


def check_koszul_axioms(bracket, sample, d=None, check="koszul_axioms", scalars=(2, -3)):
    """Axioms of an odd symmetric bracket on forms, on all pairs and triples
    from ``sample``:

    * linearity,
    * symmetry ``[a, b] = (-1)^{ab} [b, a]``,
    * Leibniz ``[a, bc] = [a, b] c + (-1)^{(a+1) b} b [a, c]``,
    * Jacobi ``[a, [b, c]] = (-1)^{a+1} [[a, b], c] + (-1)^{(a+1)(b+1)} [b, [a, c]]``,
    * when ``d`` is given (a callable), ``d[a, b] = -[da, b] + (-1)^{a+1} [a, db]``.
    """
    failures = []
    par = [s.parity() for s in sample]
    if any(p is None for p in par):
        raise ParityError("sample forms must be homogeneous")
    with Timer() as t:
        cache = {}

        def br(i, j):
            key = (i, j)
            if key not in cache:
                cache[key] = bracket(sample[i], sample[j])
            return cache[key]

        n = len(sample)
        for i in range(n):
            for j in range(n):
                a, b = sample[i], sample[j]
                pa, pb = par[i], par[j]
                if bracket(a, b.scale(scalars[0]) + b.scale(scalars[1])) != br(i, j).scale(scalars[0] + scalars[1]):
                    failures.append(f"linearity ({i},{j})")
                sym = br(j, i) if (pa * pb) % 2 == 0 else -br(j, i)
                if br(i, j) != sym:
                    failures.append(f"symmetry ({i},{j}): {br(i, j)} vs {sym}")
                for k in range(n):
                    c = sample[k]
                    lhs = bracket(a, b * c)
                    mid = b * br(i, k)
                    rhs = br(i, j) * c + (mid if ((pa + 1) * pb) % 2 == 0 else -mid)
                    if lhs != rhs:
                        failures.append(f"leibniz ({i},{j},{k})")
                    bc = br(j, k)
                    lhs = bracket(a, bc)
                    t1 = bracket(br(i, j), c)
                    t2 = bracket(b, br(i, k))
                    rhs = (t1 if (pa + 1) % 2 == 0 else -t1) + (t2 if ((pa + 1) * (pb + 1)) % 2 == 0 else -t2)
                    if lhs != rhs:
                        failures.append(f"jacobi ({i},{j},{k}): {lhs - rhs}")
                if d is not None:
                    lhs = d(br(i, j))
                    t2 = bracket(a, d(b))
                    rhs = -bracket(d(a), b) + (t2 if (pa + 1) % 2 == 0 else -t2)
                    if lhs != rhs:
                        failures.append(f"d-derivation ({i},{j}): {lhs - rhs}")
    return verdict(check, failures, 0, 0, t.millis)
