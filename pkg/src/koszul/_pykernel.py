"""Pure-Python versions of the hot loops.

Monomials are tuples of exponents in chart order.  ``odd`` is the tuple of
indices of odd variables.  The compiled module ``_ckernel`` implements the
same functions with the same signatures.
"""

from .coeff import NEG_I_POWERS


def mono_mul(a, b, odd):
    """Product of two monomials.

    Returns ``(sign, exps)`` with sign in {+1, -1}, or ``(0, None)`` when an
    odd variable would be squared.
    """
    seen = 0
    swaps = 0
    for j in reversed(odd):
        if b[j]:
            if a[j]:
                return 0, None
            swaps += seen
        if a[j]:
            seen += 1
    return (-1 if swaps & 1 else 1), tuple([x + y for x, y in zip(a, b)])


def poly_mul(ta, tb, odd):
    out = {}
    get = out.get
    for ma, ca in ta.items():
        for mb, cb in tb.items():
            s, m = mono_mul(ma, mb, odd)
            if not s:
                continue
            c = ca * cb
            if s < 0:
                c = -c
            prev = get(m)
            out[m] = c if prev is None else prev + c
    return {m: c for m, c in out.items() if c}


def left_derivative(terms, idx, odd):
    """Left derivative in the variable with index ``idx``."""
    out = {}
    var_odd = idx in odd
    for m, c in terms.items():
        e = m[idx]
        if not e:
            continue
        if var_odd:
            before = 0
            for j in odd:
                if j >= idx:
                    break
                before += m[j]
            if before & 1:
                c = -c
        else:
            c = c * e
        nm = list(m)
        nm[idx] = e - 1
        nm = tuple(nm)
        prev = out.get(nm)
        out[nm] = c if prev is None else prev + c
    return {m: c for m, c in out.items() if c}


class OrderingKernel:
    """Normal ordering for one cotangent chart.

    The chart's variables are ``nc`` non-momentum slots followed by the
    momenta.  ``pair[k]`` is the coordinate slot conjugate to momentum ``k``
    and ``hbar`` is the slot of the Planck constant.  Each passage of a
    momentum through its coordinate produces a factor ``-i*hbar``; the kernel
    keeps integer coefficients and records the number of such factors.
    """

    def __init__(self, nc, odd_c, odd_m, pair, hbar):
        self.nc = nc
        self.odd_c = tuple(odd_c)
        self.odd_m = tuple(odd_m)
        self.pair = tuple(pair)
        self.hbar = hbar
        self.mom_odd = tuple(k in self.odd_m for k in range(len(pair)))
        self._cache = {}

    def commute(self, P, m):
        """Normal form of the momentum word ``P`` composed with the coordinate
        monomial ``m``: a list of ``(n, k, coords, moms)`` meaning
        ``n * (-i)^k * coords * moms`` (with ``hbar^k`` already in coords)."""
        key = (P, m)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        a = -1
        for k, e in enumerate(P):
            if e:
                a = k
                break
        if a < 0:
            res = [(1, 0, m, P)]
            self._cache[key] = res
            return res
        rest = list(P)
        rest[a] -= 1
        inner = self.commute(tuple(rest), m)
        ca = self.pair[a]
        a_odd = self.mom_odd[a]
        odd_c = self.odd_c
        hb = self.hbar
        acc = {}
        for n, k, mc, mm in inner:
            e = mc[ca]
            if e:
                # derivative term: (-i hbar) * d_a(mc) * mm
                if a_odd:
                    before = 0
                    for j in odd_c:
                        if j >= ca:
                            break
                        before += mc[j]
                    coef = -n if before & 1 else n
                else:
                    coef = n * e
                nc_ = list(mc)
                nc_[ca] = e - 1
                nc_[hb] += 1
                key2 = (k + 1, tuple(nc_), mm)
                acc[key2] = acc.get(key2, 0) + coef
            # passing term: (-1)^{|p_a| |mc|} mc * p_a * mm
            if a_odd:
                par = 0
                for j in odd_c:
                    par += mc[j]
                coef = -n if par & 1 else n
            else:
                coef = n
            nm_ = list(mm)
            nm_[a] += 1
            key2 = (k, mc, tuple(nm_))
            acc[key2] = acc.get(key2, 0) + coef
        res = [(n, k, mc, mm) for (k, mc, mm), n in acc.items() if n]
        self._cache[key] = res
        return res

    def compose(self, ta, tb):
        """Normal-ordered symbol of the composition of two normal-ordered
        symbols (dicts monomial -> coefficient)."""
        nc = self.nc
        odd_c = self.odd_c
        odd_m = self.odd_m
        commute = self.commute
        out = {}
        split_b = [(mb[:nc], mb[nc:], cb) for mb, cb in tb.items()]
        for ma, ca in ta.items():
            ac, am = ma[:nc], ma[nc:]
            for bc, bm, cb in split_b:
                local = {}
                for n, k, mc, mm in commute(am, bc):
                    s1, c1 = mono_mul(ac, mc, odd_c)
                    if not s1:
                        continue
                    s2, m2 = mono_mul(mm, bm, odd_m)
                    if not s2:
                        continue
                    key = (c1 + m2, k & 3)
                    local[key] = local.get(key, 0) + n * s1 * s2
                if not local:
                    continue
                cab = ca * cb
                for (mono, ph), n in local.items():
                    if not n:
                        continue
                    c = cab * NEG_I_POWERS[ph] * n
                    prev = out.get(mono)
                    out[mono] = c if prev is None else prev + c
        return {m: c for m, c in out.items() if c}
