# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot loops in ``_pykernel``.

Same functions, same signatures, same results; only the inner integer
arithmetic is typed.
"""

from .coeff import NEG_I_POWERS


cpdef tuple mono_mul(tuple a, tuple b, tuple odd):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t t, j, i
    cdef int seen = 0
    cdef int swaps = 0
    cdef long aj, bj
    for t in range(len(odd) - 1, -1, -1):
        j = odd[t]
        aj = a[j]
        bj = b[j]
        if bj:
            if aj:
                return 0, None
            swaps += seen
        if aj:
            seen += 1
    cdef list out = [None] * n
    for i in range(n):
        out[i] = <long>a[i] + <long>b[i]
    return (-1 if swaps & 1 else 1), tuple(out)


cpdef dict poly_mul(dict ta, dict tb, tuple odd):
    cdef dict out = {}
    cdef int s
    for ma, ca in ta.items():
        for mb, cb in tb.items():
            s, m = mono_mul(ma, mb, odd)
            if not s:
                continue
            c = ca * cb
            if s < 0:
                c = -c
            prev = out.get(m)
            out[m] = c if prev is None else prev + c
    return {m: c for m, c in out.items() if c}


cpdef dict left_derivative(dict terms, Py_ssize_t idx, tuple odd):
    cdef dict out = {}
    cdef bint var_odd = idx in odd
    cdef long e, before
    cdef Py_ssize_t j
    for m, c in terms.items():
        e = m[idx]
        if not e:
            continue
        if var_odd:
            before = 0
            for j in odd:
                if j >= idx:
                    break
                before += <long>m[j]
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


cdef class OrderingKernel:
    cdef public Py_ssize_t nc
    cdef public tuple odd_c, odd_m, pair, mom_odd
    cdef public Py_ssize_t hbar
    cdef dict _cache

    def __init__(self, nc, odd_c, odd_m, pair, hbar):
        self.nc = nc
        self.odd_c = tuple(odd_c)
        self.odd_m = tuple(odd_m)
        self.pair = tuple(pair)
        self.hbar = hbar
        self.mom_odd = tuple(k in self.odd_m for k in range(len(pair)))
        self._cache = {}

    cpdef list commute(self, tuple P, tuple m):
        key = (P, m)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        cdef Py_ssize_t a = -1
        cdef Py_ssize_t k
        for k in range(len(P)):
            if P[k]:
                a = k
                break
        cdef list res
        if a < 0:
            res = [(1, 0, m, P)]
            self._cache[key] = res
            return res
        cdef list rest = list(P)
        rest[a] -= 1
        cdef list inner = self.commute(tuple(rest), m)
        cdef Py_ssize_t ca = self.pair[a]
        cdef bint a_odd = self.mom_odd[a]
        cdef Py_ssize_t hb = self.hbar
        cdef dict acc = {}
        cdef long e, before, par, n, kk, coef
        cdef Py_ssize_t j
        cdef list nc_, nm_
        for item in inner:
            n = item[0]
            kk = item[1]
            mc = item[2]
            mm = item[3]
            e = mc[ca]
            if e:
                if a_odd:
                    before = 0
                    for j in self.odd_c:
                        if j >= ca:
                            break
                        before += <long>mc[j]
                    coef = -n if before & 1 else n
                else:
                    coef = n * e
                nc_ = list(mc)
                nc_[ca] = e - 1
                nc_[hb] += 1
                key2 = (kk + 1, tuple(nc_), mm)
                acc[key2] = acc.get(key2, 0) + coef
            if a_odd:
                par = 0
                for j in self.odd_c:
                    par += <long>mc[j]
                coef = -n if par & 1 else n
            else:
                coef = n
            nm_ = list(mm)
            nm_[a] += 1
            key2 = (kk, mc, tuple(nm_))
            acc[key2] = acc.get(key2, 0) + coef
        res = [(v, kq[0], kq[1], kq[2]) for kq, v in acc.items() if v]
        self._cache[key] = res
        return res

    cpdef dict compose(self, dict ta, dict tb):
        cdef Py_ssize_t nc = self.nc
        cdef tuple odd_c = self.odd_c
        cdef tuple odd_m = self.odd_m
        cdef dict out = {}
        cdef dict local
        cdef int s1, s2
        cdef list split_b = [(mb[:nc], mb[nc:], cb) for mb, cb in tb.items()]
        for ma, ca in ta.items():
            ac = ma[:nc]
            am = ma[nc:]
            for bc, bm, cb in split_b:
                local = {}
                for item in self.commute(am, bc):
                    s1, c1 = mono_mul(ac, item[2], odd_c)
                    if not s1:
                        continue
                    s2, m2 = mono_mul(item[3], bm, odd_m)
                    if not s2:
                        continue
                    key = (c1 + m2, (<long>item[1]) & 3)
                    local[key] = local.get(key, 0) + (<long>item[0]) * s1 * s2
                if not local:
                    continue
                cab = ca * cb
                for kp, v in local.items():
                    if not v:
                        continue
                    c = cab * NEG_I_POWERS[kp[1]] * v
                    prev = out.get(kp[0])
                    out[kp[0]] = c if prev is None else prev + c
        return {m: c for m, c in out.items() if c}
