# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of _kernel_py: identical reduce/mul contract, with the
dispatch-heavy inner loops lowered to C.  Monomial keys stay arbitrary
Python ints (the packed representation is shared with the pure path), so
results are bit-identical; the speedup comes from loop and call overhead."""

import heapq
from math import gcd

BACKEND = "compiled"


def prepare_divisor(keys, coeffs, p):
    lead = keys[0]
    lc = coeffs[0]
    inv = pow(lc, -1, p) if p else None
    return (lead, lc, tuple(keys[1:]), tuple(coeffs[1:]), inv)


def mul_terms(list ak, list ac, list bk, list bc, mul_off, p):
    cdef Py_ssize_t i, j, na, nb
    if not ak or not bk:
        return [], []
    if len(ak) < len(bk):
        ak, ac, bk, bc = bk, bc, ak, ac
    na = len(ak)
    nb = len(bk)
    cdef dict acc = {}
    cdef object base, k, v, cx, cy
    for j in range(nb):
        cx = bc[j]
        base = bk[j] - mul_off
        for i in range(na):
            k = ak[i] + base
            v = acc.get(k)
            if v is None:
                acc[k] = cx * ac[i]
            else:
                acc[k] = v + cx * ac[i]
    items = []
    for k, v in acc.items():
        if p:
            v = v % p
        if v:
            items.append((k, v))
    items.sort(reverse=True)
    return [t[0] for t in items], [t[1] for t in items]


def reduce_terms(list fk, list fc, divisors, guards, p):
    cdef dict work = dict(zip(fk, fc))
    cdef list heap = [-k for k in fk]
    heapq.heapify(heap)
    cdef list rem_keys = []
    cdef list rem_coeffs = []
    cdef object mult = 1
    cdef unsigned long long steps = 0
    cdef Py_ssize_t ndiv = len(divisors)
    cdef list divs = list(divisors)
    cdef Py_ssize_t di, ti, nt
    cdef object m, c, mg, hit, lead, lc, inv, qadd, kk, v, t
    cdef object g, beta, alpha, shrink
    cdef tuple d, tkeys, tcoeffs
    cdef bint found
    heappop = heapq.heappop
    heappush = heapq.heappush
    while heap:
        m = -heappop(heap)
        c = work.pop(m, 0)
        if not c:
            continue
        mg = m | guards
        found = False
        hit = None
        for di in range(ndiv):
            d = <tuple> divs[di]
            if ((mg - d[0]) & guards) == guards:
                hit = d
                found = True
                break
        if not found:
            rem_keys.append(m)
            rem_coeffs.append(c)
            continue
        d = <tuple> hit
        lead = d[0]
        lc = d[1]
        tkeys = <tuple> d[2]
        tcoeffs = <tuple> d[3]
        inv = d[4]
        qadd = m - lead
        nt = len(tkeys)
        if p:
            t = c * inv % p
            for ti in range(nt):
                kk = tkeys[ti] + qadd
                v = work.get(kk)
                if v is None:
                    work[kk] = -t * tcoeffs[ti] % p
                    heappush(heap, -kk)
                else:
                    work[kk] = (v - t * tcoeffs[ti]) % p
            continue
        g = gcd(c, lc)
        beta = lc // g
        alpha = c // g
        if beta != 1:
            for kk in work:
                work[kk] = work[kk] * beta
            if rem_coeffs:
                rem_coeffs = [v * beta for v in rem_coeffs]
            mult = mult * beta
        for ti in range(nt):
            kk = tkeys[ti] + qadd
            v = work.get(kk)
            if v is None:
                work[kk] = -alpha * tcoeffs[ti]
                heappush(heap, -kk)
            else:
                work[kk] = v - alpha * tcoeffs[ti]
        steps += 1
        if steps & 63 == 0 and mult > 1:
            shrink = mult
            for v in work.values():
                if v:
                    shrink = gcd(shrink, v)
                    if shrink == 1:
                        break
            if shrink > 1:
                for v in rem_coeffs:
                    shrink = gcd(shrink, v)
                    if shrink == 1:
                        break
            if shrink > 1:
                mult = mult // shrink
                for kk in work:
                    work[kk] = work[kk] // shrink
                rem_coeffs = [v // shrink for v in rem_coeffs]
    return rem_keys, rem_coeffs, mult
