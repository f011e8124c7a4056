"""Pure-Python reduction and multiplication kernels.

Polynomials cross this boundary as parallel lists (packed keys descending,
integer coefficients).  Over the rationals the engine works with primitive
integer polynomials and pseudo-division: reduce_terms returns a remainder
equal to mult * NF(f) for a positive integer mult, which callers divide out
when they need the exact field normal form.  Over F_p coefficients are
residues and mult is always 1.

The compiled twin in _speedups.pyx implements the same contract; tests
compare the two on random inputs.
"""

from __future__ import annotations

import heapq
from math import gcd

BACKEND = "python"


def prepare_divisor(keys, coeffs, p):
    """Precompute the tuple shape reduce_terms expects for one divisor."""
    lead = keys[0]
    lc = coeffs[0]
    inv = pow(lc, -1, p) if p else None
    return (lead, lc, tuple(keys[1:]), tuple(coeffs[1:]), inv)


def mul_terms(ak, ac, bk, bc, mul_off, p):
    """Product of two raw polynomials; returns (keys, coeffs) descending."""
    if not ak or not bk:
        return [], []
    if len(ak) < len(bk):
        ak, ac, bk, bc = bk, bc, ak, ac
    acc = {}
    for kx, cx in zip(bk, bc):
        base = kx - mul_off
        for ky, cy in zip(ak, ac):
            k = ky + base
            v = acc.get(k)
            acc[k] = cx * cy if v is None else v + cx * cy
    items = []
    for k, c in acc.items():
        if p:
            c %= p
        if c:
            items.append((k, c))
    items.sort(reverse=True)
    return [k for k, _ in items], [c for _, c in items]


def reduce_terms(fk, fc, divisors, guards, p):
    """Fully reduce f by the divisor list (first matching divisor wins).

    divisors: sequence of prepare_divisor tuples, order fixed by the caller.
    Returns (keys, coeffs, mult) with keys descending.  Over F_p the
    reduction is exact and mult == 1; over the integers the remainder is
    mult * NF(f) with mult a positive integer.
    """
    work = dict(zip(fk, fc))
    heap = [-k for k in fk]
    heapq.heapify(heap)
    rem_keys = []
    rem_coeffs = []
    mult = 1
    steps = 0
    while heap:
        m = -heapq.heappop(heap)
        c = work.pop(m, 0)
        if not c:
            continue
        mg = m | guards
        hit = None
        for d in divisors:
            if ((mg - d[0]) & guards) == guards:
                hit = d
                break
        if hit is None:
            rem_keys.append(m)
            rem_coeffs.append(c)
            continue
        lead, lc, tkeys, tcoeffs, inv = hit
        qadd = m - lead
        if p:
            t = c * inv % p
            for tk, tc in zip(tkeys, tcoeffs):
                kk = tk + qadd
                v = work.get(kk)
                if v is None:
                    work[kk] = -t * tc % p
                    heapq.heappush(heap, -kk)
                else:
                    work[kk] = (v - t * tc) % p
            continue
        g = gcd(c, lc)
        beta = lc // g
        alpha = c // g
        if beta != 1:
            for k in work:
                work[k] *= beta
            if rem_coeffs:
                rem_coeffs = [v * beta for v in rem_coeffs]
            mult *= beta
        for tk, tc in zip(tkeys, tcoeffs):
            kk = tk + qadd
            v = work.get(kk)
            if v is None:
                work[kk] = -alpha * tc
                heapq.heappush(heap, -kk)
            else:
                work[kk] = v - alpha * tc
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
                mult //= shrink
                for k in work:
                    work[k] //= shrink
                rem_coeffs = [v // shrink for v in rem_coeffs]
    return rem_keys, rem_coeffs, mult
