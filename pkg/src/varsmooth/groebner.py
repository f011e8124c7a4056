"""Groebner bases under degrevlex, with the derived ideal predicates.

The untracked engine runs Buchberger with normal-strategy pair selection
and the classical coprime and chain criteria, reducing over the integers
(pseudo-division on primitive polynomials) for rational input and over F_p
directly.  Representation tracking, needed by the covering construction,
is a separate field-arithmetic path that additionally carries, for every
basis element, its expression in the original generators; it is opt-in
because rows roughly double the work and memory.

Radical membership uses the extra-variable trick: f lies in the radical of
I exactly when I together with 1 - t*f generates the unit ideal in the
extended ring.  No elimination orders are used anywhere.
"""

from __future__ import annotations

import hashlib
import heapq
from itertools import combinations
from math import gcd
from threading import RLock
from typing import Optional

from .errors import RingMismatchError
from .kernel import active as _K
from .limits import Budget, ensure_budget
from .poly import Polynomial
from .ring import Ring


class Ideal:
    """A finite generating set in a fixed ring; zero generators are
    dropped, so the empty tuple is the zero ideal."""

    __slots__ = ("ring", "generators", "_hash")

    def __init__(self, ring: Ring, generators):
        gens = []
        for g in generators:
            if g.ring != ring:
                raise RingMismatchError("generator outside the ideal's ring")
            if not g.is_zero():
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self._hash = hash((ring, self.generators))

    def __eq__(self, other):
        return (isinstance(other, Ideal) and self.ring == other.ring
                and self.generators == other.generators)

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.generators)

    def fingerprint(self) -> str:
        h = hashlib.blake2s(digest_size=8)
        h.update(repr(self.ring).encode())
        for g in self.generators:
            h.update(b"|")
            for k, c in zip(g.keys, g.coeffs):
                h.update(f"{k}:{c};".encode())
        return h.hexdigest()

    def __repr__(self):
        inner = ", ".join(str(g) for g in self.generators) or "0"
        return f"<ideal ({inner})>"


class GroebnerBasis:
    """Reduced basis: monic elements, ascending leading keys, pairwise
    non-divisible leads.  transform[i][j] expresses element i in the
    original generators when tracking was requested."""

    __slots__ = ("ideal", "elements", "transform", "_divisors", "_lead_keys")

    def __init__(self, ideal: Ideal, elements, transform=None):
        self.ideal = ideal
        self.elements = tuple(elements)
        self.transform = transform
        p = ideal.ring.field.characteristic
        divs = []
        for e in self.elements:
            zk, zc, _ = e.zform()
            divs.append(_K.prepare_divisor(zk, zc, p))
        self._divisors = divs
        self._lead_keys = tuple(e.leading_key() for e in self.elements)

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def is_zero_ideal(self) -> bool:
        return not self.elements

    def _reduce_raw(self, f: Polynomial):
        zk, zc, scale = f.zform()
        ring = self.ideal.ring
        rk, rc, mult = _K.reduce_terms(
            list(zk), list(zc), self._divisors, ring.guards,
            ring.field.characteristic)
        return rk, rc, mult, scale

    def contains(self, f: Polynomial, budget: Optional[Budget] = None) -> bool:
        if f.is_zero():
            return True
        rk, _, _, _ = self._reduce_raw(f)
        return not rk

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.is_zero():
            return f
        ring = self.ideal.ring
        rk, rc, mult, scale = self._reduce_raw(f)
        p = ring.field.characteristic
        if p:
            return Polynomial(ring, rk, rc)
        factor = scale / mult
        return Polynomial(ring, rk, [c * factor for c in rc])

    def __repr__(self):
        return f"<groebner basis, {len(self.elements)} elements>"


# -- cache -------------------------------------------------------------------


class _GBCache:
    def __init__(self, maxsize: int = 4096):
        self.maxsize = maxsize
        self.lock = RLock()
        self.data: dict = {}

    def get(self, key):
        with self.lock:
            return self.data.get(key)

    def put(self, key, value):
        with self.lock:
            if len(self.data) >= self.maxsize:
                self.data.pop(next(iter(self.data)))
            self.data[key] = value

    def clear(self):
        with self.lock:
            self.data.clear()


_cache = _GBCache()
_dim_cache = _GBCache(maxsize=4096)


def clear_caches():
    _cache.clear()
    _dim_cache.clear()


# -- shared engine helpers -----------------------------------------------------


def _primitive(keys, coeffs):
    g = 0
    for c in coeffs:
        g = gcd(g, c)
        if g == 1:
            break
    if coeffs and coeffs[0] < 0:
        g = -g
    if g in (0, 1):
        return keys, list(coeffs)
    return keys, [c // g for c in coeffs]


def _exps_divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _exps_lcm(a, b):
    return tuple(map(max, a, b))


def _exps_coprime(a, b) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


class _PairQueue:
    """Normal-strategy pair queue with the coprime and chain criteria
    applied on every insertion (Gebauer-Moeller bookkeeping)."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.alive: dict = {}   # (i, j) -> lcm exponent tuple
        self.heap: list = []

    def add_element(self, meta, t: int):
        """meta: list of (lead exps, degree) for elements 0..t."""
        ring = self.ring
        lt = meta[t][0]
        cand = []
        for i in range(t):
            cand.append((i, _exps_lcm(meta[i][0], lt)))
        kept = []
        for i, L in cand:
            drop = False
            for j, L2 in cand:
                if i != j and L2 != L and _exps_divides(L2, L):
                    drop = True
                    break
            if not drop:
                kept.append((i, L))
        seen = {}
        for i, L in kept:
            if L not in seen:
                seen[L] = i
        kept = [(i, L) for i, L in kept if seen[L] == i]
        kept = [(i, L) for i, L in kept
                if not _exps_coprime(meta[i][0], lt)]
        for (i, j), L in list(self.alive.items()):
            if (_exps_divides(lt, L)
                    and _exps_lcm(meta[i][0], lt) != L
                    and _exps_lcm(meta[j][0], lt) != L):
                del self.alive[(i, j)]
        for i, L in kept:
            pair = (i, t)
            self.alive[pair] = L
            key = self.ring.pack(L)
            heapq.heappush(self.heap, (sum(L), key, i, t))

    def pop(self):
        while self.heap:
            deg, key, i, j = heapq.heappop(self.heap)
            L = self.alive.pop((i, j), None)
            if L is not None:
                return i, j, L
        return None


def _merge_scaled(ka, ca, sa, fa, kb, cb, sb, fb, p):
    """fa * x^sa * a  +  fb * x^sb * b over the coefficient domain.
    sa/sb are key offsets, fa/fb scalars.  Inputs descending, output too."""
    i = j = 0
    na, nb = len(ka), len(kb)
    keys, coeffs = [], []
    while i < na and j < nb:
        x = ka[i] + sa
        y = kb[j] + sb
        if x > y:
            c = fa * ca[i]
            if p:
                c %= p
            if c:
                keys.append(x)
                coeffs.append(c)
            i += 1
        elif x < y:
            c = fb * cb[j]
            if p:
                c %= p
            if c:
                keys.append(y)
                coeffs.append(c)
            j += 1
        else:
            c = fa * ca[i] + fb * cb[j]
            if p:
                c %= p
            if c:
                keys.append(x)
                coeffs.append(c)
            i += 1
            j += 1
    while i < na:
        c = fa * ca[i]
        if p:
            c %= p
        if c:
            keys.append(ka[i] + sa)
            coeffs.append(c)
        i += 1
    while j < nb:
        c = fb * cb[j]
        if p:
            c %= p
        if c:
            keys.append(kb[j] + sb)
            coeffs.append(c)
        j += 1
    return keys, coeffs


# -- untracked engine ----------------------------------------------------------


def _engine(ring: Ring, gens_raw, budget: Budget):
    """Raw Buchberger; gens_raw are (keys, coeffs) primitive/residue lists.
    Returns the raw reduced basis as a list of (keys, coeffs)."""
    p = ring.field.characteristic
    one_key = ring.one_key
    guards = ring.guards

    basis = []      # (keys, coeffs)
    meta = []       # (lead exps, lead degree)
    divisors = []
    queue = _PairQueue(ring)

    def normalize(keys, coeffs):
        if p:
            inv = pow(coeffs[0], -1, p)
            if inv != 1:
                coeffs = [c * inv % p for c in coeffs]
            return keys, coeffs
        return _primitive(keys, coeffs)

    def insert(keys, coeffs) -> bool:
        """Returns True when a constant entered the basis (unit ideal)."""
        keys, coeffs = normalize(keys, coeffs)
        if keys[0] == one_key:
            basis.clear()
            basis.append(([one_key], [1 if p else 1]))
            return True
        basis.append((keys, coeffs))
        t = len(basis) - 1
        meta.append((ring.unpack(keys[0]), ring.key_degree(keys[0])))
        divisors.append(_K.prepare_divisor(keys, coeffs, p))
        queue.add_element(meta, t)
        budget.basis_guard(len(basis))
        return False

    for keys, coeffs in gens_raw:
        budget.checkpoint()
        rk, rc, _ = _K.reduce_terms(list(keys), list(coeffs), divisors,
                                    guards, p)
        if rk:
            if insert(rk, rc):
                return basis

    while True:
        budget.checkpoint()
        item = queue.pop()
        if item is None:
            break
        i, j, L = item
        Lkey = ring.pack(L)
        ki, ci = basis[i]
        kj, cj = basis[j]
        si = Lkey - ki[0]
        sj = Lkey - kj[0]
        if p:
            fa, fb = 1, p - 1
        else:
            a, b = ci[0], cj[0]
            g = gcd(a, b)
            fa, fb = b // g, -(a // g)
        sk, sc = _merge_scaled(ki, ci, si, fa, kj, cj, sj, fb, p)
        if not sk:
            continue
        rk, rc, _ = _K.reduce_terms(sk, sc, divisors, guards, p)
        if rk:
            if insert(rk, rc):
                return basis

    # minimalize: drop elements whose lead is divisible by another lead
    order = sorted(range(len(basis)), key=lambda t: basis[t][0][0])
    lead_keys = [basis[t][0][0] for t in order]
    kept = []
    kept_leads = []
    for pos, t in enumerate(order):
        lk = lead_keys[pos]
        if any(ring.divides(other, lk) for other in kept_leads):
            continue
        kept.append(t)
        kept_leads.append(lk)
    reduced = [basis[t] for t in kept]

    # interreduce tails (leads are pairwise non-divisible, one pass is exact)
    for idx in range(len(reduced)):
        budget.checkpoint()
        others = [_K.prepare_divisor(k, c, p)
                  for pos, (k, c) in enumerate(reduced) if pos != idx]
        k, c = reduced[idx]
        rk, rc, _ = _K.reduce_terms(list(k), list(c), others, guards, p)
        reduced[idx] = normalize(rk, rc)
    return reduced


# -- tracked engine (field arithmetic, carries representations) ----------------


class _TrackedElement:
    __slots__ = ("keys", "coeffs", "row")

    def __init__(self, keys, coeffs, row):
        self.keys = keys
        self.coeffs = coeffs
        self.row = row  # list of dicts, one per original generator


def _row_axpy(row, src_row, shift, factor, p):
    """row += factor * x^shift * src_row, in place."""
    for slot, d in enumerate(src_row):
        if not d:
            continue
        target = row[slot]
        for k, c in d.items():
            nk = k + shift
            v = target.get(nk)
            nv = factor * c if v is None else v + factor * c
            if p:
                nv %= p
            if nv:
                target[nk] = nv
            elif v is not None:
                del target[nk]


def _tracked_reduce(ring, fk, fc, frow, elements, budget):
    """Full field reduction of f by tracked elements, updating f's row."""
    p = ring.field.characteristic
    fld = ring.field
    work = dict(zip(fk, fc))
    heap = [-k for k in fk]
    heapq.heapify(heap)
    row = frow
    rem_keys = []
    rem_coeffs = []
    while heap:
        budget.checkpoint()
        m = -heapq.heappop(heap)
        c = work.pop(m, 0)
        if not c:
            continue
        hit = None
        for el in elements:
            if ring.divides(el.keys[0], m):
                hit = el
                break
        if hit is None:
            rem_keys.append(m)
            rem_coeffs.append(c)
            continue
        t = c * fld.inv(hit.coeffs[0])
        if p:
            t %= p
        shift = m - hit.keys[0]
        for tk, tc in zip(hit.keys[1:], hit.coeffs[1:]):
            kk = tk + shift
            v = work.get(kk)
            nv = -t * tc if v is None else v - t * tc
            if p:
                nv %= p
            if v is None:
                heapq.heappush(heap, -kk)
            work[kk] = nv
        _row_axpy(row, hit.row, shift, fld.neg(t), p)
    return rem_keys, rem_coeffs, row


def _engine_tracked(ring: Ring, gens_raw, budget: Budget):
    """Field-coefficient Buchberger carrying representation rows.
    Same pair strategy as the fast engine; returns _TrackedElement list."""
    p = ring.field.characteristic
    fld = ring.field
    one_key = ring.one_key
    nslots = len(gens_raw)

    elements: list = []
    meta = []
    queue = _PairQueue(ring)

    def fresh_row():
        return [dict() for _ in range(nslots)]

    def insert(keys, coeffs, row) -> bool:
        inv = fld.inv(coeffs[0])
        if inv != 1 or p:
            coeffs = [c * inv % p if p else c * inv for c in coeffs]
            for d in row:
                for k in d:
                    d[k] = d[k] * inv % p if p else d[k] * inv
        if keys[0] == one_key:
            elements.clear()
            elements.append(_TrackedElement(keys, coeffs, row))
            return True
        elements.append(_TrackedElement(keys, coeffs, row))
        meta.append((ring.unpack(keys[0]), ring.key_degree(keys[0])))
        queue.add_element(meta, len(elements) - 1)
        budget.basis_guard(len(elements))
        return False

    for slot, (keys, coeffs) in enumerate(gens_raw):
        budget.checkpoint()
        row = fresh_row()
        row[slot][ring.one_key] = fld.one()
        rk, rc, row = _tracked_reduce(ring, list(keys), list(coeffs), row,
                                      elements, budget)
        if rk:
            if insert(rk, rc, row):
                return elements

    while True:
        budget.checkpoint()
        item = queue.pop()
        if item is None:
            break
        i, j, L = item
        Lkey = ring.pack(L)
        ei, ej = elements[i], elements[j]
        si = Lkey - ei.keys[0]
        sj = Lkey - ej.keys[0]
        fa, fb = fld.one(), fld.neg(fld.one())
        sk, sc = _merge_scaled(ei.keys, ei.coeffs, si, fa,
                               ej.keys, ej.coeffs, sj, fb, p)
        row = fresh_row()
        _row_axpy(row, ei.row, si, fa, p)
        _row_axpy(row, ej.row, sj, fb, p)
        if sk:
            rk, rc, row = _tracked_reduce(ring, sk, sc, row, elements, budget)
            if rk:
                if insert(rk, rc, row):
                    return elements

    order = sorted(range(len(elements)), key=lambda t: elements[t].keys[0])
    kept = []
    for t in order:
        lk = elements[t].keys[0]
        if any(ring.divides(e.keys[0], lk) for e in kept):
            continue
        kept.append(elements[t])
    for idx in range(len(kept)):
        budget.checkpoint()
        el = kept[idx]
        others = kept[:idx] + kept[idx + 1:]
        rk, rc, row = _tracked_reduce(ring, list(el.keys), list(el.coeffs),
                                      el.row, others, budget)
        inv = fld.inv(rc[0])
        if inv != 1 or p:
            rc = [c * inv % p if p else c * inv for c in rc]
            for d in row:
                for k in d:
                    d[k] = d[k] * inv % p if p else d[k] * inv
        kept[idx] = _TrackedElement(rk, rc, row)
    return kept


# -- public API -----------------------------------------------------------------


def buchberger(ideal: Ideal, track: bool = False,
               budget: Optional[Budget] = None,
               use_cache: bool = True) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal (degrevlex).  With track=True the
    result carries transform rows expressing each element in the input
    generators."""
    budget = ensure_budget(budget)
    key = (ideal, track)
    if use_cache:
        got = _cache.get(key)
        if got is not None:
            budget.record_query()
            return got
    budget.record_query()
    budget.checkpoint()
    budget.record_run_start()
    ring = ideal.ring
    p = ring.field.characteristic

    if not track:
        gens_raw = []
        for g in ideal.generators:
            zk, zc, _ = g.zform()
            gens_raw.append((zk, zc))
        raw = _engine(ring, gens_raw, budget)
        elements = []
        for keys, coeffs in sorted(raw, key=lambda kc: kc[0][0]):
            if p:
                elements.append(Polynomial(ring, keys, coeffs))
            else:
                lc = coeffs[0]
                elements.append(Polynomial(
                    ring, keys, [_mpq_div(c, lc) for c in coeffs]))
        gb = GroebnerBasis(ideal, elements)
    else:
        gens_raw = []
        for g in ideal.generators:
            gens_raw.append((list(g.keys), list(g.coeffs)))
        tracked = _engine_tracked(ring, gens_raw, budget)
        tracked.sort(key=lambda el: el.keys[0])
        elements = [Polynomial(ring, el.keys, el.coeffs) for el in tracked]
        rows = []
        for el in tracked:
            rows.append(tuple(Polynomial.from_key_dict(ring, d)
                              for d in el.row))
        gb = GroebnerBasis(ideal, elements, transform=tuple(rows))
    if use_cache:
        _cache.put(key, gb)
    return gb


def _mpq_div(c, lc):
    from .fields import mpq
    return mpq(c) / mpq(lc)


def _as_gb(target, budget, use_cache=True) -> GroebnerBasis:
    if isinstance(target, GroebnerBasis):
        return target
    return buchberger(target, budget=budget, use_cache=use_cache)


def normal_form(f: Polynomial, target, budget: Optional[Budget] = None
                ) -> Polynomial:
    """Canonical remainder of f modulo the ideal (idempotent)."""
    gb = _as_gb(target, ensure_budget(budget))
    return gb.normal_form(f)


def ideal_membership(f: Polynomial, target,
                     budget: Optional[Budget] = None) -> bool:
    gb = _as_gb(target, ensure_budget(budget))
    return gb.contains(f)


def radical_membership(f: Polynomial, target,
                       budget: Optional[Budget] = None,
                       use_cache: bool = True) -> bool:
    """Whether f vanishes on the zero set of the ideal (over the closure)."""
    budget = ensure_budget(budget)
    if f.is_zero():
        return True
    ideal = target.ideal if isinstance(target, GroebnerBasis) else target
    if f.is_constant():
        gb = _as_gb(target, budget, use_cache=use_cache)
        return gb.is_unit()
    ring = ideal.ring
    ext = ring.extend(ring.fresh_name("t"))
    lift = [g.map_exponents(ext, lambda e: e + (0,))
            for g in ideal.generators]
    f_ext = f.map_exponents(ext, lambda e: e + (0,))
    t = Polynomial.variable(ext, ext.nvars - 1)
    rab = Polynomial.constant(ext, 1) - t * f_ext
    gb = buchberger(Ideal(ext, lift + [rab]), budget=budget,
                    use_cache=use_cache)
    return gb.is_unit()


def equal_on_chart(i_w: Ideal, i_x: Ideal, g: Polynomial,
                   budget: Optional[Budget] = None) -> bool:
    """True when g * f lies in I_W for every generator f of I_X, i.e. the
    two ideals cut the same set on the chart where g is invertible."""
    budget = ensure_budget(budget)
    gb = _as_gb(i_w, budget)
    return all(gb.contains(g * f) for f in i_x.generators)


def division_with_quotients(f: Polynomial, gb: GroebnerBasis):
    """(quotients, remainder) with f == sum q_i e_i + remainder; field
    arithmetic, deterministic divisor scan in basis order."""
    ring = gb.ideal.ring
    fld = ring.field
    p = fld.characteristic
    work = dict(zip(f.keys, f.coeffs))
    heap = [-k for k in f.keys]
    heapq.heapify(heap)
    quots = [dict() for _ in gb.elements]
    rem = {}
    lead_keys = gb._lead_keys
    while heap:
        m = -heapq.heappop(heap)
        c = work.pop(m, 0)
        if not c:
            continue
        hit = None
        for idx, lk in enumerate(lead_keys):
            if ring.divides(lk, m):
                hit = idx
                break
        if hit is None:
            rem[m] = c
            continue
        el = gb.elements[hit]
        t = c * fld.inv(el.leading_coefficient())
        if p:
            t %= p
        qk = m - el.leading_key() + ring.mul_off
        quots[hit][qk] = quots[hit].get(qk, fld.zero()) + t
        shift = m - el.leading_key()
        for tk, tc in zip(el.keys[1:], el.coeffs[1:]):
            kk = tk + shift
            v = work.get(kk)
            nv = -t * tc if v is None else v - t * tc
            if p:
                nv %= p
            if v is None:
                heapq.heappush(heap, -kk)
            work[kk] = nv
    return ([Polynomial.from_key_dict(ring, q) for q in quots],
            Polynomial.from_key_dict(ring, rem))


def lift_power(g: Polynomial, ideal: Ideal, cap: Optional[int] = None,
               budget: Optional[Budget] = None):
    """Smallest m <= cap with g^m in the ideal, together with exact
    coefficients over the original generators; None when no power fits.
    The default cap is 2 * deg(g) + 8."""
    budget = ensure_budget(budget)
    if cap is None:
        cap = 2 * max(1, g.total_degree()) + 8
    gb = buchberger(ideal, track=True, budget=budget)
    h = Polynomial.constant(g.ring, 1)
    for m in range(1, cap + 1):
        budget.checkpoint()
        h = h * g
        quots, rem = division_with_quotients(h, gb)
        if rem.is_zero():
            ngens = len(ideal.generators)
            coeffs = []
            for j in range(ngens):
                acc = Polynomial.zero(g.ring)
                for i, q in enumerate(quots):
                    if not q.is_zero():
                        tj = gb.transform[i][j]
                        if not tj.is_zero():
                            acc = acc + q * tj
                coeffs.append(acc)
            return m, tuple(coeffs)
    return None


def krull_dimension(ideal: Ideal, budget: Optional[Budget] = None) -> int:
    """Dimension via maximal independent variable sets modulo the leading
    term ideal; the unit ideal reports -1, the zero ideal reports n."""
    budget = ensure_budget(budget)
    got = _dim_cache.get(ideal)
    if got is not None:
        # count the underlying basis query so reports do not depend on
        # process cache warmth
        budget.record_query()
        return got
    gb = _as_gb(ideal, budget)
    ring = ideal.ring
    n = ring.nvars
    if gb.is_zero_ideal():
        dim = n
    elif gb.is_unit():
        dim = -1
    else:
        supports = set()
        for lk in gb._lead_keys:
            exps = ring.unpack(lk)
            supports.add(frozenset(i for i, e in enumerate(exps) if e))
        supports = sorted(supports, key=len)
        dim = 0
        for k in range(n, 0, -1):
            found = False
            for S in combinations(range(n), k):
                Sset = frozenset(S)
                if not any(sup <= Sset for sup in supports):
                    found = True
                    break
            if found:
                dim = k
                break
    _dim_cache.put(ideal, dim)
    return dim
