"""Matrices of polynomials: determinants, adjugates, minors.

Determinants use fraction-free Bareiss elimination (the two-step division
is exact, keeping intermediate entries small) with direct cofactor
expansion below 4x4.  Minors are enumerated in lexicographic subset order
and computed by memoized Laplace expansion so overlapping submatrices are
shared; an optional reducer callback normalizes every intermediate result,
which keeps minors-modulo-an-ideal computations bounded.
"""

from __future__ import annotations

from itertools import combinations

from .errors import RingMismatchError
from .poly import Polynomial
from .ring import Ring


class PolyMatrix:
    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: Ring, rows: int, cols: int, entries):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"need {rows * cols} entries, got {len(entries)}")
        for e in entries:
            if e.ring != ring:
                raise RingMismatchError("matrix entries in different rings")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, ring: Ring, row_lists) -> "PolyMatrix":
        rows = len(row_lists)
        cols = len(row_lists[0]) if rows else 0
        flat = []
        for r in row_lists:
            if len(r) != cols:
                raise ValueError("ragged rows")
            flat.extend(r)
        return cls(ring, rows, cols, flat)

    def get(self, i: int, j: int) -> Polynomial:
        return self.entries[i * self.cols + j]

    def row(self, i: int):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def submatrix(self, row_idx, col_idx) -> "PolyMatrix":
        ents = [self.get(i, j) for i in row_idx for j in col_idx]
        return PolyMatrix(self.ring, len(row_idx), len(col_idx), ents)

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.ring == other.ring
                and self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def __repr__(self):
        return f"<{self.rows}x{self.cols} matrix over {self.ring!r}>"


def jacobian(ring: Ring, polys) -> PolyMatrix:
    """Rows are gradients: J[i][j] = d f_i / d x_j."""
    rows = [[f.derivative(j) for j in range(ring.nvars)] for f in polys]
    flat = [e for r in rows for e in r]
    return PolyMatrix(ring, len(rows), ring.nvars, flat)


def poly_exact_div(a: Polynomial, b: Polynomial) -> Polynomial:
    """Exact quotient a / b; raises if the division leaves a remainder.
    Repeated leading-term cancellation terminates exactly when b | a."""
    if a.is_zero():
        return a
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ring = a.ring
    p = ring.field.characteristic
    lead_b = b.leading_key()
    lc_b = b.leading_coefficient()
    inv_b = ring.field.inv(lc_b)
    work = dict(zip(a.keys, a.coeffs))
    quot = {}
    while work:
        m = max(work)
        c = work.pop(m)
        if not c:
            continue
        if not ring.divides(lead_b, m):
            raise ArithmeticError("inexact polynomial division")
        qk = m - lead_b + ring.mul_off
        qc = c * inv_b % p if p else c * inv_b
        quot[qk] = qc
        base = qk - ring.mul_off
        for tk, tc in zip(b.keys[1:], b.coeffs[1:]):
            kk = tk + base
            v = work.get(kk, 0) - qc * tc
            work[kk] = v % p if p else v
    return Polynomial.from_key_dict(ring, quot)


def determinant(m: PolyMatrix) -> Polynomial:
    """Determinant via Bareiss elimination (cofactor below 4x4)."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    ring = m.ring
    if n == 0:
        return Polynomial.constant(ring, 1)
    e = m.entries
    if n == 1:
        return e[0]
    if n == 2:
        return e[0] * e[3] - e[1] * e[2]
    if n == 3:
        return (e[0] * (e[4] * e[8] - e[5] * e[7])
                - e[1] * (e[3] * e[8] - e[5] * e[6])
                + e[2] * (e[3] * e[7] - e[4] * e[6]))
    a = [list(m.row(i)) for i in range(n)]
    sign = 1
    prev = Polynomial.constant(ring, 1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            piv = next((r for r in range(k + 1, n) if not a[r][k].is_zero()),
                       None)
            if piv is None:
                return Polynomial.zero(ring)
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = a[i][j] * pivot - aik * a[k][j]
                a[i][j] = poly_exact_div(num, prev)
            a[i][k] = Polynomial.zero(ring)
        prev = pivot
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def adjugate(m: PolyMatrix):
    """(A, q) with q = det(m) and A the cofactor matrix
    A[l][k] = (-1)^(l+k) * det(m with row l and column k removed),
    normalized so that sum_k A[l][k] * m.get(mm, k) equals q if mm == l
    and 0 otherwise.  For the 0x0 matrix returns (empty, 1)."""
    if m.rows != m.cols:
        raise ValueError("adjugate of a non-square matrix")
    n = m.rows
    ring = m.ring
    q = determinant(m)
    if n == 0:
        return PolyMatrix(ring, 0, 0, ()), q
    ents = []
    idx = tuple(range(n))
    for l in range(n):
        rows = idx[:l] + idx[l + 1:]
        for k in range(n):
            cols = idx[:k] + idx[k + 1:]
            d = determinant(m.submatrix(rows, cols))
            ents.append(-d if (l + k) & 1 else d)
    return PolyMatrix(ring, n, n, ents), q


def minors(m: PolyMatrix, size: int, reducer=None, checkpoint=None):
    """All size x size minors, row subsets outer / column subsets inner,
    both lexicographic; zero minors are dropped.  When a reducer is given
    every intermediate product and sum is passed through it before use.
    `checkpoint` is called once per subset pair so long enumerations can
    be interrupted by resource limits."""
    if size < 0:
        raise ValueError("minor size must be non-negative")
    ring = m.ring
    if size == 0:
        return [Polynomial.constant(ring, 1)]
    if size > m.rows or size > m.cols:
        return []
    red = reducer if reducer is not None else (lambda f: f)
    memo = {}

    def det_of(rows, cols):
        got = memo.get((rows, cols))
        if got is not None:
            return got
        if len(rows) == 1:
            d = red(m.get(rows[0], cols[0]))
        else:
            acc = Polynomial.zero(ring)
            r0 = rows[0]
            rest = rows[1:]
            for idx, c in enumerate(cols):
                entry = m.get(r0, c)
                if entry.is_zero():
                    continue
                sub = det_of(rest, cols[:idx] + cols[idx + 1:])
                if sub.is_zero():
                    continue
                prod = red(entry * sub)
                acc = acc - prod if idx & 1 else acc + prod
            d = red(acc)
        memo[(rows, cols)] = d
        return d

    out = []
    for rs in combinations(range(m.rows), size):
        for cs in combinations(range(m.cols), size):
            if checkpoint is not None:
                checkpoint()
            d = det_of(rs, cs)
            if not d.is_zero():
                out.append(d)
    return out
