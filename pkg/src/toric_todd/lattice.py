"""Exact integer-lattice linear algebra.

Vectors are plain tuples of Python ints; matrices are sequences of row
tuples. Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

Vector = tuple[int, ...]
Matrix = Sequence[Sequence[int]]


class LatticeError(ValueError):
    pass


def vec(v) -> Vector:
    return tuple(int(x) for x in v)


def dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def add(u, v) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v) -> Vector:
    return tuple(c * a for a in v)


def neg(v) -> Vector:
    return tuple(-a for a in v)


def content(v) -> int:
    return reduce(gcd, v, 0)


def is_primitive(v) -> bool:
    return content(v) == 1


def primitive_vector(v) -> Vector:
    """Divide ``v`` by the gcd of its coordinates (sign preserved)."""
    g = content(v)
    if g == 0:
        raise LatticeError("no primitive representative of the zero vector")
    return tuple(int(x) // g for x in v)


def lex_positive(v) -> bool:
    for x in v:
        if x:
            return x > 0
    return False


def max_norm(v) -> int:
    return max((abs(x) for x in v), default=0)


def _fraction_rows(rows: Matrix) -> list[list[Fraction]]:
    return [[Fraction(x) for x in r] for r in rows]


def row_echelon(rows: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (nonzero rows, pivot columns)."""
    m = _fraction_rows(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Matrix) -> int:
    if not rows:
        return 0
    return len(row_echelon(rows)[1])


def det(rows: Matrix) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve_left(basis: Matrix, v) -> tuple[Fraction, ...] | None:
    """Coefficients ``c`` with ``sum(c_i * basis_i) == v``, or None.

    ``basis`` must have linearly independent rows.
    """
    k = len(basis)
    if k == 0:
        return () if not any(v) else None
    d = len(v)
    # transpose system: columns are basis vectors, augmented by v
    aug = [[Fraction(basis[i][j]) for i in range(k)] + [Fraction(v[j])] for j in range(d)]
    red, pivots = row_echelon(aug)
    if k in pivots:
        return None
    if len(pivots) < k:
        raise LatticeError("basis rows are linearly dependent")
    coeffs = [Fraction(0)] * k
    for row, p in zip(red, pivots):
        coeffs[p] = row[k]
    return tuple(coeffs)


def hermite_basis(rows: Matrix) -> list[Vector]:
    """Row-style Hermite normal form basis of the lattice spanned by ``rows``.

    Pivots are positive and entries above a pivot lie in ``[0, pivot)``.
    Zero rows are dropped, so the result is a basis.
    """
    m = [list(r) for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[p] = m[p], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c]:
                    q = m[i][c] // m[r][c]
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if all(m[i][c] == 0 for i in range(r, len(m))):
            continue
        if m[r][c] < 0:
            m[r] = [-a for a in m[r]]
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[r])]
        r += 1
    return [tuple(row) for row in m[:r] if any(row)]


def smith_decomposition(rows: Matrix):
    """Return ``(diag, S, T)`` with ``S * A * T`` diagonal (``diag`` its entries).

    ``S`` and ``T`` are unimodular, returned as lists of row lists.
    """
    a = DomainMatrix([[ZZ(int(x)) for x in r] for r in rows], (len(rows), len(rows[0])), ZZ)
    dmat, s, t = smith_normal_decomp(a)
    dl, sl, tl = dmat.to_list(), s.to_list(), t.to_list()
    n = min(len(dl), len(dl[0]))
    diag = [int(dl[i][i]) for i in range(n)]
    return diag, [[int(x) for x in r] for r in sl], [[int(x) for x in r] for r in tl]


def integer_kernel(rows: Matrix, ncols: int) -> list[Vector]:
    """Basis (Hermite form) of ``{x in Z^ncols : A x = 0}``; always saturated."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    diag, _, t = smith_decomposition(rows)
    r = sum(1 for x in diag if x != 0)
    cols = [tuple(t[i][j] for i in range(ncols)) for j in range(r, ncols)]
    return hermite_basis(cols)


def saturated_span_basis(vectors: Matrix, ncols: int) -> list[Vector]:
    """Hermite basis of ``span_Q(vectors) ∩ Z^ncols``."""
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return []
    perp = integer_kernel(vectors, ncols)
    return integer_kernel(perp, ncols)


def orthogonal_complement(vectors: Matrix, ncols: int) -> list[Vector]:
    """Hermite basis of the integer vectors pairing to zero with all ``vectors``."""
    return integer_kernel(vectors, ncols)


def unit_combination(z) -> Vector:
    """Integer ``y`` with ``y . z == 1`` for a primitive vector ``z``."""
    coeffs = [0] * len(z)
    g = 0
    for i, zi in enumerate(z):
        if zi == 0:
            continue
        if g == 0:
            g = zi
            coeffs = [0] * len(z)
            coeffs[i] = 1
            continue
        # extended Euclid on (g, zi)
        old_r, r = g, zi
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        coeffs = [old_s * c for c in coeffs]
        coeffs[i] = old_t
        g = old_r
    if abs(g) != 1:
        raise LatticeError(f"vector {tuple(z)} is not primitive")
    return tuple(c * g for c in coeffs)


def lattice_index(rows: Matrix) -> int:
    """Index of the lattice spanned by independent integer ``rows`` in its saturation.

    Equals the gcd of the maximal minors.
    """
    k = len(rows)
    if k == 0:
        return 1
    diag, _, _ = smith_decomposition(rows)
    if any(x == 0 for x in diag[:k]) or len(diag) < k:
        raise LatticeError("rows are linearly dependent")
    out = 1
    for x in diag[:k]:
        out *= abs(x)
    return out
