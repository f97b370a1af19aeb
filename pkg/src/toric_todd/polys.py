"""Sparse multivariate polynomials with exact rational coefficients.

:class:`LaurentPoly` is an element of the group ring Q[M] (``exp`` keys are
lattice vectors ``m`` standing for ``e^m``); :class:`Polynomial` is an
element of the symmetric algebra S(M) = Q[x_1..x_d] (keys are ordinary
exponent tuples). They share storage and ring arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .lattice import Vector


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class SparsePoly:
    __slots__ = ("rank", "terms", "_hash")

    def __init__(self, rank: int, terms: Mapping[Vector, Fraction] | None = None):
        self.rank = rank
        clean = {}
        if terms:
            for e, c in terms.items():
                c = _frac(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, rank: int, terms: dict):
        obj = cls.__new__(cls)
        obj.rank = rank
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, rank: int):
        return cls._raw(rank, {})

    @classmethod
    def constant(cls, rank: int, c=1):
        c = _frac(c)
        return cls._raw(rank, {(0,) * rank: c} if c else {})

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1):
        coeff = _frac(coeff)
        return cls._raw(len(exp), {tuple(exp): coeff} if coeff else {})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        return sorted(self.terms.items())

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def _coerce(self, other):
        if isinstance(other, SparsePoly):
            return other
        return type(self).constant(self.rank, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return type(self)._raw(self.rank, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.rank, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = _frac(c)
        if not c:
            return type(self).zero(self.rank)
        return type(self)._raw(self.rank, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            return self.scale(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return type(self)._raw(self.rank, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        out = type(self).constant(self.rank, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return f"{type(self).__name__}(0)"
        return f"{type(self).__name__}({dict(self.items())})"


class LaurentPoly(SparsePoly):
    """Finite sum of characters ``a_m e^m``."""

    __slots__ = ()

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]], rank: int):
        out: dict = {}
        for p in points:
            p = tuple(p)
            out[p] = out.get(p, 0) + 1
        return cls(rank, out)

    def shift(self, m: Sequence[int]) -> "LaurentPoly":
        m = tuple(m)
        return LaurentPoly._raw(self.rank, {tuple(a + b for a, b in zip(e, m)): c
                                            for e, c in self.terms.items()})

    def times_one_minus(self, w: Sequence[int]) -> "LaurentPoly":
        """Multiply by ``1 - e^w``."""
        return self - self.shift(w)

    def divide_one_minus(self, w: Sequence[int]) -> "LaurentPoly | None":
        """Exact quotient by ``1 - e^w`` (w lexicographically positive), or None."""
        w = tuple(w)
        j = next(i for i, x in enumerate(w) if x)
        chains: dict[Vector, dict[int, Fraction]] = {}
        for e, c in self.terms.items():
            k = e[j] // w[j]
            rep = tuple(a - k * b for a, b in zip(e, w))
            chains.setdefault(rep, {})[k] = c
        out: dict = {}
        for rep, chain in chains.items():
            if sum(chain.values()) != 0:
                return None
            running = Fraction(0)
            lo, hi = min(chain), max(chain)
            for k in range(lo, hi):
                running += chain.get(k, 0)
                if running:
                    out[tuple(a + k * b for a, b in zip(rep, w))] = running
        return LaurentPoly._raw(self.rank, out)


class Polynomial(SparsePoly):
    """Polynomial in the coordinates ``x_i`` of N (an element of S(M))."""

    __slots__ = ()

    @classmethod
    def variable(cls, i: int, rank: int):
        return cls.monomial(tuple(int(j == i) for j in range(rank)))

    @classmethod
    def linear_form(cls, m: Sequence) -> "Polynomial":
        """The linear function ``n -> <m, n>`` (``m`` may be rational)."""
        d = len(m)
        return cls(d, {tuple(int(j == i) for j in range(d)): m[i] for i in range(d)})

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_part(self, k: int) -> "Polynomial":
        return Polynomial._raw(self.rank, {e: c for e, c in self.terms.items() if sum(e) == k})

    def truncate(self, k: int) -> "Polynomial":
        return Polynomial._raw(self.rank, {e: c for e, c in self.terms.items() if sum(e) <= k})

    def mul_truncated(self, other: "Polynomial", k: int) -> "Polynomial":
        out: dict = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            if d1 > k:
                continue
            for e2, c2 in other.terms.items():
                if d1 + sum(e2) > k:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Polynomial._raw(self.rank, out)

    def negate_argument(self) -> "Polynomial":
        """``p(x) -> p(-x)``."""
        return Polynomial._raw(self.rank, {e: (-c if sum(e) % 2 else c) for e, c in self.terms.items()})

    def substitute(self, images: Sequence["Polynomial"], rank: int | None = None) -> "Polynomial":
        """Replace ``x_i`` by ``images[i]`` (polynomials in ``rank`` variables)."""
        rank = images[0].rank if images else (rank or 0)
        out = Polynomial.zero(rank)
        powers: dict[tuple[int, int], Polynomial] = {}
        for e, c in self.terms.items():
            term = Polynomial.constant(rank, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = images[i] ** k
                    term = term * powers[key]
            out = out + term
        return out

    def restrict(self, basis: Sequence[Sequence[int]]) -> "Polynomial":
        """Pull back along ``s -> sum(s_j basis_j)``: a polynomial in ``len(basis)`` variables."""
        k = len(basis)
        images = [Polynomial(k, {tuple(int(a == j) for a in range(k)): basis[j][i] for j in range(k)})
                  for i in range(self.rank)]
        if k == 0:
            const = self.coefficient((0,) * self.rank)
            return Polynomial.constant(0, const)
        return self.substitute(images, k)

    def divide_linear(self, form: "Polynomial") -> "Polynomial | None":
        """Exact quotient by a nonzero linear form, or None when it does not divide."""
        j = max(e.index(1) for e in form.terms)
        lead = form.coefficient(tuple(int(i == j) for i in range(self.rank)))
        rest = form - Polynomial.monomial(tuple(int(i == j) for i in range(self.rank)), lead)
        remainder = dict(self.terms)
        quotient: dict = {}

        def order(e):
            return (e[j],) + e

        while remainder:
            e = max(remainder, key=order)
            if e[j] == 0:
                return None
            c = remainder[e] / lead
            qe = tuple(a - (i == j) for i, a in enumerate(e))
            quotient[qe] = quotient.get(qe, 0) + c
            # subtract c * x^qe * form
            del remainder[e]
            for fe, fc in rest.terms.items():
                ne = tuple(a + b for a, b in zip(qe, fe))
                v = remainder.get(ne, 0) - c * fc
                if v:
                    remainder[ne] = v
                else:
                    remainder.pop(ne, None)
        return Polynomial(self.rank, quotient)
