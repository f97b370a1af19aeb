"""Summable series: rational generating functions over the character lattice.

A :class:`RationalGenFun` is ``P / prod(1 - e^w)`` with ``P`` a Laurent
polynomial. Equality is tested by cross-multiplication, never by
evaluation.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Sequence

from .cones import DEFAULT_POINT_CAP, Cone, half_open_triangulation, parallelepiped_points
from .lattice import Vector, dot, lex_positive, neg
from .polys import LaurentPoly


class GenFunError(ValueError):
    pass


def _product_one_minus(p: LaurentPoly, ws: Iterable[Vector]) -> LaurentPoly:
    for w in ws:
        p = p.times_one_minus(w)
    return p


@dataclass(frozen=True, eq=False)
class RationalGenFun:
    """``numerator / prod(1 - e^w for w in denominator)`` in canonical form.

    Canonical form: every denominator vector is lexicographically
    positive, the list is sorted, and the zero function has an empty
    denominator. Use :func:`gf_equals` (or ``==``) to compare values.
    """

    numerator: LaurentPoly
    denominator: tuple[Vector, ...] = ()

    @classmethod
    def make(cls, numerator: LaurentPoly, denominator: Iterable[Sequence[int]] = ()) -> "RationalGenFun":
        num = numerator
        den = []
        for w in denominator:
            w = tuple(w)
            if not any(w):
                raise GenFunError("zero vector in denominator")
            if lex_positive(w):
                den.append(w)
            else:
                wp = neg(w)
                num = -num.shift(wp)
                den.append(wp)
        if num.is_zero():
            return cls(LaurentPoly.zero(numerator.rank), ())
        return cls(num, tuple(sorted(den)))

    @classmethod
    def zero(cls, rank: int) -> "RationalGenFun":
        return cls(LaurentPoly.zero(rank), ())

    @classmethod
    def one(cls, rank: int) -> "RationalGenFun":
        return cls(LaurentPoly.constant(rank, 1), ())

    @classmethod
    def monomial(cls, m: Sequence[int], coeff=1) -> "RationalGenFun":
        return cls.make(LaurentPoly.monomial(tuple(m), coeff))

    @classmethod
    def geometric(cls, w: Sequence[int]) -> "RationalGenFun":
        """``1 / (1 - e^w)``."""
        return cls.make(LaurentPoly.constant(len(w), 1), [tuple(w)])

    @property
    def rank(self) -> int:
        return self.numerator.rank

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def canonical(self) -> "RationalGenFun":
        return RationalGenFun.make(self.numerator, self.denominator)

    def __add__(self, other: "RationalGenFun") -> "RationalGenFun":
        if not isinstance(other, RationalGenFun):
            other = RationalGenFun(LaurentPoly.constant(self.rank, other), ())
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        ca, cb = Counter(self.denominator), Counter(other.denominator)
        common = ca | cb
        na = _product_one_minus(self.numerator, (common - ca).elements())
        nb = _product_one_minus(other.numerator, (common - cb).elements())
        return RationalGenFun.make(na + nb, sorted(common.elements()))

    __radd__ = __add__

    def __neg__(self) -> "RationalGenFun":
        return RationalGenFun(-self.numerator, self.denominator)

    def __sub__(self, other) -> "RationalGenFun":
        if not isinstance(other, RationalGenFun):
            other = RationalGenFun(LaurentPoly.constant(self.rank, other), ())
        return self + (-other)

    def __rsub__(self, other) -> "RationalGenFun":
        return (-self) + other

    def __mul__(self, other) -> "RationalGenFun":
        if not isinstance(other, RationalGenFun):
            return RationalGenFun.make(self.numerator.scale(other), self.denominator)
        return RationalGenFun.make(self.numerator * other.numerator,
                                   self.denominator + other.denominator)

    __rmul__ = __mul__

    def scale_by_monomial(self, m: Sequence[int]) -> "RationalGenFun":
        return RationalGenFun(self.numerator.shift(m), self.denominator)

    def negate_argument(self) -> "RationalGenFun":
        """Substitute ``e^m -> e^{-m}``."""
        num = LaurentPoly(self.rank, {neg(e): c for e, c in self.numerator.terms.items()})
        return RationalGenFun.make(num, [neg(w) for w in self.denominator])

    def cancel(self) -> "RationalGenFun":
        """Divide out denominator factors that divide the numerator."""
        num = self.numerator
        kept = []
        for w in self.denominator:
            q = num.divide_one_minus(w)
            if q is None:
                kept.append(w)
            else:
                num = q
        return RationalGenFun.make(num, kept)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalGenFun(LaurentPoly.constant(self.rank, other), ())
        if not isinstance(other, RationalGenFun):
            return NotImplemented
        return gf_equals(self, other)

    __hash__ = None

    def __repr__(self):
        num = " + ".join(f"{c}*e^{list(e)}" for e, c in self.numerator.items()) or "0"
        if not self.denominator:
            return f"RationalGenFun({num})"
        den = "".join(f"(1-e^{list(w)})" for w in self.denominator)
        return f"RationalGenFun(({num}) / {den})"

    def to_json(self) -> dict:
        return {
            "numerator": [{"exp": list(e), "coeff": format_rational(c)} for e, c in self.numerator.items()],
            "denominator": [list(w) for w in self.denominator],
        }

    @classmethod
    def from_json(cls, data: dict, rank: int) -> "RationalGenFun":
        num = LaurentPoly(rank, {tuple(t["exp"]): parse_rational(t["coeff"]) for t in data["numerator"]})
        return cls.make(num, [tuple(w) for w in data["denominator"]])


def format_rational(c: Fraction):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_rational(value) -> Fraction:
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise GenFunError(f"not an exact rational: {value!r}")


def gf_equals(f: RationalGenFun, g: RationalGenFun) -> bool:
    """Exact equality of rational generating functions by cross-multiplication."""
    cf, cg = Counter(f.denominator), Counter(g.denominator)
    shared = cf & cg
    lhs = _product_one_minus(f.numerator, (cg - shared).elements())
    rhs = _product_one_minus(g.numerator, (cf - shared).elements())
    return lhs == rhs


def gf_combine(op: str, f: RationalGenFun, g) -> RationalGenFun:
    """``op`` is ``"add"``, ``"mul"`` or ``"scale_by_monomial"`` (``g`` an M-vector)."""
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scale_by_monomial":
        return f.scale_by_monomial(tuple(g))
    raise GenFunError(f"unknown operation {op!r}")


def cone_generating_function(c: Cone, cap: int = DEFAULT_POINT_CAP) -> RationalGenFun:
    """Sum of ``e^m`` over the lattice points of ``c``, as a rational function.

    A cone that contains a line sums to zero.
    """
    d = c.ambient_rank
    if not c.is_pointed:
        return RationalGenFun.zero(d)
    total = RationalGenFun.zero(d)
    for piece in half_open_triangulation(c):
        num = LaurentPoly.from_points(parallelepiped_points(piece, cap), d)
        total = total + RationalGenFun.make(num, piece.rays)
    return total


# -- univariate specialization ---------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """``sum(coeffs[i] * t^(valuation + i)) + O(t^(order + 1))``."""

    coeffs: tuple[Fraction, ...]
    valuation: int
    order: int

    @classmethod
    def from_list(cls, coeffs: Sequence, valuation: int = 0, order: int | None = None):
        if order is None:
            order = valuation + len(coeffs) - 1
        cs = [Fraction(c) for c in coeffs][: max(0, order - valuation + 1)]
        cs += [Fraction(0)] * (order - valuation + 1 - len(cs))
        return cls(tuple(cs), valuation, order)

    def coefficient(self, n: int) -> Fraction:
        if n > self.order:
            raise GenFunError(f"t^{n} is beyond the truncation order {self.order}")
        if n < self.valuation:
            return Fraction(0)
        return self.coeffs[n - self.valuation]

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient(0)

    def pole_part(self) -> tuple[Fraction, ...]:
        return tuple(self.coefficient(n) for n in range(self.valuation, 0))

    def shift(self, n: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, self.valuation + n, self.order + n)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        lo = min(self.valuation, other.valuation)
        hi = min(self.order, other.order)
        cs = [self.coefficient(n) + other.coefficient(n) for n in range(lo, hi + 1)]
        return TruncatedSeries(tuple(cs), lo, hi)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        val = self.valuation + other.valuation
        order = min(self.order + other.valuation, other.order + self.valuation)
        cs = [Fraction(0)] * (order - val + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= len(cs):
                    break
                cs[i + j] += a * b
        return TruncatedSeries(tuple(cs), val, order)

    def inverse(self) -> "TruncatedSeries":
        if not self.coeffs or self.coeffs[0] == 0:
            raise GenFunError("series with vanishing leading coefficient is not invertible")
        n = self.order - self.valuation
        a = self.coeffs
        inv = [Fraction(0)] * (n + 1)
        inv[0] = 1 / a[0]
        for k in range(1, n + 1):
            s = sum(a[i] * inv[k - i] for i in range(1, k + 1))
            inv[k] = -s / a[0]
        return TruncatedSeries(tuple(inv), -self.valuation, n - self.valuation)


def exp_series(a, order: int) -> TruncatedSeries:
    """``exp(a t)`` to ``t^order``."""
    a = Fraction(a)
    return TruncatedSeries(tuple(a**j / factorial(j) for j in range(order + 1)), 0, order)


def iter_generic_directions(vectors: Iterable[Sequence[int]], rank: int) -> Iterator[Vector]:
    """Integer directions pairing nonzero with every vector, by max-norm then lexicographically."""
    vectors = [tuple(v) for v in vectors]
    n = 1
    while True:
        for xi in itertools.product(range(-n, n + 1), repeat=rank):
            if max(abs(x) for x in xi) != n:
                continue
            if all(dot(xi, w) != 0 for w in vectors):
                yield xi
        n += 1


def generic_direction(vectors: Iterable[Sequence[int]], rank: int) -> Vector:
    return next(iter_generic_directions(vectors, rank))


def specialize(f: RationalGenFun, xi: Sequence[int], order: int) -> TruncatedSeries:
    """Laurent expansion in ``t`` of ``f`` under ``e^m -> exp(<m, xi> t)``.

    The result starts at ``t^-D`` (``D`` denominator factors) and is exact
    through ``t^order``.
    """
    xi = tuple(xi)
    pole = len(f.denominator)
    prec = order + pole
    slopes = []
    for w in f.denominator:
        a = dot(w, xi)
        if a == 0:
            raise GenFunError(f"direction {xi} is not generic: it annihilates {list(w)}")
        slopes.append(a)
    powers = [Fraction(0)] * (prec + 1)
    for e, c in f.numerator.terms.items():
        s = dot(e, xi)
        p = Fraction(1)
        for j in range(prec + 1):
            powers[j] += c * p
            p *= s
    num = TruncatedSeries(tuple(powers[j] / factorial(j) for j in range(prec + 1)), 0, prec)
    for a in slopes:
        # (1 - e^{a t}) / t
        unit = TruncatedSeries(tuple(-Fraction(a) ** (j + 1) / factorial(j + 1) for j in range(prec + 1)), 0, prec)
        num = num * unit.inverse()
    return num.shift(-pole)
