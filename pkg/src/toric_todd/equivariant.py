"""Equivariant homology and cohomology of toric varieties, combinatorially.

Homology classes are formal sums over the cones of a fan. Cohomology is
modelled by continuous piecewise polynomials on the maximal cones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Mapping, Sequence

from .cones import Cone, _integral_coords, cofacet_generator, multiplicity
from .fans import ConeKey, Fan, FanError, RefinementMap
from .genfun import RationalGenFun, TruncatedSeries, format_rational
from .lattice import Vector, dot, rank, saturated_span_basis, solve_left
from .polys import Polynomial


class EquivariantError(ValueError):
    pass


POLYNOMIAL = "polynomial"
LOCALIZED = "localized"


# -- homology ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HomologyClass:
    """``sum(c_sigma [O_sigma])`` with polynomial or generating-function coefficients."""

    fan: Fan
    coefficients: Mapping[ConeKey, object]
    flavor: str = POLYNOMIAL

    def __post_init__(self):
        if self.flavor not in (POLYNOMIAL, LOCALIZED):
            raise EquivariantError(f"unknown flavor {self.flavor!r}")
        cones = set(self.fan.cones)
        for k in self.coefficients:
            if k not in cones:
                raise EquivariantError(f"{list(k)} is not a cone of the fan")

    def _zero(self):
        d = self.fan.ambient_rank
        return Polynomial.zero(d) if self.flavor == POLYNOMIAL else RationalGenFun.zero(d)

    @classmethod
    def generator(cls, fan: Fan, key: ConeKey, flavor: str = POLYNOMIAL) -> "HomologyClass":
        d = fan.ambient_rank
        one = Polynomial.constant(d, 1) if flavor == POLYNOMIAL else RationalGenFun.one(d)
        return cls(fan, {tuple(key): one}, flavor)

    def coefficient(self, key: ConeKey):
        return self.coefficients.get(tuple(key), self._zero())

    def support(self) -> list[ConeKey]:
        return sorted(k for k, c in self.coefficients.items() if not c.is_zero())

    def degree_of(self, key: ConeKey) -> int:
        """Homological degree of ``[O_sigma]``: twice the codimension."""
        return 2 * (self.fan.ambient_rank - self.fan.dim(key))

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        if other.fan is not self.fan or other.flavor != self.flavor:
            raise EquivariantError("classes live on different fans or flavors")
        out = dict(self.coefficients)
        for k, c in other.coefficients.items():
            out[k] = out[k] + c if k in out else c
        return HomologyClass(self.fan, out, self.flavor)

    def times_character(self, m: Sequence[int]) -> "HomologyClass":
        """Multiply every coefficient by ``m`` in M (a linear form, or ``e^m`` when localized)."""
        m = tuple(m)
        if self.flavor == POLYNOMIAL:
            lf = Polynomial.linear_form(m)
            return HomologyClass(self.fan, {k: c * lf for k, c in self.coefficients.items()}, self.flavor)
        return HomologyClass(self.fan, {k: c.scale_by_monomial(m) for k, c in self.coefficients.items()},
                             self.flavor)

    def equals(self, other: "HomologyClass") -> bool:
        if self.flavor != other.flavor:
            return False
        keys = set(self.coefficients) | set(other.coefficients)
        return all(self.coefficient(k) == other.coefficient(k) for k in keys)

    def to_json(self) -> dict:
        out = {}
        for k in sorted(self.coefficients):
            c = self.coefficients[k]
            if self.flavor == POLYNOMIAL:
                out[cone_id(k)] = [{"exp": list(e), "coeff": format_rational(v)} for e, v in c.items()]
            else:
                out[cone_id(k)] = c.to_json()
        return {"flavor": self.flavor, "coefficients": out}


def cone_id(key: Sequence[int]) -> str:
    return "[" + ",".join(str(i) for i in key) + "]"


@dataclass(frozen=True)
class PresentationRelation:
    """``l . [O_sigma] = sum(<l, n> [O_tau])`` over the cones tau having sigma as a facet."""

    source: ConeKey
    form: Vector
    terms: tuple[tuple[ConeKey, int], ...]

    def to_json(self) -> dict:
        return {"source": list(self.source), "form": list(self.form),
                "terms": [[list(t), n] for t, n in self.terms]}


def homology_presentation(f: Fan) -> tuple[list[ConeKey], list[PresentationRelation]]:
    """Generators (every cone) and the relations coming from each cone's orthogonal lattice."""
    if not f.report.well_formed:
        raise FanError("fan is not well formed: " + "; ".join(f.report.violations))
    relations = []
    for key in f.cones:
        sigma = f.cone(key)
        perp = sigma.orthogonal_basis
        if not perp:
            continue
        cof = [(t, cofacet_generator(sigma, f.cone(t))) for t in f.cofacets(key)]
        for l in perp:
            relations.append(PresentationRelation(key, l, tuple((t, dot(l, n)) for t, n in cof)))
    return list(f.cones), relations


def nonequivariant_ranks(f: Fan) -> list[int]:
    """Ranks of ordinary homology in degrees 0, 2, ..., 2d from the presentation with M set to zero."""
    gens, relations = homology_presentation(f)
    d = f.ambient_rank
    out = []
    for k in range(d + 1):
        cols = f.cones_of_dim(d - k)
        index = {c: i for i, c in enumerate(cols)}
        rows = []
        for rel in relations:
            if f.dim(rel.source) != d - k - 1:
                continue
            row = [0] * len(cols)
            for t, n in rel.terms:
                row[index[t]] += n
            rows.append(row)
        out.append(len(cols) - (rank(rows) if rows else 0))
    return out


def pushforward_subdivision(rmap: RefinementMap, c: HomologyClass) -> HomologyClass:
    """Push a class on the fine fan to the coarse fan: sum over equal-dimension pieces."""
    if c.fan is not rmap.fine and c.fan != rmap.fine:
        raise EquivariantError("class does not live on the source of the refinement")
    out: dict[ConeKey, object] = {}
    for k, coeff in c.coefficients.items():
        target = rmap.same_dimension_image(k)
        if target is None:
            continue
        out[target] = out[target] + coeff if target in out else coeff
    return HomologyClass(rmap.coarse, out, c.flavor)


# -- piecewise polynomials --------------------------------------------------


@dataclass(frozen=True, eq=False)
class PiecewisePoly:
    """One polynomial per maximal cone of a fan."""

    fan: Fan
    pieces: Mapping[ConeKey, Polynomial]

    def piece(self, key: ConeKey) -> Polynomial:
        return self.pieces.get(tuple(key), Polynomial.zero(self.fan.ambient_rank))

    def __add__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        return PiecewisePoly(self.fan, {k: self.piece(k) + other.piece(k) for k in self.fan.maximal})

    def __mul__(self, other) -> "PiecewisePoly":
        if isinstance(other, PiecewisePoly):
            return PiecewisePoly(self.fan, {k: self.piece(k) * other.piece(k) for k in self.fan.maximal})
        return PiecewisePoly(self.fan, {k: self.piece(k) * other for k in self.fan.maximal})

    def discontinuities(self) -> list[tuple[ConeKey, ConeKey]]:
        """Pairs of maximal cones whose pieces disagree on their common face."""
        bad = []
        maxs = self.fan.maximal
        for a, b in itertools.combinations(maxs, 2):
            common = tuple(sorted(set(a) & set(b)))
            basis = self.fan.cone(common).span_basis
            if self.piece(a).restrict(basis) != self.piece(b).restrict(basis):
                bad.append((a, b))
        return bad

    def is_continuous(self) -> bool:
        return not self.discontinuities()

    def to_json(self) -> dict:
        return {cone_id(k): [{"exp": list(e), "coeff": format_rational(v)} for e, v in self.piece(k).items()]
                for k in self.fan.maximal}


def _require_complete_simplicial(f: Fan):
    if not f.is_complete:
        raise FanError("fan must be complete")
    if not f.is_simplicial:
        raise FanError("fan must be simplicial")


def dual_basis(rays: Sequence[Vector]) -> list[tuple[Fraction, ...]]:
    """Rational covectors ``u_i`` with ``<u_i, rays[j]> = [i == j]``."""
    d = len(rays)
    out = []
    for i in range(d):
        target = [Fraction(int(i == j)) for j in range(d)]
        # solve u . rays[j] = target[j] for all j, i.e. rays^T u = target
        cols = [[rays[j][c] for j in range(d)] for c in range(d)]
        out.append(solve_left(cols, target))
    return out


def courant_and_phi(f: Fan) -> tuple[dict[int, PiecewisePoly], dict[ConeKey, PiecewisePoly]]:
    """Courant functions of the rays and the functions ``mult(sigma) prod xi_tau`` of every cone."""
    _require_complete_simplicial(f)
    d = f.ambient_rank
    xi: dict[int, dict[ConeKey, Polynomial]] = {i: {} for i in range(len(f.rays))}
    for key in f.maximal:
        duals = dual_basis([f.rays[i] for i in key])
        for i, u in zip(key, duals):
            xi[i][key] = Polynomial.linear_form(u)
    xis = {i: PiecewisePoly(f, pieces) for i, pieces in xi.items()}
    phis = {}
    for key in f.cones:
        out = PiecewisePoly(f, {k: Polynomial.constant(d, multiplicity(f.cone(key))) for k in f.maximal})
        for i in key:
            out = out * xis[i]
        phis[key] = out
    return xis, phis


@dataclass(frozen=True, eq=False)
class LocalizedRestriction:
    """``genfun * factor`` on one maximal cone: a generating function times a polynomial."""

    genfun: RationalGenFun
    factor: Polynomial

    def expand(self, order: int) -> Polynomial:
        """Power series in the coordinates of N, truncated at total degree ``order``.

        ``1/(1-e^w) = -Td(-w)/w`` turns every denominator factor into a
        power series divided by ``w``; the linear factors ``w`` must divide
        ``factor``.
        """
        d = self.factor.rank
        if self.genfun.is_zero():
            return Polynomial.zero(d)
        q = self.factor
        for w in self.genfun.denominator:
            q2 = q.divide_linear(Polynomial.linear_form(w))
            if q2 is None:
                raise EquivariantError(f"restriction has a pole along {list(w)}")
            q = -q2
        out = Polynomial.zero(d)
        for m, c in self.genfun.numerator.terms.items():
            out = out + exp_linear(m, order).scale(c)
        out = out.mul_truncated(q, order)
        for w in self.genfun.denominator:
            out = out.mul_truncated(todd_linear(tuple(-x for x in w), order), order)
        return out


def localized_pd_restrict(c: HomologyClass) -> dict[ConeKey, LocalizedRestriction]:
    """Per maximal cone, the restriction of the inverse Poincare dual of a localized class.

    On a maximal cone sigma this is ``(-1)^d (c_sigma phi_sigma)(-v)``,
    that is ``c_sigma(-v) * phi_sigma|sigma(v)`` since ``phi_sigma`` is
    homogeneous of degree d.
    """
    f = c.fan
    if c.flavor != LOCALIZED:
        raise EquivariantError("localized class required")
    maximal = set(f.maximal)
    for k, v in c.coefficients.items():
        if k not in maximal and not v.is_zero():
            raise EquivariantError(f"coefficient on the non-maximal cone {list(k)}")
    _, phis = courant_and_phi(f)
    return {k: LocalizedRestriction(c.coefficient(k).negate_argument(), phis[k].piece(k))
            for k in f.maximal}


# -- truncated multivariate series ------------------------------------------


@dataclass(frozen=True, eq=False)
class TruncatedPoly:
    """A polynomial known up to total degree ``order``."""

    poly: Polynomial
    order: int

    def __post_init__(self):
        object.__setattr__(self, "poly", self.poly.truncate(self.order))

    def __mul__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        k = min(self.order, other.order)
        return TruncatedPoly(self.poly.mul_truncated(other.poly, k), k)

    def __add__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        k = min(self.order, other.order)
        return TruncatedPoly(self.poly + other.poly, k)

    def __eq__(self, other):
        if not isinstance(other, TruncatedPoly):
            return NotImplemented
        k = min(self.order, other.order)
        return self.poly.truncate(k) == other.poly.truncate(k)

    __hash__ = None

    def first_mismatch(self, other: "TruncatedPoly") -> int | None:
        for j in range(min(self.order, other.order) + 1):
            if self.poly.homogeneous_part(j) != other.poly.homogeneous_part(j):
                return j
        return None


@lru_cache(maxsize=None)
def todd_coefficients(order: int) -> tuple[Fraction, ...]:
    """Coefficients of ``z / (1 - e^{-z})`` through ``z^order``."""
    base = TruncatedSeries(tuple(Fraction((-1) ** j, factorial(j + 1)) for j in range(order + 1)), 0, order)
    return base.inverse().coeffs


def _power_series_of_linear(coeffs: Sequence[Fraction], lin: Polynomial, order: int) -> Polynomial:
    out = Polynomial.constant(lin.rank, coeffs[0])
    power = Polynomial.constant(lin.rank, 1)
    for j in range(1, order + 1):
        power = power.mul_truncated(lin, order)
        if coeffs[j]:
            out = out + power.scale(coeffs[j])
    return out


def exp_linear(m: Sequence, order: int) -> Polynomial:
    """``exp(<m, x>)`` truncated at total degree ``order``."""
    coeffs = [Fraction(1, factorial(j)) for j in range(order + 1)]
    return _power_series_of_linear(coeffs, Polynomial.linear_form(m), order)


def todd_linear(m: Sequence, order: int) -> Polynomial:
    """``Td(<m, x>)`` with ``Td(z) = z / (1 - e^{-z})``, truncated."""
    return _power_series_of_linear(todd_coefficients(order), Polynomial.linear_form(m), order)


def smooth_todd_series(f: Fan, key: ConeKey, order: int) -> TruncatedPoly:
    """Product of ``Td(v_i*)`` over the dual basis of a smooth maximal cone."""
    c = f.cone(key)
    if not c.is_full_dimensional or not c.is_simplicial or multiplicity(c) != 1:
        raise EquivariantError(f"cone {list(key)} is not a smooth maximal cone")
    d = f.ambient_rank
    out = Polynomial.constant(d, 1)
    for u in dual_basis([f.rays[i] for i in key]):
        out = out.mul_truncated(todd_linear(u, order), order)
    return TruncatedPoly(out, order)


# -- graded dimensions ------------------------------------------------------


def _monomials(k: int, j: int) -> list[tuple[int, ...]]:
    if k == 0:
        return [()] if j == 0 else []
    out = []
    for combo in itertools.combinations_with_replacement(range(k), j):
        e = [0] * k
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def _restriction_matrix(source_basis: Sequence[Vector], target_basis: Sequence[Vector], j: int,
                        ambient: int) -> list[list[Fraction]]:
    """Matrix of restricting degree-j polynomials on span(source) to span(target).

    Polynomials on a span are written in coordinates with respect to its
    Hermite basis. Rows index target monomials, columns source monomials.
    """
    k_src, k_tgt = len(source_basis), len(target_basis)
    src_mons = _monomials(k_src, j)
    tgt_mons = _monomials(k_tgt, j)
    tindex = {e: i for i, e in enumerate(tgt_mons)}
    x = [_integral_coords(source_basis, b) for b in target_basis] if k_tgt else []
    images = [Polynomial(k_tgt, {tuple(int(a == t) for a in range(k_tgt)): x[t][i] for t in range(k_tgt)})
              for i in range(k_src)]
    mat = [[Fraction(0)] * len(src_mons) for _ in tgt_mons]
    for col, e in enumerate(src_mons):
        mono = Polynomial.monomial(e)
        img = mono.substitute(images, k_tgt) if k_src else mono
        if k_tgt == 0:
            # only constants survive on the origin
            if j == 0:
                mat[0][col] = Fraction(1)
            continue
        for te, c in img.terms.items():
            mat[tindex[te]][col] = c
    return mat


def _rank(rows: list[list]) -> int:
    rows = [r for r in rows if any(r)]
    return rank(rows) if rows else 0


def cech_cohomology_dims(f: Fan, cutoff: int) -> list[int]:
    """Graded dimensions of equivariant cohomology from the Cech complex of maximal cones.

    Entry n is ``sum(dim E2^{p,q} : p + q = n)`` where the q-th row is the
    Cech complex of degree-q/2 polynomials on the spans of intersections.
    """
    if not f.report.well_formed:
        raise FanError("fan is not well formed: " + "; ".join(f.report.violations))
    d = f.ambient_rank
    maxs = list(f.maximal)
    m = len(maxs)
    spans: dict[tuple[int, ...], list[Vector]] = {}

    def span_of(idx):
        if idx not in spans:
            common = set(maxs[idx[0]])
            for i in idx[1:]:
                common &= set(maxs[i])
            spans[idx] = saturated_span_basis([f.rays[r] for r in sorted(common)], d)
        return spans[idx]

    dims = [0] * (cutoff + 1)
    for j in range(cutoff // 2 + 1):
        top_p = min(cutoff - 2 * j, m - 1)
        terms = {p: list(itertools.combinations(range(m), p + 1)) for p in range(top_p + 2) if p < m}
        offsets: dict[int, dict] = {}
        sizes: dict[int, int] = {}
        for p, tuples in terms.items():
            off, total = {}, 0
            for t in tuples:
                off[t] = total
                total += len(_monomials(len(span_of(t)), j))
            offsets[p], sizes[p] = off, total
        ranks = {}
        for p in terms:
            if p + 1 not in terms:
                ranks[p] = 0
                continue
            rows = [[Fraction(0)] * sizes[p] for _ in range(sizes[p + 1])]
            for t in terms[p + 1]:
                tb = span_of(t)
                for s in range(len(t)):
                    face = t[:s] + t[s + 1:]
                    sign = -1 if s % 2 else 1
                    mat = _restriction_matrix(span_of(face), tb, j, d)
                    r0, c0 = offsets[p + 1][t], offsets[p][face]
                    for a, row in enumerate(mat):
                        for b, v in enumerate(row):
                            if v:
                                rows[r0 + a][c0 + b] += sign * v
            ranks[p] = _rank(rows)
        for p in range(top_p + 1):
            kernel = sizes[p] - ranks[p]
            image = ranks[p - 1] if p > 0 else 0
            n = p + 2 * j
            if n <= cutoff:
                dims[n] += kernel - image
    return dims


def piecewise_poly_dims(f: Fan, k: int) -> int:
    """Dimension of continuous piecewise polynomials homogeneous of degree k (complete fans)."""
    if not f.is_complete:
        raise FanError("fan must be complete")
    d = f.ambient_rank
    maxs = list(f.maximal)
    full = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    nmon = len(_monomials(d, k))
    index = {key: i for i, key in enumerate(maxs)}
    rows = []
    for wall in f.cones_of_dim(d - 1):
        a, b = f.maximal_containing(wall)
        mat = _restriction_matrix(full, f.cone(wall).span_basis, k, d)
        for r in mat:
            row = [Fraction(0)] * (nmon * len(maxs))
            for col, v in enumerate(r):
                row[index[a] * nmon + col] += v
                row[index[b] * nmon + col] -= v
            rows.append(row)
    return nmon * len(maxs) - _rank(rows)
