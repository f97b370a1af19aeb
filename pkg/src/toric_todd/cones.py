"""Rational polyhedral cones: duality, faces, multiplicity, half-open pieces."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import floor, lcm
from typing import Iterable, Sequence

from . import _kernels
from .lattice import (
    LatticeError,
    Vector,
    det,
    dot,
    hermite_basis,
    integer_kernel,
    lattice_index,
    neg,
    primitive_vector,
    rank,
    saturated_span_basis,
    smith_decomposition,
    solve_left,
    unit_combination,
)

DEFAULT_POINT_CAP = 10**6


class ConeError(ValueError):
    pass


def _double_description(constraints: Sequence[Vector], d: int) -> tuple[list[Vector], list[Vector]]:
    """Generators ``(lineality, rays)`` of ``{x : c.x >= 0 for c in constraints}``."""
    lin: list[Vector] = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    rays: list[Vector] = []
    processed: list[Vector] = []
    for h in constraints:
        h = tuple(h)
        if not any(h):
            continue
        hv = [dot(h, l) for l in lin]
        j = next((i for i, v in enumerate(hv) if v != 0), None)
        if j is not None:
            piv = lin[j]
            a = hv[j]
            if a < 0:
                piv, a = neg(piv), -a
            new_lin = []
            for i, (li, b) in enumerate(zip(lin, hv)):
                if i != j:
                    new_lin.append(primitive_vector(tuple(a * x - b * y for x, y in zip(li, piv))))
            new_rays = []
            for r in rays:
                s = dot(h, r)
                nr = tuple(a * x - s * y for x, y in zip(r, piv))
                if any(nr):
                    new_rays.append(primitive_vector(nr))
            new_rays.append(primitive_vector(piv))
            lin = new_lin
            rays = list(dict.fromkeys(new_rays))
            processed.append(h)
            continue
        vals = [dot(h, r) for r in rays]
        pos = [(r, s) for r, s in zip(rays, vals) if s > 0]
        neg_ = [(r, s) for r, s in zip(rays, vals) if s < 0]
        keep = [r for r, s in zip(rays, vals) if s >= 0]
        full_rank = rank(processed)
        for p, sp in pos:
            zp = {i for i, c in enumerate(processed) if dot(c, p) == 0}
            for n, sn in neg_:
                common = [processed[i] for i in zp if dot(processed[i], n) == 0]
                if rank(common) != full_rank - 2:
                    continue
                keep.append(primitive_vector(tuple(sp * x - sn * y for x, y in zip(n, p))))
        rays = list(dict.fromkeys(keep))
        processed.append(h)
    return lin, rays


def _project_off(v: Vector, basis: Sequence[Vector]) -> Vector | None:
    """Primitive integer direction of ``v`` minus its orthogonal projection onto ``basis``."""
    if not basis:
        return primitive_vector(v) if any(v) else None
    k = len(basis)
    gram = [[Fraction(dot(basis[i], basis[j])) for j in range(k)] for i in range(k)]
    rhs = [Fraction(dot(v, b)) for b in basis]
    coeffs = solve_left(gram, rhs)  # gram is symmetric
    w = [Fraction(x) for x in v]
    for c, b in zip(coeffs, basis):
        w = [wi - c * bi for wi, bi in zip(w, b)]
    if not any(w):
        return None
    den = lcm(*(x.denominator for x in w))
    return primitive_vector(tuple(int(x * den) for x in w))


@dataclass(frozen=True, eq=False)
class Cone:
    """A rational cone given by minimal generators.

    ``rays`` are primitive extreme rays modulo the lineality space, in the
    order they were first supplied; ``lineality`` is a Hermite basis of the
    largest linear subspace contained in the cone (empty when pointed).
    ``side`` records whether vectors live in N or in the dual lattice M.
    """

    rays: tuple[Vector, ...]
    ambient_rank: int
    lineality: tuple[Vector, ...] = ()
    side: str = "N"

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], ambient_rank: int | None = None,
                        side: str = "N") -> "Cone":
        gens = [tuple(int(x) for x in g) for g in gens]
        if ambient_rank is None:
            if not gens:
                raise ConeError("ambient rank needed for a cone without generators")
            ambient_rank = len(gens[0])
        d = ambient_rank
        if any(len(g) != d for g in gens):
            raise ConeError(f"generator length differs from ambient rank {d}")
        gens = list(dict.fromkeys(primitive_vector(g) for g in gens if any(g)))
        if not gens:
            return cls((), d, (), side)
        dual_lin, dual_rays = _double_description(gens, d)
        lin = integer_kernel(list(dual_rays) + list(dual_lin), d)
        if lin:
            projected = [_project_off(g, lin) for g in gens]
            gens = list(dict.fromkeys(p for p in projected if p is not None))
        normals = list(dual_lin) + [neg(l) for l in dual_lin] + list(dual_rays)
        target = rank(normals) - 1
        rays = []
        for g in gens:
            tight = [u for u in normals if dot(u, g) == 0]
            if rank(tight) == target:
                rays.append(g)
        return cls(tuple(rays), d, tuple(hermite_basis(lin)), side)

    @classmethod
    def from_inequalities(cls, ineqs: Iterable[Sequence[int]], ambient_rank: int,
                          equalities: Iterable[Sequence[int]] = (), side: str = "N") -> "Cone":
        rows = [tuple(r) for r in ineqs]
        for e in equalities:
            rows.append(tuple(e))
            rows.append(neg(tuple(e)))
        lin, rays = _double_description(rows, ambient_rank)
        gens = list(rays) + list(lin) + [neg(l) for l in lin]
        return cls.from_generators(gens, ambient_rank, side)

    # -- identity -----------------------------------------------------------
    @cached_property
    def _key(self):
        return (self.side, self.ambient_rank, frozenset(self.rays), self.lineality)

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        extra = f", lineality={list(self.lineality)}" if self.lineality else ""
        return f"Cone({list(self.rays)}{extra}, side={self.side!r})"

    # -- derived data -------------------------------------------------------
    @property
    def generators(self) -> list[Vector]:
        return list(self.rays) + list(self.lineality) + [neg(l) for l in self.lineality]

    @cached_property
    def dim(self) -> int:
        return rank(self.generators) if self.generators else 0

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_rank

    @property
    def is_simplicial(self) -> bool:
        return self.is_pointed and len(self.rays) == self.dim

    @cached_property
    def _dual_data(self) -> tuple[list[Vector], list[Vector]]:
        if not self.generators:
            d = self.ambient_rank
            return [tuple(int(i == j) for j in range(d)) for i in range(d)], []
        return _double_description(self.generators, self.ambient_rank)

    @cached_property
    def orthogonal_basis(self) -> list[Vector]:
        """Hermite basis of the lattice of covectors vanishing on the cone."""
        return integer_kernel(self.generators, self.ambient_rank) if self.generators else \
            [tuple(int(i == j) for j in range(self.ambient_rank)) for i in range(self.ambient_rank)]

    @cached_property
    def facet_normals(self) -> list[Vector]:
        """Primitive inner facet normals, taken orthogonal to the span's annihilator."""
        lin, rays = self._dual_data
        out = []
        for u in rays:
            p = _project_off(u, lin) if lin else u
            if p is not None:
                out.append(p)
        return sorted(dict.fromkeys(out))

    @cached_property
    def span_basis(self) -> list[Vector]:
        """Hermite basis of ``span(cone) ∩ lattice``."""
        return saturated_span_basis(self.generators, self.ambient_rank)

    def contains(self, v: Sequence[int]) -> bool:
        lin, rays = self._dual_data
        return all(dot(l, v) == 0 for l in lin) and all(dot(u, v) >= 0 for u in rays)

    def in_relative_interior(self, v: Sequence[int]) -> bool:
        lin, rays = self._dual_data
        return all(dot(l, v) == 0 for l in lin) and all(dot(u, v) > 0 for u in rays)

    @cached_property
    def face_index_sets(self) -> list[frozenset[int]]:
        """All faces of a pointed cone as sets of indices into ``rays``."""
        if not self.is_pointed:
            raise ConeError("face lattice is only computed for pointed cones")
        full = frozenset(range(len(self.rays)))
        facets = {frozenset(i for i, r in enumerate(self.rays) if dot(u, r) == 0)
                  for u in self.facet_normals}
        faces = {full} | facets
        frontier = set(facets)
        while frontier:
            new = set()
            for a in frontier:
                for b in facets:
                    c = a & b
                    if c not in faces:
                        new.add(c)
            faces |= new
            frontier = new
        if not self.rays:
            faces = {frozenset()}
        return sorted(faces, key=lambda s: (len(s), sorted(s)))

    def face(self, indices: Iterable[int]) -> "Cone":
        return Cone(tuple(self.rays[i] for i in sorted(indices)), self.ambient_rank, (), self.side)


def dual_cone(c: Cone) -> Cone:
    """The dual cone ``{u : <u, v> >= 0 for v in c}`` on the other lattice side."""
    lin, rays = c._dual_data
    side = "M" if c.side == "N" else "N"
    gens = sorted(rays) + list(lin) + [neg(l) for l in lin]
    if not gens:
        return Cone((), c.ambient_rank, (), side)
    out = Cone.from_generators(gens, c.ambient_rank, side)
    return Cone(tuple(sorted(out.rays)), out.ambient_rank, out.lineality, side)


def multiplicity(c: Cone) -> int:
    """Index of the ray lattice of a simplicial cone in its saturated span lattice."""
    if not c.is_simplicial:
        raise ConeError("multiplicity requires simplicial cone")
    if not c.rays:
        return 1
    return lattice_index(c.rays)


def is_smooth(c: Cone) -> bool:
    return c.is_simplicial and multiplicity(c) == 1


def _coords_in(basis: Sequence[Vector], v: Sequence[int]) -> tuple[Fraction, ...]:
    coeffs = solve_left(basis, v)
    if coeffs is None:
        raise LatticeError(f"{tuple(v)} is not in the span of {list(basis)}")
    return coeffs


def _integral_coords(basis: Sequence[Vector], v: Sequence[int]) -> tuple[int, ...]:
    coeffs = _coords_in(basis, v)
    if any(x.denominator != 1 for x in coeffs):
        raise LatticeError(f"{tuple(v)} is not in the lattice spanned by {list(basis)}")
    return tuple(int(x) for x in coeffs)


def cofacet_generator(sigma: Cone, tau: Cone) -> Vector:
    """Canonical lift of the generator of ``(tau ∩ N) / (sigma ∩ N)``.

    The lift is reduced modulo the Hermite basis of ``span(sigma) ∩ N`` so
    that the coordinates of its orthogonal projection onto that span lie in
    ``[0, 1)``.
    """
    if not (sigma.is_pointed and tau.is_pointed):
        raise ConeError("cofacet generator needs pointed cones")
    if tau.dim != sigma.dim + 1 or not set(sigma.rays) <= set(tau.rays):
        raise ConeError("sigma is not a facet of tau")
    idx = frozenset(i for i, r in enumerate(tau.rays) if r in set(sigma.rays))
    if idx not in tau.face_index_sets:
        raise ConeError("sigma is not a facet of tau")
    b_tau = tau.span_basis
    b_sigma = sigma.span_basis
    k = len(b_tau)
    x = [_integral_coords(b_tau, b) for b in b_sigma]
    (z,) = integer_kernel(x, k)
    extra = next(r for r in tau.rays if r not in set(sigma.rays))
    if dot(_integral_coords(b_tau, extra), z) < 0:
        z = neg(z)
    y = unit_combination(z)
    g = tuple(sum(y[i] * b_tau[i][j] for i in range(k)) for j in range(tau.ambient_rank))
    if b_sigma:
        m = len(b_sigma)
        gram = [[Fraction(dot(b_sigma[i], b_sigma[j])) for j in range(m)] for i in range(m)]
        a = solve_left(gram, [Fraction(dot(g, b)) for b in b_sigma])
        for aj, bj in zip(a, b_sigma):
            f = floor(aj)
            if f:
                g = tuple(gi - f * bi for gi, bi in zip(g, bj))
    return g


@dataclass(frozen=True)
class HalfOpenSimplicialCone:
    """Simplicial cone with some facets removed.

    ``open_flags[i]`` set means lattice points whose coefficient on
    ``rays[i]`` is zero are excluded.
    """

    rays: tuple[Vector, ...]
    open_flags: tuple[bool, ...]
    ambient_rank: int = field(default=0)

    def __post_init__(self):
        if len(self.rays) != len(self.open_flags):
            raise ConeError("one open flag per ray required")
        if not self.ambient_rank:
            object.__setattr__(self, "ambient_rank", len(self.rays[0]) if self.rays else 0)
        if self.rays and rank(self.rays) != len(self.rays):
            raise ConeError("half-open cone rays must be linearly independent")

    @classmethod
    def closed(cls, rays: Sequence[Vector], ambient_rank: int = 0) -> "HalfOpenSimplicialCone":
        return cls(tuple(tuple(r) for r in rays), (False,) * len(rays), ambient_rank)

    def contains(self, v: Sequence[int]) -> bool:
        if not self.rays:
            return not any(v)
        lam = solve_left(self.rays, v)
        if lam is None:
            return False
        return all((x > 0) if o else (x >= 0) for x, o in zip(lam, self.open_flags))


def _parallelepiped_python(diag, wmat, rays, det_abs, open_flags):
    k = len(diag)
    d = len(rays[0])
    out = []
    q = [0] * k
    total = 1
    for x in diag:
        total *= x
    for _ in range(total):
        a = []
        for j in range(k):
            s = sum(q[i] * wmat[i][j] for i in range(k)) % det_abs
            if s == 0 and open_flags[j]:
                s = det_abs
            a.append(s)
        out.append(tuple(sum(a[j] * rays[j][c] for j in range(k)) // det_abs for c in range(d)))
        i = k - 1
        while i >= 0:
            q[i] += 1
            if q[i] < diag[i]:
                break
            q[i] = 0
            i -= 1
    return out


def residue_data(c: HalfOpenSimplicialCone, cap: int = DEFAULT_POINT_CAP) -> tuple[list[int], list[list[int]], int]:
    """Smith diagonal, residue-to-coefficient matrix and index of the ray lattice."""
    basis = saturated_span_basis(c.rays, c.ambient_rank)
    coords = [_integral_coords(basis, r) for r in c.rays]
    det_abs = abs(det(coords))
    if det_abs == 0:
        raise ConeError("dependent rays")
    if det_abs > cap:
        raise ConeError(f"parallelepiped has {det_abs} points, above the cap of {cap}")
    diag, s, _ = smith_decomposition(coords)
    k = len(diag)
    wmat = [[(s[i][j] * (det_abs // diag[i])) % det_abs for j in range(k)] for i in range(k)]
    return [abs(x) for x in diag], wmat, det_abs


def parallelepiped_points(c: HalfOpenSimplicialCone, cap: int = DEFAULT_POINT_CAP,
                          backend: str | None = None) -> list[Vector]:
    """Lattice points ``sum(l_i r_i)`` with ``l_i`` in ``[0,1)`` (``(0,1]`` where open).

    Residues of the ray lattice inside its saturation are enumerated from
    the Smith form of the ray coordinates; output is sorted.
    """
    d = c.ambient_rank
    if not c.rays:
        return [(0,) * d]
    diag, wmat, det_abs = residue_data(c, cap)
    k = len(diag)
    max_ray = max(abs(x) for r in c.rays for x in r)
    if _kernels.fits_int64(k * det_abs * det_abs, k * det_abs * max_ray):
        arr = _kernels.parallelepiped_residues(diag, wmat, c.rays, det_abs, c.open_flags, backend)
        pts = [tuple(int(x) for x in row) for row in arr.tolist()]
    else:
        pts = _parallelepiped_python(diag, wmat, c.rays, det_abs, c.open_flags)
    return sorted(pts)


def _placing_triangulation(rays: Sequence[Vector]) -> list[tuple[int, ...]]:
    pieces: list[tuple[int, ...]] = []
    placed: list[int] = []
    cur_rank = 0
    for i, r in enumerate(rays):
        if rank([rays[j] for j in placed] + [r]) > cur_rank:
            pieces = [p + (i,) for p in pieces] if pieces else [(i,)]
            placed.append(i)
            cur_rank += 1
            continue
        counts: dict[frozenset[int], int] = {}
        for p in pieces:
            for s in p:
                f = frozenset(p) - {s}
                counts[f] = counts.get(f, 0) + 1
        new = []
        for p in pieces:
            lam = _coords_in([rays[j] for j in p], r)
            for pos, s in enumerate(p):
                f = frozenset(p) - {s}
                if counts[f] == 1 and lam[pos] < 0:
                    new.append(tuple(j for j in p if j != s) + (i,))
        pieces.extend(new)
        placed.append(i)
    return pieces


def half_open_triangulation(c: Cone) -> list[HalfOpenSimplicialCone]:
    """Partition the lattice points of a pointed cone into half-open simplicial cones.

    Pieces come from the placing triangulation of the rays in their stored
    order. A facet of a piece is dropped when a fixed generic interior
    direction (the first piece's ray sum, perturbed lexicographically by the
    rays) points out of the piece through it.
    """
    if not c.is_pointed:
        raise ConeError("triangulate requires pointed cone")
    d = c.ambient_rank
    if not c.rays:
        return [HalfOpenSimplicialCone((), (), d)]
    pieces = _placing_triangulation(c.rays)
    first = pieces[0]
    y = tuple(sum(c.rays[j][t] for j in first) for t in range(d))
    probes = [y] + list(c.rays)
    out = []
    for p in pieces:
        basis = [c.rays[j] for j in p]
        coords = [_coords_in(basis, v) for v in probes]
        flags = []
        for pos in range(len(p)):
            sign = next(x for x in (cv[pos] for cv in coords) if x != 0)
            flags.append(sign < 0)
        out.append(HalfOpenSimplicialCone(tuple(basis), tuple(flags), d))
    return out


def primitive_ray_cone(v: Sequence[int], side: str = "N") -> Cone:
    return Cone((primitive_vector(tuple(v)),), len(v), (), side)
