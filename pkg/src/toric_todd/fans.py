"""Fans, their validation and refinement, and normal fans of lattice polytopes."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from math import ceil
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .cones import (
    DEFAULT_POINT_CAP,
    Cone,
    HalfOpenSimplicialCone,
    _placing_triangulation,
    dual_cone,
    multiplicity,
    parallelepiped_points,
)
from .lattice import Vector, add, det, dot, neg, primitive_vector, rank, sub, unit_combination

log = logging.getLogger(__name__)

ConeKey = tuple[int, ...]
DEFAULT_SUBDIVISION_CAP = 10**4


class FanError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Fan:
    """A fan stored as global primitive rays plus maximal cones (sorted index tuples).

    All faces are derived on demand. Cones are referred to by their key,
    the sorted tuple of global ray indices; ``()`` is the zero cone.
    """

    ambient_rank: int
    rays: tuple[Vector, ...]
    maximal: tuple[ConeKey, ...]

    @classmethod
    def from_cones(cls, rays: Iterable[Sequence[int]], cones: Iterable[Iterable[int]],
                   ambient_rank: int | None = None) -> "Fan":
        rays = tuple(primitive_vector(tuple(int(x) for x in r)) for r in rays)
        if ambient_rank is None:
            if not rays:
                raise FanError("ambient rank needed for a fan without rays")
            ambient_rank = len(rays[0])
        if any(len(r) != ambient_rank for r in rays):
            raise FanError(f"ray length differs from rank {ambient_rank}")
        if len(set(rays)) != len(rays):
            raise FanError("duplicate rays")
        keys = {tuple(sorted(set(int(i) for i in c))) for c in cones}
        for k in keys:
            if any(i < 0 or i >= len(rays) for i in k):
                raise FanError(f"cone {list(k)} refers to a missing ray")
        maximal = [k for k in keys if not any(set(k) < set(o) for o in keys)]
        if not maximal:
            maximal = [()]
        return cls(ambient_rank, rays, tuple(sorted(maximal, key=lambda k: (len(k), k))))

    # -- identity -----------------------------------------------------------
    def canonical(self) -> "Fan":
        """Same fan with rays in lexicographic order."""
        order = sorted(range(len(self.rays)), key=lambda i: self.rays[i])
        new_index = {old: new for new, old in enumerate(order)}
        cones = [tuple(sorted(new_index[i] for i in k)) for k in self.maximal]
        return Fan.from_cones([self.rays[i] for i in order], cones, self.ambient_rank)

    def __eq__(self, other):
        if not isinstance(other, Fan):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return (a.ambient_rank, a.rays, a.maximal) == (b.ambient_rank, b.rays, b.maximal)

    def __hash__(self):
        c = self.canonical()
        return hash((c.ambient_rank, c.rays, c.maximal))

    # -- structure ----------------------------------------------------------
    @cached_property
    def _ray_index(self) -> dict[Vector, int]:
        return {r: i for i, r in enumerate(self.rays)}

    def cone(self, key: Iterable[int]) -> Cone:
        key = tuple(key)
        if key in self._cones:
            return self._cones[key]
        return Cone.from_generators([self.rays[i] for i in key], self.ambient_rank)

    def key_of(self, c: Cone) -> ConeKey:
        return tuple(sorted(self._ray_index[r] for r in c.rays))

    @cached_property
    def _cones(self) -> dict[ConeKey, Cone]:
        out: dict[ConeKey, Cone] = {}
        for k in self.maximal:
            c = Cone.from_generators([self.rays[i] for i in k], self.ambient_rank)
            if not c.is_pointed:
                continue
            for local in c.face_index_sets:
                face = c.face(local)
                fk = self.key_of(face)
                if fk not in out:
                    out[fk] = Cone(face.rays, self.ambient_rank)
        out.setdefault((), Cone((), self.ambient_rank))
        return out

    @cached_property
    def cones(self) -> list[ConeKey]:
        """All cone keys, ordered by dimension then key."""
        return sorted(self._cones, key=lambda k: (self._cones[k].dim, k))

    def dim(self, key: ConeKey) -> int:
        return self.cone(key).dim

    def cones_of_dim(self, i: int) -> list[ConeKey]:
        return [k for k in self.cones if self._cones[k].dim == i]

    @cached_property
    def maximal_cones(self) -> list[ConeKey]:
        return list(self.maximal)

    def cofacets(self, key: ConeKey) -> list[ConeKey]:
        """Cones having ``key`` as a facet."""
        s = set(key)
        d = self.dim(key)
        return [k for k in self.cones if self.dim(k) == d + 1 and s < set(k)]

    def maximal_containing(self, key: ConeKey) -> list[ConeKey]:
        s = set(key)
        return [k for k in self.maximal if s <= set(k)]

    def carrier(self, v: Sequence[int]) -> ConeKey | None:
        """Smallest cone containing ``v`` (None outside the support)."""
        for k in self.cones:
            if self._cones[k].contains(v):
                return k
        return None

    @cached_property
    def report(self) -> "FanReport":
        return validate_fan(self)

    @property
    def is_complete(self) -> bool:
        return self.report.complete

    @property
    def is_simplicial(self) -> bool:
        return self.report.simplicial

    @property
    def is_smooth(self) -> bool:
        return self.report.smooth

    def to_json(self) -> dict:
        c = self.canonical()
        return {"rank": c.ambient_rank, "rays": [list(r) for r in c.rays],
                "cones": [list(k) for k in c.maximal]}


@dataclass
class FanReport:
    well_formed: bool
    complete: bool
    simplicial: bool
    smooth: bool
    counts: dict[int, int]
    violations: list[str] = field(default_factory=list)
    offending_pairs: list[tuple[ConeKey, ConeKey]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "well_formed": self.well_formed,
            "complete": self.complete,
            "simplicial": self.simplicial,
            "smooth": self.smooth,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "violations": list(self.violations),
            "offending_pairs": [[list(a), list(b)] for a, b in self.offending_pairs],
        }


def _intersection(a: Cone, b: Cone) -> Cone:
    d = a.ambient_rank
    return Cone.from_inequalities(list(a.facet_normals) + list(b.facet_normals), d,
                                  equalities=list(a.orthogonal_basis) + list(b.orthogonal_basis))


def validate_fan(f: Fan) -> FanReport:
    """Check the fan axioms and classify the fan."""
    violations: list[str] = []
    pairs: list[tuple[ConeKey, ConeKey]] = []
    d = f.ambient_rank
    used = set(i for k in f.maximal for i in k)
    for i in range(len(f.rays)):
        if i not in used:
            violations.append(f"ray {i} {list(f.rays[i])} is not used by any cone")
    cones = {}
    for k in f.maximal:
        c = Cone.from_generators([f.rays[i] for i in k], d)
        cones[k] = c
        if not c.is_pointed:
            violations.append(f"cone {list(k)} is not strongly convex")
        elif len(c.rays) != len(k):
            violations.append(f"cone {list(k)} lists rays that are not extreme")
    if not violations:
        faces = {k: {f.key_of(c.face(loc)) for loc in c.face_index_sets} for k, c in cones.items()}
        maxs = list(f.maximal)
        for x in range(len(maxs)):
            for y in range(x + 1, len(maxs)):
                ka, kb = maxs[x], maxs[y]
                common = tuple(sorted(set(ka) & set(kb)))
                ok = common in faces[ka] and common in faces[kb]
                if ok:
                    inter = _intersection(cones[ka], cones[kb])
                    ok = inter == Cone.from_generators([f.rays[i] for i in common], d)
                if not ok:
                    pairs.append((ka, kb))
                    violations.append(f"cones {list(ka)} and {list(kb)} meet in a non-face")
    well_formed = not violations
    counts: dict[int, int] = {}
    if well_formed:
        for k in f.cones:
            counts[f.dim(k)] = counts.get(f.dim(k), 0) + 1
    simplicial = well_formed and all(c.is_simplicial for c in cones.values())
    smooth = simplicial and all(multiplicity(c) == 1 for c in cones.values())
    complete = well_formed and _is_complete(f, cones)
    return FanReport(well_formed, complete, simplicial, smooth, counts, violations, pairs)


def _is_complete(f: Fan, cones: dict[ConeKey, Cone]) -> bool:
    d = f.ambient_rank
    if any(c.dim != d for c in cones.values()):
        return False
    if d == 0:
        return True
    walls: dict[ConeKey, list[ConeKey]] = {}
    for k in f.cones_of_dim(d - 1):
        walls[k] = f.maximal_containing(k)
    if any(len(v) != 2 for v in walls.values()):
        return False
    # the maximal cones must be connected through walls
    seen = {f.maximal[0]}
    stack = [f.maximal[0]]
    while stack:
        k = stack.pop()
        for adj in walls.values():
            if k in adj:
                for o in adj:
                    if o not in seen:
                        seen.add(o)
                        stack.append(o)
    return len(seen) == len(f.maximal)


@dataclass(frozen=True, eq=False)
class RefinementMap:
    """Sends every cone of the fine fan to the smallest coarse cone containing it."""

    fine: Fan
    coarse: Fan
    carrier: dict[ConeKey, ConeKey]

    @classmethod
    def build(cls, fine: Fan, coarse: Fan) -> "RefinementMap":
        carrier = {}
        for k in fine.cones:
            point = tuple(sum(fine.rays[i][j] for i in k) for j in range(fine.ambient_rank))
            target = coarse.carrier(point)
            if target is None:
                raise FanError(f"cone {list(k)} of the fine fan leaves the coarse support")
            carrier[k] = target
        return cls(fine, coarse, carrier)

    @classmethod
    def identity(cls, f: Fan) -> "RefinementMap":
        return cls(f, f, {k: k for k in f.cones})

    def same_dimension_image(self, key: ConeKey) -> ConeKey | None:
        target = self.carrier[key]
        return target if self.coarse.dim(target) == self.fine.dim(key) else None

    def compose(self, outer: "RefinementMap") -> "RefinementMap":
        """``outer`` after ``self``: fine of self into coarse of outer."""
        return RefinementMap(self.fine, outer.coarse, {k: outer.carrier[v] for k, v in self.carrier.items()})

    def to_json(self) -> dict:
        fine_c = self.fine.canonical()
        coarse_c = self.coarse.canonical()
        fi = {r: i for i, r in enumerate(fine_c.rays)}
        ci = {r: i for i, r in enumerate(coarse_c.rays)}

        def rekey(fan, key, index):
            return sorted(index[fan.rays[i]] for i in key)

        rows = [[rekey(self.fine, k, fi), rekey(self.coarse, v, ci)] for k, v in self.carrier.items()]
        return {"carrier": sorted(rows)}


def stellar_subdivision(f: Fan, r: Sequence[int]) -> tuple[Fan, RefinementMap]:
    """Star-subdivide ``f`` at the primitive vector ``r``."""
    r = primitive_vector(tuple(r))
    if len(r) != f.ambient_rank:
        raise FanError("subdivision vector has the wrong rank")
    if r in f.rays:
        return f, RefinementMap.identity(f)
    if f.carrier(r) is None:
        raise FanError(f"{list(r)} lies outside the support of the fan")
    new = len(f.rays)
    cones = []
    for k in f.maximal:
        c = f.cone(k)
        if not c.contains(r):
            cones.append(k)
            continue
        for loc in c.face_index_sets:
            face = c.face(loc)
            if face.dim == c.dim - 1 and not face.contains(r):
                cones.append(f.key_of(face) + (new,))
    out = Fan.from_cones(list(f.rays) + [r], cones, f.ambient_rank)
    return out, RefinementMap.build(out, f)


def hirzebruch_jung_rays(u: Sequence[int], v: Sequence[int]) -> list[Vector]:
    """Rays inserted into the 2-cone spanned by ``u`` and ``v`` to resolve it, from u to v."""
    u, v = tuple(u), tuple(v)
    m = det([u, v])
    if m < 0:
        return list(reversed(hirzebruch_jung_rays(v, u)))
    if m == 0:
        raise FanError("rays are dependent")
    if m == 1:
        return []
    a, b = unit_combination(u)
    e = (-b, a)
    rest = sub(v, (m * e[0], m * e[1]))
    j = 0 if u[0] else 1
    alpha = rest[j] // u[j]
    c = ceil(alpha / m) if alpha % m else alpha // m
    k = m * c - alpha
    e = add(e, (c * u[0], c * u[1]))
    num, den = m, k
    prev, cur = u, e
    out = []
    while cur != v:
        out.append(cur)
        b_i = -(-num // den)
        prev, cur = cur, (b_i * cur[0] - prev[0], b_i * cur[1] - prev[1])
        num, den = den, b_i * den - num
    return out


def _shortest_witness(c: Cone, cap: int) -> Vector:
    pts = parallelepiped_points(HalfOpenSimplicialCone.closed(c.rays, c.ambient_rank), cap)
    pts = [p for p in pts if any(p)]
    return min(pts, key=lambda p: (sum(x * x for x in p), p))


def _make_simplicial(f: Fan) -> Fan:
    cones = []
    changed = False
    for k in f.maximal:
        c = f.cone(k)
        if c.is_simplicial:
            cones.append(k)
            continue
        changed = True
        for piece in _placing_triangulation(c.rays):
            cones.append(tuple(sorted(f._ray_index[c.rays[j]] for j in piece)))
    return Fan.from_cones(f.rays, cones, f.ambient_rank) if changed else f


def resolve_to_smooth(f: Fan, cap: int = DEFAULT_SUBDIVISION_CAP,
                      point_cap: int = DEFAULT_POINT_CAP) -> tuple[Fan, RefinementMap]:
    """A smooth refinement of ``f`` with the same support, plus its refinement map."""
    if not f.report.well_formed:
        raise FanError("fan is not well formed: " + "; ".join(f.report.violations))
    d = f.ambient_rank
    if d > 3:
        raise FanError("resolution not guaranteed in rank > 3; use manual subdivisions")
    if f.is_smooth:
        return f, RefinementMap.identity(f)
    cur = f
    steps = 0
    if d == 2:
        for k in f.maximal:
            c = f.cone(k)
            if c.dim < 2:
                continue
            for w in hirzebruch_jung_rays(*c.rays):
                cur, _ = stellar_subdivision(cur, w)
                steps += 1
                if steps > cap:
                    raise FanError(f"resolution exceeded {cap} subdivisions")
    else:
        cur = _make_simplicial(cur)
        while True:
            bad = next((k for k in cur.maximal if multiplicity(cur.cone(k)) > 1), None)
            if bad is None:
                break
            w = _shortest_witness(cur.cone(bad), point_cap)
            log.debug("subdividing cone %s at %s", bad, w)
            cur, _ = stellar_subdivision(cur, w)
            steps += 1
            if steps > cap:
                raise FanError(f"resolution exceeded {cap} subdivisions")
    return cur, RefinementMap.build(cur, f)


# -- lattice polytopes ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LatticePolytope:
    """Convex hull of lattice points in M; ``vertices`` are its extreme points."""

    vertices: tuple[Vector, ...]

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]]) -> "LatticePolytope":
        pts = [tuple(int(x) for x in p) for p in points]
        if not pts:
            raise FanError("empty polytope")
        hom = Cone.from_generators([(1,) + p for p in pts], len(pts[0]) + 1, side="M")
        return cls(tuple(r[1:] for r in hom.rays))

    @property
    def ambient_rank(self) -> int:
        return len(self.vertices[0])

    @cached_property
    def _homogenized(self) -> Cone:
        return Cone(tuple((1,) + v for v in self.vertices), self.ambient_rank + 1, (), "M")

    @cached_property
    def dim(self) -> int:
        v0 = self.vertices[0]
        return rank([sub(v, v0) for v in self.vertices[1:]]) if len(self.vertices) > 1 else 0

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_rank

    @cached_property
    def inequalities(self) -> list[tuple[Vector, int]]:
        """Rows ``(a, b)`` with ``<a, x> + b >= 0`` on the polytope (equalities as pairs)."""
        h = self._homogenized
        rows = [(u[1:], u[0]) for u in h.facet_normals]
        for e in h.orthogonal_basis:
            rows.append((e[1:], e[0]))
            rows.append((neg(e[1:]), -e[0]))
        return rows

    def tangent_cone(self, v: Sequence[int]) -> Cone:
        v = tuple(v)
        return Cone.from_generators([sub(w, v) for w in self.vertices if w != v], self.ambient_rank, "M")

    def lattice_points(self, backend: str | None = None) -> list[Vector]:
        """All lattice points by scanning the bounding box."""
        d = self.ambient_rank
        lo = [min(v[i] for v in self.vertices) for i in range(d)]
        hi = [max(v[i] for v in self.vertices) for i in range(d)]
        ineq = [a for a, _ in self.inequalities]
        rhs = [b for _, b in self.inequalities]
        span = max(hi[i] - lo[i] for i in range(d)) + 1
        big = max([abs(x) for row in ineq for x in row] + [abs(x) for x in rhs] + [abs(x) for x in lo + hi])
        if _kernels.fits_int64(big * big * d * span):
            arr = _kernels.box_points(lo, hi, ineq, rhs, backend)
            return sorted(tuple(int(x) for x in row) for row in arr.tolist())
        import itertools
        return sorted(p for p in itertools.product(*[range(l, h + 1) for l, h in zip(lo, hi)])
                      if all(dot(a, p) + b >= 0 for a, b in zip(ineq, rhs)))

    def to_json(self) -> dict:
        return {"rank": self.ambient_rank, "vertices": [list(v) for v in self.vertices]}


def normal_fan(p: LatticePolytope) -> tuple[Fan, dict[Vector, ConeKey]]:
    """Inner normal fan of a full-dimensional polytope and the vertex -> maximal cone map."""
    if not p.is_full_dimensional:
        raise FanError("normal fan requires a full-dimensional polytope")
    d = p.ambient_rank
    normal_cones = {v: dual_cone(p.tangent_cone(v)) for v in p.vertices}
    rays = sorted({r for c in normal_cones.values() for r in c.rays})
    index = {r: i for i, r in enumerate(rays)}
    keys = {v: tuple(sorted(index[r] for r in c.rays)) for v, c in normal_cones.items()}
    return Fan.from_cones(rays, list(keys.values()), d), keys
