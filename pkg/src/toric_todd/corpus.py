"""Named fans and polytopes, plus seeded random generators for tests."""

from __future__ import annotations

import random
from functools import cmp_to_key

from .fans import Fan, LatticePolytope
from .lattice import det, primitive_vector


def projective_space(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return Fan.from_cones(rays, cones, n)


def p1_times_p1() -> Fan:
    return Fan.from_cones([(1, 0), (0, 1), (-1, 0), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)], 2)


def hirzebruch(a: int) -> Fan:
    return Fan.from_cones([(1, 0), (0, 1), (-1, a), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)], 2)


def weighted_p112() -> Fan:
    return Fan.from_cones([(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)], 2)


def weighted_p123() -> Fan:
    return Fan.from_cones([(1, 0), (0, 1), (-2, -3)], [(0, 1), (1, 2), (0, 2)], 2)


NAMED_FANS = {
    "P1": lambda: projective_space(1),
    "P2": lambda: projective_space(2),
    "P3": lambda: projective_space(3),
    "P1xP1": p1_times_p1,
    "F2": lambda: hirzebruch(2),
    "P112": weighted_p112,
    "P123": weighted_p123,
}


def _half(v) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = det([u, v])
    return -1 if c > 0 else (1 if c < 0 else 0)


def sort_by_angle(vectors):
    """Exact counter-clockwise order starting from the positive x-axis."""
    return sorted(vectors, key=cmp_to_key(_angle_cmp))


def random_complete_fan_2d(rng: random.Random, n_rays: int | None = None, bound: int = 5) -> Fan:
    """Random complete rank-2 fan: primitive rays in angular order with gaps under pi."""
    while True:
        k = n_rays or rng.randint(3, 7)
        raw = set()
        while len(raw) < k:
            v = (rng.randint(-bound, bound), rng.randint(-bound, bound))
            if any(v):
                raw.add(primitive_vector(v))
        rays = sort_by_angle(list(raw))
        if all(det([rays[i], rays[(i + 1) % k]]) > 0 for i in range(k)):
            cones = [(i, (i + 1) % k) for i in range(k)]
            return Fan.from_cones(rays, cones, 2)


def random_polygon(rng: random.Random, bound: int = 4, n_points: int | None = None) -> LatticePolytope:
    """Convex hull of random points in ``[-bound, bound]^2``, retried until two-dimensional."""
    while True:
        n = n_points or rng.randint(3, 7)
        pts = [(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(n)]
        p = LatticePolytope.from_points(pts)
        if p.is_full_dimensional:
            return p


def segment(n: int) -> LatticePolytope:
    return LatticePolytope.from_points([(0,), (n,)])


def simplex(n: int, dim: int = 2) -> LatticePolytope:
    pts = [(0,) * dim] + [tuple(n * int(i == j) for j in range(dim)) for i in range(dim)]
    return LatticePolytope.from_points(pts)


def cube(n: int, dim: int = 2) -> LatticePolytope:
    import itertools

    return LatticePolytope.from_points(itertools.product((0, n), repeat=dim))
