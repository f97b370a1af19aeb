import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from toric_todd import corpus
from toric_todd.cones import Cone, multiplicity
from toric_todd.fans import (
    Fan,
    FanError,
    LatticePolytope,
    RefinementMap,
    hirzebruch_jung_rays,
    normal_fan,
    resolve_to_smooth,
    stellar_subdivision,
    validate_fan,
)

from oracles import det, primitive


def test_p1_report():
    r = validate_fan(corpus.projective_space(1))
    assert (r.well_formed, r.complete, r.simplicial, r.smooth) == (True, True, True, True)
    assert r.counts == {0: 1, 1: 2}


def test_p2_report():
    r = validate_fan(corpus.projective_space(2))
    assert r.complete and r.smooth and r.counts[2] == 3 and r.counts[1] == 3


def test_p112_is_not_smooth():
    f = corpus.weighted_p112()
    r = validate_fan(f)
    assert r.complete and r.simplicial and not r.smooth
    singular = [k for k in f.maximal if multiplicity(f.cone(k)) > 1]
    assert [set(f.rays[i] for i in k) for k in singular] == [{(1, 0), (-1, -2)}]


def test_overlapping_cones_reported_with_pair():
    f = Fan.from_cones([(1, 0), (0, 1), (1, 1)], [(0, 1), (1, 2)])
    r = validate_fan(f)
    assert not r.well_formed and not r.complete
    assert r.offending_pairs == [((0, 1), (1, 2))]


def test_unused_ray_and_non_pointed_cone():
    f = Fan.from_cones([(1, 0), (-1, 0), (0, 1)], [(0, 1)])
    r = validate_fan(f)
    assert not r.well_formed
    assert any("not used" in v for v in r.violations)
    assert any("strongly convex" in v for v in r.violations)


def test_incomplete_fan():
    f = Fan.from_cones([(1, 0), (0, 1), (-1, 0)], [(0, 1), (1, 2)])
    r = validate_fan(f)
    assert r.well_formed and not r.complete


def test_duplicate_rays_rejected():
    with pytest.raises(FanError):
        Fan.from_cones([(1, 0), (2, 0)], [(0,), (1,)])


def test_faces_are_derived():
    f = corpus.projective_space(2)
    assert len(f.cones) == 7
    assert f.cones[0] == ()


def test_canonical_equality():
    a = Fan.from_cones([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    b = Fan.from_cones([(-1, -1), (1, 0), (0, 1)], [(1, 2), (0, 2), (0, 1)])
    assert a == b and hash(a) == hash(b)


def test_stellar_at_existing_ray_is_identity():
    f = corpus.projective_space(1)
    g, m = stellar_subdivision(f, (1,))
    assert g is f
    assert all(m.carrier[k] == k for k in f.cones)


def test_stellar_splits_cone():
    f = Fan.from_cones([(1, 0), (1, 2)], [(0, 1)])
    g, m = stellar_subdivision(f, (1, 1))
    pieces = [set(g.rays[i] for i in k) for k in g.maximal]
    assert sorted(map(sorted, pieces)) == [[(1, 0), (1, 1)], [(1, 1), (1, 2)]]
    assert all(abs(det([g.rays[i] for i in k])) == 1 for k in g.maximal)
    assert all(m.same_dimension_image(k) == (0, 1) for k in g.maximal)


def test_stellar_outside_support():
    f = Fan.from_cones([(1, 0), (1, 2)], [(0, 1)])
    with pytest.raises(FanError, match="outside the support"):
        stellar_subdivision(f, (-1, 0))


def test_p112_singular_cone_split():
    f = corpus.weighted_p112()
    g, _ = stellar_subdivision(f, (0, -1))
    assert validate_fan(g).smooth


@pytest.mark.parametrize("u, v, expected", [
    ((1, 0), (1, 5), [(1, 1), (1, 2), (1, 3), (1, 4)]),
    ((1, 0), (-1, -2), [(0, -1)]),
    ((1, 0), (0, 1), []),
    ((0, 1), (-2, -3), [(-1, -1)]),
])
def test_hirzebruch_jung(u, v, expected):
    assert hirzebruch_jung_rays(u, v) == expected


@given(st.tuples(st.integers(-7, 7), st.integers(-7, 7)), st.tuples(st.integers(-7, 7), st.integers(-7, 7)))
def test_hirzebruch_jung_chain_is_smooth(u, v):
    assume(any(u) and any(v))
    u, v = primitive(u), primitive(v)
    assume(det([u, v]) != 0)
    chain = [u] + hirzebruch_jung_rays(u, v) + [v]
    sign = 1 if det([u, v]) > 0 else -1
    for a, b in zip(chain, chain[1:]):
        assert sign * det([a, b]) == 1
    c = Cone.from_generators([u, v])
    assert all(c.in_relative_interior(w) for w in chain[1:-1])


def test_resolve_smooth_is_fixed_point():
    f = corpus.projective_space(2)
    g, m = resolve_to_smooth(f)
    assert g is f


def test_resolve_p112_adds_one_ray():
    g, m = resolve_to_smooth(corpus.weighted_p112())
    assert g.is_smooth and g.is_complete
    assert set(g.rays) - set(corpus.weighted_p112().rays) == {(0, -1)}


def test_resolve_cone_chain():
    f = Fan.from_cones([(1, 0), (1, 5)], [(0, 1)])
    g, m = resolve_to_smooth(f)
    assert g.is_smooth
    assert sorted(g.rays) == [(1, 0), (1, 1), (1, 2), (1, 3), (1, 4), (1, 5)]
    for k in g.maximal:
        assert abs(det([g.rays[i] for i in k])) == 1


def test_resolve_rank3():
    f = Fan.from_cones([(1, 0, 0), (0, 1, 0), (1, 1, 2)], [(0, 1, 2)])
    g, m = resolve_to_smooth(f)
    assert g.is_smooth
    assert all(m.carrier[k] == (0, 1, 2) for k in g.maximal)


def test_resolve_rank3_non_simplicial():
    f = Fan.from_cones([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], [(0, 1, 2, 3)])
    g, _ = resolve_to_smooth(f)
    assert g.is_smooth


def test_resolve_rank4_refused():
    f = Fan.from_cones([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 1, 1, 2)], [(0, 1, 2, 3)])
    with pytest.raises(FanError, match="resolution not guaranteed"):
        resolve_to_smooth(f)


@pytest.mark.parametrize("seed", range(8))
def test_random_stellar_preserves_support(seed):
    rng = random.Random(seed)
    f = corpus.random_complete_fan_2d(rng)
    for _ in range(3):
        v = (rng.randint(-6, 6), rng.randint(-6, 6))
        if not any(v):
            continue
        g, m = stellar_subdivision(f, primitive(v))
        assert validate_fan(g).complete
        for k in g.maximal:
            coarse = [c for c in f.maximal if all(f.cone(c).contains(g.rays[i]) for i in k)]
            assert len(coarse) == 1 and m.same_dimension_image(k) == coarse[0]
        f = g


@pytest.mark.parametrize("seed", range(6))
def test_resolution_of_random_fans(seed):
    f = corpus.random_complete_fan_2d(random.Random(100 + seed))
    g, m = resolve_to_smooth(f)
    r = validate_fan(g)
    assert r.smooth and r.complete
    composed = m.compose(RefinementMap.identity(f))
    assert composed.carrier == m.carrier


def test_refinement_compose():
    f = Fan.from_cones([(1, 0), (1, 4)], [(0, 1)])
    g1, m1 = stellar_subdivision(f, (1, 2))
    g2, m2 = stellar_subdivision(g1, (1, 1))
    both = m2.compose(m1)
    assert both.fine is g2 and both.coarse is f
    assert all(both.same_dimension_image(k) == (0, 1) for k in g2.maximal)


def test_polytope_vertices_and_points():
    p = LatticePolytope.from_points([(0, 0), (2, 0), (0, 2), (1, 1), (1, 0)])
    assert sorted(p.vertices) == [(0, 0), (0, 2), (2, 0)]
    assert len(p.lattice_points()) == 6


def test_normal_fan_segment():
    f, keys = normal_fan(LatticePolytope.from_points([(0,), (5,)]))
    assert f == corpus.projective_space(1)
    assert f.rays[keys[(0,)][0]] == (1,)
    assert f.rays[keys[(5,)][0]] == (-1,)


def test_normal_fan_square_and_triangle():
    sq, _ = normal_fan(corpus.cube(1))
    assert sq == corpus.p1_times_p1()
    tri, keys = normal_fan(LatticePolytope.from_points([(0, 0), (1, 0), (0, 1)]))
    assert tri == corpus.projective_space(2)
    assert set(tri.rays[i] for i in keys[(0, 0)]) == {(1, 0), (0, 1)}


def test_normal_fan_needs_full_dimension():
    with pytest.raises(FanError):
        normal_fan(LatticePolytope.from_points([(0, 0), (1, 1)]))


@pytest.mark.parametrize("seed", range(10))
def test_normal_fans_of_random_polygons(seed):
    p = corpus.random_polygon(random.Random(seed))
    f, keys = normal_fan(p)
    assert validate_fan(f).complete
    assert len(f.maximal) == len(p.vertices)


def test_cube_normal_fan_rank3():
    f, _ = normal_fan(corpus.cube(2, 3))
    r = validate_fan(f)
    assert r.complete and r.smooth and r.counts == {0: 1, 1: 6, 2: 12, 3: 8}
