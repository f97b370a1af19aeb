import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_todd import corpus
from toric_todd.cones import Cone, ConeError
from toric_todd.fans import Fan, FanError, LatticePolytope
from toric_todd.genfun import RationalGenFun, gf_equals, iter_generic_directions
from toric_todd.polys import LaurentPoly
from toric_todd.todd import (
    ToddError,
    a_sigma,
    brion_character,
    brion_terms,
    count_lattice_points,
    equivariant_todd,
    lattice_point_character,
    smooth_crosscheck,
    subdivision_crosscheck,
)

from oracles import convex_hull_2d, polygon_points


def mono(*e):
    return LaurentPoly.monomial(e)


def test_a_sigma_orthant():
    got = a_sigma(Cone.from_generators([(1, 0), (0, 1)]))
    assert got == RationalGenFun.make(mono(0, 0), [(1, 0), (0, 1)])


def test_a_sigma_multiplicity_two():
    # dual of cone{(1,0),(1,2)} is cone{(0,1),(2,-1)} with two parallelepiped points
    got = a_sigma(Cone.from_generators([(1, 0), (1, 2)]))
    assert got == RationalGenFun.make(mono(0, 0) + mono(1, 0), [(0, 1), (2, -1)])


def test_a_sigma_needs_full_dimension():
    with pytest.raises(ConeError):
        a_sigma(Cone.from_generators([(1, 0)], 2))


def test_todd_p1():
    f = corpus.projective_space(1)
    t = equivariant_todd(f)
    pos = f.rays.index((1,))
    assert t.coefficients[(pos,)] == RationalGenFun.geometric((1,))
    assert t.coefficients[(1 - pos,)] == RationalGenFun.geometric((-1,))
    assert t.total() == 1


def test_todd_requires_complete_fan():
    with pytest.raises(FanError, match="complete fan"):
        equivariant_todd(Fan.from_cones([(1, 0), (0, 1)], [(0, 1)]))


def test_todd_json_is_canonical():
    a = Fan.from_cones([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    b = Fan.from_cones([(-1, -1), (0, 1), (1, 0)], [(1, 2), (0, 1), (0, 2)])
    assert equivariant_todd(a).to_json() == equivariant_todd(b).to_json()


@pytest.mark.parametrize("name", sorted(corpus.NAMED_FANS))
def test_unit_identity_named(named, name):
    assert equivariant_todd(named[name]).total() == 1


def test_brion_segment_terms():
    terms = dict(brion_terms(corpus.segment(5)))
    assert terms[(0,)] == RationalGenFun.geometric((1,))
    assert terms[(5,)] == RationalGenFun.make(mono(5), [(-1,)])


@pytest.mark.parametrize("p, n", [
    (corpus.segment(5), 6),
    (corpus.simplex(3), 10),
    (corpus.cube(2), 9),
    (corpus.cube(2, 3), 27),
    (LatticePolytope.from_points([(0, 0), (2, 0), (0, 2)]), 6),
])
def test_count_examples(p, n):
    assert count_lattice_points(p) == n


@pytest.mark.parametrize("n", range(1, 6))
def test_count_simplex(n):
    assert count_lattice_points(corpus.simplex(n)) == comb(n + 2, 2)


@given(st.integers(0, 10**6))
def test_count_random_polygon(seed):
    p = corpus.random_polygon(random.Random(seed))
    hull = convex_hull_2d(p.vertices)
    assert count_lattice_points(p) == len(polygon_points(hull))


@pytest.mark.parametrize("seed", range(4))
def test_count_independent_of_direction(seed):
    p = corpus.random_polygon(random.Random(seed))
    denoms = [w for _, t in brion_terms(p) for w in t.denominator]
    dirs = iter_generic_directions(denoms, 2)
    counts = {count_lattice_points(p, xi=next(dirs)) for _ in range(3)}
    assert counts == {len(p.lattice_points())}


def test_count_with_low_order_still_exact():
    # the constant term only needs enough terms to cancel the poles
    assert count_lattice_points(corpus.cube(3), order=0) == 16


@pytest.mark.parametrize("p", [corpus.segment(3), corpus.simplex(2), corpus.cube(1, 3)])
def test_character_matches_points(p):
    assert gf_equals(brion_character(p), lattice_point_character(p))


def test_todd_error_is_value_error():
    assert issubclass(ToddError, ValueError)


@pytest.mark.parametrize("name", ["P1", "P2", "P1xP1", "F2", "P3"])
def test_smooth_crosscheck(named, name):
    r = smooth_crosscheck(named[name])
    assert r.passed, r.details
    assert set(r.details.values()) == {"equal"}


def test_smooth_crosscheck_rejects_singular():
    with pytest.raises(FanError):
        smooth_crosscheck(corpus.weighted_p112())


@pytest.mark.parametrize("name", ["P112", "P123", "P2"])
def test_subdivision_crosscheck(named, name):
    r = subdivision_crosscheck(named[name])
    assert r.passed, r.details


def test_subdivision_crosscheck_long_chain():
    # complete fan containing the multiplicity-5 cone {(1,0),(1,5)}
    f = Fan.from_cones([(1, 0), (1, 5), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    assert f.is_complete
    r = subdivision_crosscheck(f)
    assert r.passed and r.details["new_rays"] >= 4


@pytest.mark.parametrize("seed", range(3))
def test_subdivision_crosscheck_random(seed):
    f = corpus.random_complete_fan_2d(random.Random(500 + seed))
    assert subdivision_crosscheck(f).passed
