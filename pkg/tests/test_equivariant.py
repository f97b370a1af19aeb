import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_todd import corpus
from toric_todd.cones import Cone
from toric_todd.equivariant import (
    LOCALIZED,
    POLYNOMIAL,
    EquivariantError,
    HomologyClass,
    PiecewisePoly,
    TruncatedPoly,
    cech_cohomology_dims,
    courant_and_phi,
    homology_presentation,
    localized_pd_restrict,
    nonequivariant_ranks,
    piecewise_poly_dims,
    pushforward_subdivision,
    smooth_todd_series,
    todd_coefficients,
)
from toric_todd.fans import Fan, FanError, RefinementMap, stellar_subdivision
from toric_todd.genfun import RationalGenFun, cone_generating_function
from toric_todd.polys import Polynomial
from toric_todd.todd import equivariant_todd

from oracles import box, h_vector_ranks, in_simplicial_cone, stanley_reisner_dims


def key_of(f, *rays):
    return tuple(sorted(f.rays.index(r) for r in rays))


def relation_for(rels, source, form):
    return next(r for r in rels if r.source == source and r.form == form)


def test_p1_presentation():
    f = corpus.projective_space(1)
    gens, rels = homology_presentation(f)
    assert len(gens) == 3
    rel = relation_for(rels, (), (1,))
    assert dict(rel.terms) == {key_of(f, (1,)): 1, key_of(f, (-1,)): -1}


def test_maximal_cones_give_no_relations():
    f = corpus.projective_space(2)
    _, rels = homology_presentation(f)
    assert not [r for r in rels if r.source in f.maximal]


def test_p2_presentation_example():
    f = corpus.projective_space(2)
    _, rels = homology_presentation(f)
    rel = relation_for(rels, key_of(f, (1, 0)), (0, 1))
    assert dict(rel.terms) == {key_of(f, (1, 0), (0, 1)): 1, key_of(f, (1, 0), (-1, -1)): -1}


def _brute_cofacet_pairing(sigma_rays, tau_rays, l, bound=6):
    d = len(l)
    vals = set()
    for p in box(bound, d):
        if len(tau_rays) == d and in_simplicial_cone(tau_rays, p):
            v = sum(a * b for a, b in zip(l, p))
            if v:
                vals.add(v)
    # the generator pairs with l at the smallest nonzero value of the right sign
    pos = [v for v in vals if v > 0]
    neg = [v for v in vals if v < 0]
    return min(pos) if pos else max(neg)


@pytest.mark.parametrize("name", ["P2", "P112", "P123", "F2"])
def test_relation_soundness(named, name):
    f = named[name]
    _, rels = homology_presentation(f)
    for rel in rels:
        if len(rel.source) != 1:
            continue
        sigma = [f.rays[i] for i in rel.source]
        for tau, n in rel.terms:
            assert n == _brute_cofacet_pairing(sigma, [f.rays[i] for i in tau], rel.form)


@pytest.mark.parametrize("name, ranks", [("P2", [1, 1, 1]), ("P1xP1", [1, 2, 1]), ("P112", [1, 1, 1]),
                                         ("P1", [1, 1]), ("F2", [1, 2, 1]), ("P3", [1, 1, 1, 1])])
def test_nonequivariant_ranks(named, name, ranks):
    f = named[name]
    assert nonequivariant_ranks(f) == ranks
    d = f.ambient_rank
    assert nonequivariant_ranks(f) == h_vector_ranks([len(f.cones_of_dim(i)) for i in range(1, d + 1)])


@pytest.mark.parametrize("seed", range(5))
def test_ranks_match_h_vector_on_random_fans(seed):
    f = corpus.random_complete_fan_2d(random.Random(seed))
    assert nonequivariant_ranks(f) == h_vector_ranks([len(f.cones_of_dim(1)), len(f.cones_of_dim(2))])


def test_generator_is_indicator():
    f = corpus.projective_space(2)
    k = f.maximal[1]
    g = HomologyClass.generator(f, k)
    for c in f.cones:
        assert g.coefficient(c) == (1 if c == k else 0)
    assert g.degree_of(k) == 0 and g.degree_of(()) == 4


def test_class_rejects_foreign_cone():
    with pytest.raises(EquivariantError):
        HomologyClass(corpus.projective_space(2), {(0, 1, 2): Polynomial.constant(2, 1)})


def _split_cone():
    f = Fan.from_cones([(1, 0), (1, 2)], [(0, 1)])
    g, m = stellar_subdivision(f, (1, 1))
    return f, g, m


def test_pushforward_identity():
    f = corpus.projective_space(2)
    c = HomologyClass(f, {k: Polynomial.linear_form((i, 1)) for i, k in enumerate(f.cones)})
    assert pushforward_subdivision(RefinementMap.identity(f), c).equals(c)


def test_pushforward_sums_unit_coefficients():
    f, g, m = _split_cone()
    one = Polynomial.constant(2, 1)
    c = HomologyClass(g, {k: one for k in g.maximal})
    out = pushforward_subdivision(m, c)
    assert out.coefficient((0, 1)) == 2
    assert out.support() == [(0, 1)]


def test_pushforward_localized_additivity():
    f, g, m = _split_cone()
    c = HomologyClass(g, {k: cone_generating_function(_dual(g, k)) for k in g.maximal}, LOCALIZED)
    out = pushforward_subdivision(m, c)
    assert out.coefficient((0, 1)) == cone_generating_function(_dual(f, (0, 1)))


def _dual(f, k):
    from toric_todd.cones import dual_cone

    return dual_cone(f.cone(k))


def test_pushforward_rejects_wrong_fan():
    f, g, m = _split_cone()
    with pytest.raises(EquivariantError):
        pushforward_subdivision(m, HomologyClass.generator(f, (0, 1)))


@given(st.integers(0, 10**6), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_pushforward_commutes_with_characters(seed, m_vec):
    rng = random.Random(seed)
    f = corpus.random_complete_fan_2d(rng, n_rays=4)
    v = (rng.randint(-5, 5), rng.randint(-5, 5))
    if not any(v):
        v = (1, 1)
    from oracles import primitive

    g, rmap = stellar_subdivision(f, primitive(v))
    c = HomologyClass(g, {k: Polynomial.linear_form((rng.randint(-3, 3), rng.randint(-3, 3))) + rng.randint(-2, 2)
                          for k in g.cones})
    lhs = pushforward_subdivision(rmap, c.times_character(m_vec))
    rhs = pushforward_subdivision(rmap, c).times_character(m_vec)
    assert lhs.equals(rhs)
    loc = HomologyClass(g, {k: RationalGenFun.geometric((1, 0)) for k in g.maximal}, LOCALIZED)
    assert pushforward_subdivision(rmap, loc.times_character(m_vec)).equals(
        pushforward_subdivision(rmap, loc).times_character(m_vec))


def test_courant_functions_p2():
    f = corpus.projective_space(2)
    xi, phi = courant_and_phi(f)
    e1 = f.rays.index((1, 0))
    x, y = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    assert xi[e1].piece(key_of(f, (1, 0), (0, 1))) == x
    assert xi[e1].piece(key_of(f, (1, 0), (-1, -1))) == x - y
    assert xi[e1].piece(key_of(f, (0, 1), (-1, -1))) == 0
    top = key_of(f, (1, 0), (0, 1))
    assert phi[top].piece(top) == x * y
    for k in f.maximal:
        if k != top:
            assert phi[top].piece(k) == 0


def test_phi_carries_multiplicity():
    f = corpus.weighted_p112()
    _, phi = courant_and_phi(f)
    sing = key_of(f, (1, 0), (-1, -2))
    x, y = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    # dual basis of (1,0),(-1,-2) is (1,-1/2),(0,-1/2); phi = 2 * product
    assert phi[sing].piece(sing) == (x - y.scale(Fraction(1, 2))) * y.scale(-1)


@pytest.mark.parametrize("name", ["P2", "P112", "P123", "F2", "P1xP1", "P3"])
def test_courant_and_phi_continuous_and_supported(named, name):
    f = named[name]
    xi, phi = courant_and_phi(f)
    for pp in list(xi.values()) + list(phi.values()):
        assert pp.is_continuous()
    for key, pp in phi.items():
        for k in f.maximal:
            if not set(key) <= set(k):
                assert pp.piece(k) == 0
        assert all(pp.piece(k).homogeneous_part(len(key)) == pp.piece(k) for k in f.maximal)


def test_discontinuity_detected():
    f = corpus.projective_space(1)
    x = Polynomial.variable(0, 1)
    assert not PiecewisePoly(f, {(0,): x + 1, (1,): x}).is_continuous()
    assert PiecewisePoly(f, {(0,): x + 1, (1,): x.scale(-3) + 1}).is_continuous()


def test_courant_needs_simplicial_complete():
    with pytest.raises(FanError):
        courant_and_phi(Fan.from_cones([(1, 0), (0, 1)], [(0, 1)]))


def test_pd_restrict_generator():
    f = corpus.projective_space(2)
    k = f.maximal[0]
    out = localized_pd_restrict(HomologyClass.generator(f, k, LOCALIZED))
    _, phi = courant_and_phi(f)
    assert out[k].expand(3) == phi[k].piece(k)
    for other in f.maximal:
        if other != k:
            assert out[other].expand(3) == 0


def test_pd_restrict_zero_class():
    f = corpus.projective_space(1)
    out = localized_pd_restrict(HomologyClass(f, {}, LOCALIZED))
    assert all(r.expand(4) == 0 for r in out.values())


def test_pd_restrict_p1_unit_identity():
    f = corpus.projective_space(1)
    out = localized_pd_restrict(equivariant_todd(f).as_homology_class())
    total = RationalGenFun.zero(1)
    for r in out.values():
        total = total + r.genfun
    assert total == 1
    # f|_sigma / phi_sigma summed over cones: Td(x)/x + Td(-x)/(-x) = 1 in degree zero
    x = Polynomial.variable(0, 1)
    pos, neg = out[key_of(f, (1,))], out[key_of(f, (-1,))]
    assert pos.factor == x and neg.factor == -x
    diff = pos.expand(3) - neg.expand(3)
    assert diff.divide_linear(x).truncate(2) == 1


def test_pd_restrict_rejects_non_maximal():
    f = corpus.projective_space(1)
    with pytest.raises(EquivariantError):
        localized_pd_restrict(HomologyClass.generator(f, (), LOCALIZED))


def test_todd_coefficients():
    assert todd_coefficients(4) == (1, Fraction(1, 2), Fraction(1, 12), 0, Fraction(-1, 720))


def test_smooth_todd_series_p1():
    f = corpus.projective_space(1)
    s = smooth_todd_series(f, key_of(f, (1,)), 4)
    assert s.poly == Polynomial(1, {(0,): 1, (1,): Fraction(1, 2), (2,): Fraction(1, 12), (4,): Fraction(-1, 720)})


def test_smooth_todd_series_p2_degree2():
    f = corpus.projective_space(2)
    s = smooth_todd_series(f, key_of(f, (1, 0), (0, 1)), 2)
    x, y = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    expected = 1 + (x + y).scale(Fraction(1, 2)) + (x * x + y * y).scale(Fraction(1, 12)) + (x * y).scale(
        Fraction(1, 4))
    assert s == TruncatedPoly(expected, 2)
    for k in f.maximal:
        assert smooth_todd_series(f, k, 3).poly.coefficient((0, 0)) == 1


def test_smooth_todd_series_rejects_singular():
    f = corpus.weighted_p112()
    with pytest.raises(EquivariantError):
        smooth_todd_series(f, key_of(f, (1, 0), (-1, -2)), 2)


def test_point_fan_cohomology():
    f = Fan.from_cones([], [], 2)
    assert cech_cohomology_dims(f, 4) == [1, 0, 0, 0, 0]


@pytest.mark.parametrize("name", ["P1", "P2", "P1xP1", "P112", "F2", "P123"])
def test_cech_matches_piecewise(named, name):
    f = named[name]
    d = f.ambient_rank
    dims = cech_cohomology_dims(f, 2 * d)
    for n, v in enumerate(dims):
        if n % 2:
            assert v == 0
        else:
            assert v == piecewise_poly_dims(f, n // 2)


def test_p1_cech_dims():
    assert cech_cohomology_dims(corpus.projective_space(1), 6) == [1, 0, 2, 0, 2, 0, 2]


@pytest.mark.parametrize("name", ["P2", "P1xP1", "P112", "P3"])
def test_piecewise_dims_match_stanley_reisner(named, name):
    f = named[name]
    d = f.ambient_rank
    fv = [len(f.cones_of_dim(i)) for i in range(1, d + 1)]
    for k in range(4):
        assert piecewise_poly_dims(f, k) == stanley_reisner_dims(fv, k)


def test_piecewise_dims_p2():
    f = corpus.projective_space(2)
    assert [piecewise_poly_dims(f, k) for k in range(3)] == [1, 3, 6]


def test_piecewise_needs_complete():
    with pytest.raises(FanError):
        piecewise_poly_dims(Fan.from_cones([(1, 0), (0, 1)], [(0, 1)]), 1)


def test_cech_for_incomplete_fan():
    # a single smooth cone: cohomology is the polynomial ring in two variables
    f = Fan.from_cones([(1, 0), (0, 1)], [(0, 1)])
    assert cech_cohomology_dims(f, 4) == [1, 0, 2, 0, 3]
