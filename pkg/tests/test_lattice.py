from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_todd.lattice import (
    LatticeError,
    det,
    hermite_basis,
    integer_kernel,
    lattice_index,
    primitive_vector,
    rank,
    saturated_span_basis,
    smith_decomposition,
    solve_left,
    unit_combination,
)

from oracles import det as det_oracle

small = st.integers(-6, 6)


@pytest.mark.parametrize("v, expected", [((2, 4), (1, 2)), ((1, 0), (1, 0)), ((-3, 6, -9), (-1, 2, -3))])
def test_primitive_vector(v, expected):
    assert primitive_vector(v) == expected


def test_primitive_vector_rejects_zero():
    with pytest.raises(LatticeError, match="no primitive representative"):
        primitive_vector((0, 0))


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_matches_leibniz(m):
    assert det(m) == det_oracle(m)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4))
def test_hermite_basis_spans_same_lattice(rows):
    h = hermite_basis(rows)
    assert len(h) == rank(rows)
    for r in rows:
        coeffs = solve_left(h, r)
        assert coeffs is not None and all(c.denominator == 1 for c in coeffs)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=3))
def test_smith_decomposition_is_diagonal(rows):
    diag, s, t = smith_decomposition(rows)
    n, m = len(rows), 3
    prod = [[sum(s[i][k] * sum(rows[k][l] * t[l][j] for l in range(m)) for k in range(n)) for j in range(m)]
            for i in range(n)]
    for i in range(n):
        for j in range(m):
            expected = diag[i] if (i == j and i < len(diag)) else 0
            assert prod[i][j] == expected
    assert abs(det(s)) == 1 and abs(det(t)) == 1


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=2))
def test_integer_kernel_is_saturated(rows):
    ker = integer_kernel(rows, 3)
    assert len(ker) == 3 - rank(rows)
    for k in ker:
        assert all(sum(a * b for a, b in zip(r, k)) == 0 for r in rows)
    if ker:
        assert lattice_index(ker) == 1


@given(st.lists(small, min_size=1, max_size=4).filter(lambda v: any(v)))
def test_unit_combination(v):
    p = primitive_vector(v)
    y = unit_combination(p)
    assert sum(a * b for a, b in zip(y, p)) == 1


def test_saturated_span_contains_half_points():
    basis = saturated_span_basis([(1, 0, 1), (1, 2, 1)], 3)
    assert solve_left(basis, (1, 1, 1)) is not None
    assert all(c.denominator == 1 for c in solve_left(basis, (1, 1, 1)))


def test_solve_left_outside_span():
    assert solve_left([(1, 0, 0)], (0, 1, 0)) is None
    assert solve_left([(2, 0)], (1, 0)) == (Fraction(1, 2),)
