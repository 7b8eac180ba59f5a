import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from szego.algebra import (CircleGrid, Poly, RationalFunction, conj_reflect,
                           grid_transform, interpolate, next_pow2,
                           polymatrix_det_minors, root_free_on_closed_disc,
                           szego_project, trim_coeffs)
from szego.errors import InputError, NotAnalyticError


def test_next_pow2():
    assert next_pow2(1) == 1
    assert next_pow2(2) == 2
    assert next_pow2(3) == 4
    assert next_pow2(17) == 32


def test_trim_drops_trailing_zeros():
    assert trim_coeffs([1.0, 2.0, 0.0, 0.0]).size == 2
    # the zero polynomial is stored with no coefficients at all
    assert trim_coeffs([0.0]).size == 0
    assert Poly.zero().coeffs.size == 0


def test_poly_arithmetic_and_eval():
    p = Poly([1.0, 2.0])          # 1 + 2z
    q = Poly([3.0, 1.0])          # 3 + z
    prod = p * q
    assert np.allclose(prod.coeffs, [3.0, 7.0, 2.0])
    assert prod.degree == 2
    z = 0.3 + 0.1j
    assert abs(prod(z) - p(z) * q(z)) < 1e-14
    assert np.allclose((p + q).coeffs, [4.0, 3.0])
    assert np.allclose((p - q).coeffs, [-2.0, 1.0])
    assert np.allclose((2.0 * p).coeffs, [2.0, 4.0])


def test_poly_degree_after_cancellation():
    p = Poly([1.0, 1.0]) - Poly([0.0, 1.0])
    assert p.degree == 0
    assert bool(Poly.zero()) is False
    assert bool(Poly.one()) is True


def test_poly_roots_match_construction():
    roots = np.array([0.5, -0.25 + 0.3j, 1.5])
    c = np.ones(1, dtype=complex)
    for a in roots:
        c = np.convolve(c, [-a, 1.0])
    got = np.sort_complex(Poly(c).roots())
    assert np.allclose(got, np.sort_complex(roots), atol=1e-10)


def test_conj_reflect_hand_value():
    # reflect(p, d)(z) = z^d * conj(p(1 / conj(z)))
    p = Poly([1.0, -0.5j])
    r = conj_reflect(p, 1)
    assert np.allclose(r.coeffs, [0.5j, 1.0])
    # degree padding: reflecting a constant at d = 2 gives c* z^2
    r2 = conj_reflect(Poly([2.0 + 1.0j]), 2)
    assert np.allclose(r2.coeffs, [0.0, 0.0, 2.0 - 1.0j])


@given(st.lists(st.complex_numbers(max_magnitude=10.0, allow_nan=False,
                                   allow_infinity=False),
                min_size=1, max_size=6))
@settings(max_examples=50, deadline=None)
def test_conj_reflect_is_an_involution(coeffs):
    p = Poly(np.array(coeffs, dtype=complex))
    d = max(p.degree, len(coeffs) - 1)
    back = conj_reflect(conj_reflect(p, d), d)
    assert np.allclose(back.padded(d + 1), p.padded(d + 1), atol=1e-12)


@given(st.lists(st.floats(-5.0, 5.0), min_size=1, max_size=5),
       st.lists(st.floats(-5.0, 5.0), min_size=1, max_size=5))
@settings(max_examples=50, deadline=None)
def test_poly_multiplication_commutes(a, b):
    p, q = Poly(np.array(a)), Poly(np.array(b))
    left, right = p * q, q * p
    n = max(left.coeffs.size, right.coeffs.size)
    assert np.allclose(left.padded(n), right.padded(n), atol=1e-9)


def test_root_free_on_closed_disc():
    assert root_free_on_closed_disc(Poly([1.0, -0.5]))          # root at 2
    assert not root_free_on_closed_disc(Poly([1.0, -2.0]))      # root at 0.5
    assert not root_free_on_closed_disc(Poly([1.0, -1.0]), margin=1e-6)


def test_rational_taylor_geometric():
    rf = RationalFunction(Poly([1.0]), Poly([1.0, -0.5]))
    assert np.allclose(rf.taylor(8), 0.5 ** np.arange(8))
    z = 0.2 + 0.1j
    assert abs(rf(z) - 1.0 / (1.0 - 0.5 * z)) < 1e-14


def test_rational_rejects_pole_inside_disc():
    with pytest.raises(NotAnalyticError):
        RationalFunction(Poly([1.0]), Poly([1.0, -2.0]))


def test_rational_normalizes_denominator_at_zero():
    rf = RationalFunction(Poly([2.0]), Poly([2.0, -1.0]))
    assert abs(rf.den.coeffs[0] - 1.0) < 1e-14
    assert np.allclose(rf.taylor(4), 0.5 ** np.arange(4))


def test_grid_transform_interpolate_roundtrip(rng):
    c = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    p = Poly(c)
    grid = grid_transform(p, 16)
    assert isinstance(grid, CircleGrid)
    back = interpolate(grid, 5)
    assert np.allclose(back.padded(6), c, atol=1e-12)


def test_polymatrix_det_matches_pointwise(rng):
    q = 3
    entries = [[Poly(rng.standard_normal(3) + 1j * rng.standard_normal(3))
                for _ in range(q)] for _ in range(q)]
    det, minors = polymatrix_det_minors(entries, degree_bound=3 * 2)
    for z in np.exp(2j * np.pi * rng.random(5)):
        m = np.array([[entries[k][j](z) for j in range(q)] for k in range(q)])
        assert abs(det(z) - np.linalg.det(m)) < 1e-9 * max(1.0, abs(np.linalg.det(m)))
        sub = np.delete(np.delete(m, 1, axis=0), 2, axis=1)
        assert abs(minors[1][2](z) - np.linalg.det(sub)) < 1e-9


def test_polymatrix_det_rejects_ragged_input():
    with pytest.raises(InputError):
        polymatrix_det_minors([[Poly.one()], [Poly.one(), Poly.one()]], 1)


def test_szego_project_drops_negative_modes():
    # Laurent coefficients for indices -1, 0, 1 with start = -1
    out = szego_project(np.array([9.0, 1.0, 2.0]), start=-1)
    assert np.allclose(out, [1.0, 2.0])
    # already analytic input is unchanged
    out2 = szego_project(np.array([1.0, 2.0]), start=0)
    assert np.allclose(out2, [1.0, 2.0])
