import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from loopfact.errors import DomainError, ParseError, TruncationError
from loopfact.loops import (NEGATIVE, POSITIVE, CircleSampling, LaurentPoly, MatrixLoop,
                            elementary_loop, evaluate, exp_series, loop_from_doc, loop_to_doc,
                            poly_from_doc, poly_to_doc, torus_loop)

from conftest import complexes, rand_c


def polys(max_width=4, scale=1.0):
    return st.builds(
        lambda lo, cs: LaurentPoly.from_array(lo, cs),
        st.integers(-4, 4), st.lists(complexes(scale), min_size=0, max_size=max_width))


def test_zero_and_window():
    p = LaurentPoly({-2: 1.0, 3: 0.0, 1: 2j})
    assert p.window == (-2, 1)
    assert LaurentPoly().is_zero()
    assert LaurentPoly.from_array(5, [0, 0]).is_zero()
    assert p[-2] == 1 and p[0] == 0 and p[7] == 0


def test_from_negative_and_positive():
    p = LaurentPoly.from_negative([1, 2, 3])
    assert p.to_dict() == {-1: 1, -2: 2, -3: 3}
    assert list(p.negative_coeffs(3)) == [1, 2, 3]
    q = LaurentPoly.from_positive([5, 6], start=2)
    assert q.to_dict() == {2: 5, 3: 6}


def test_star_is_conjugate_on_circle():
    p = LaurentPoly({-1: 1 + 2j, 2: 3j})
    z = CircleSampling(16).points
    np.testing.assert_allclose(p.star()(z), np.conj(p(z)))


@given(polys(), polys())
def test_product_matches_pointwise(p, q):
    z = CircleSampling(32).points
    np.testing.assert_allclose((p * q)(z), p(z) * q(z), atol=1e-12)


@given(polys(), polys())
def test_sum_and_split(p, q):
    s = p + q
    assert s.allclose(s.singular_part() + s.plus_part(), 0)
    assert (s - q).allclose(p, 1e-12)


def test_series_inverse():
    p = LaurentPoly({0: 2.0, 1: 0.5, 3: -1j})
    inv = p.series_inverse(10)
    prod = (p * inv).restrict(0, 10)
    assert prod.allclose(LaurentPoly.constant(1.0), 1e-14)
    with pytest.raises(DomainError):
        LaurentPoly({0: 0.0, 1: 1.0}).series_inverse(3)
    with pytest.raises(DomainError):
        LaurentPoly({-1: 1.0, 0: 1.0}).series_inverse(3)


def test_fft_coefficients_oracle():
    p = LaurentPoly({-3: 1j, 0: 2.0, 4: -0.5})
    s = CircleSampling.for_window(-3, 4)
    assert s.coefficients(p(s.points), -3, 4).allclose(p, 1e-13)


def test_evaluate_off_circle():
    g = MatrixLoop.identity()
    with pytest.raises(DomainError):
        evaluate(g, 1.5)
    np.testing.assert_allclose(evaluate(g, 1j), np.eye(2))


@pytest.mark.parametrize("orientation", [NEGATIVE, POSITIVE])
@pytest.mark.parametrize("j", [0, 1, 3])
def test_elementary_loop_is_su2(orientation, j):
    g = elementary_loop(j, 0.7 - 0.4j, orientation)
    assert g.unitarity_residual() < 1e-14
    assert g.det().allclose(LaurentPoly.constant(1.0), 1e-14)


def test_elementary_loop_display():
    g = elementary_loop(1, 1.0)
    s = 2 ** -0.5
    assert g.allclose(MatrixLoop(s, LaurentPoly({-1: s}), LaurentPoly({1: -s}), s), 1e-15)
    with pytest.raises(ValueError):
        elementary_loop(1, 1.0, "sideways")


def test_matrix_algebra(rng):
    a = elementary_loop(2, rand_c(rng, 1)[0])
    b = elementary_loop(1, rand_c(rng, 1)[0])
    z = CircleSampling(32).points
    np.testing.assert_allclose((a @ b)(z), a(z) @ b(z), atol=1e-13)
    assert (a @ a.adjugate()).allclose(MatrixLoop.identity(), 1e-13)
    assert (a.star() @ a).max_abs_diff(MatrixLoop.identity()) < 1e-13


def test_conjugate_by_shift():
    g = elementary_loop(1, 0.5)
    h = g.conjugate_by_shift(1)
    assert h.b.window == (0, 0) and h.c.window == (0, 0)


def test_exp_series_matches_exp():
    chi = LaurentPoly({1: 0.3, 2: -0.2j})
    e = LaurentPoly.from_array(0, exp_series(chi, 40))
    z = CircleSampling(16).points
    np.testing.assert_allclose(e(z), np.exp(chi(z)), atol=1e-14)


def test_torus_loop_tail_and_unitarity():
    chi = LaurentPoly({1: 0.2, 3: 0.1j})
    t = torus_loop(chi)
    assert t.tail_bound <= 1e-10
    assert t.loop.unitarity_residual() < 1e-9
    z = CircleSampling(32).points
    ph = chi(z) - np.conj(chi(z))
    np.testing.assert_allclose(t.loop(z)[:, 0, 0], np.exp(ph), atol=1e-9)


def test_torus_loop_errors():
    with pytest.raises(DomainError):
        torus_loop(LaurentPoly({0: 1.0}))
    with pytest.raises(TruncationError) as exc:
        torus_loop(LaurentPoly({1: 3.0}), degree=4)
    assert exc.value.bound > 1e-10
    assert torus_loop(LaurentPoly()).loop.allclose(MatrixLoop.identity(), 0)


def test_document_round_trip():
    g = elementary_loop(2, 0.3 + 0.1j) @ elementary_loop(1, -0.2j)
    assert loop_from_doc(loop_to_doc(g)).allclose(g, 0)
    p = LaurentPoly({-1: 1j, 2: 3.0})
    assert poly_from_doc(poly_to_doc(p)) == p


@pytest.mark.parametrize("doc, where", [
    ({"entries": {"11": [], "12": []}}, "entries"),
    ({"entries": {"11": [[0.5, 1, 0]], "12": [], "21": [], "22": []}}, "entries.11[0]"),
    ({"entries": {"11": [[0, "x", 0]], "12": [], "21": [], "22": []}}, "entries.11[0]"),
    ([], ""),
])
def test_document_errors_carry_location(doc, where):
    with pytest.raises(ParseError) as exc:
        loop_from_doc(doc, "doc")
    assert where in exc.value.location
