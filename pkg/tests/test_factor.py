import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from loopfact.errors import ConsistencyError, DegenerateLoopError, DomainError
from loopfact.factor import (XCoords, ZetaCoords, birkhoff_factor, check_unipotent_shape,
                             factor_h, factor_unipotent, injectivity_margin, l_matrix,
                             ordered_product_loop, predicted_sigma, product_loop, triple_product,
                             x1_recursion, x1_series_check, x_from_loop, x_to_zeta,
                             x_to_zeta_bruteforce, y_from_eta, y_from_loop, zeta_to_x)
from loopfact.loops import POSITIVE, LaurentPoly, MatrixLoop, elementary_loop
from loopfact.toeplitz import sigma_values, toeplitz_det_product
from loopfact.weyl import diagram_automorphism

from conftest import coords, rand_c


# -- zeta -> x -----------------------------------------------------------------

def test_zeta_to_x_small_cases():
    z1, z2, z3 = 0.3 - 0.2j, 0.5j, -0.7 + 0.1j
    assert zeta_to_x([]).values == ()
    assert zeta_to_x([z1]).values == (z1,)
    x2 = zeta_to_x([z1, z2]).values
    assert x2[0] == pytest.approx(z1 * (1 + abs(z2) ** 2), abs=1e-15)
    assert x2[1] == z2
    x3 = zeta_to_x([z1, z2, z3]).values
    w3 = 1 + abs(z3) ** 2
    assert x3[0] == pytest.approx(z1 * (1 + abs(z2) ** 2) * w3 + z2 ** 2 * np.conj(z3) * w3, abs=1e-15)
    assert x3[1] == pytest.approx(z2 * w3, abs=1e-15)
    assert x3[2] == z3


@given(coords(1, 8, 2.0))
def test_top_coefficient_law(zs):
    assert zeta_to_x(zs).values[-1] == complex(zs[-1])


@given(coords(2, 8, 1.5))
def test_shift_law(zs):
    long = zeta_to_x(zs).as_array()
    short = zeta_to_x(zs[1:]).as_array()
    np.testing.assert_allclose(long[1:], short, rtol=1e-13, atol=1e-13 * max(1, np.abs(short).max()))


@given(coords(0, 8, 1.0))
def test_oracle_equivalence(zs):
    x = zeta_to_x(zs).as_array()
    y = x_from_loop(product_loop(zs)).as_array()
    if len(y) < len(x):  # trailing zeta equal to zero shortens the support
        y = np.concatenate([y, np.zeros(len(x) - len(y))])
    np.testing.assert_allclose(y, x, atol=1e-10 * max(1.0, np.abs(x).max(initial=0)))


@given(coords(0, 8, 1.0))
def test_round_trip(zs):
    z = np.array(zs, dtype=complex)
    back = x_to_zeta(zeta_to_x(z)).as_array()
    np.testing.assert_allclose(back, z, atol=1e-10)


@given(coords(1, 6, 1.0))
def test_peeling_matches_brute_force(xs):
    np.testing.assert_allclose(x_to_zeta(xs).as_array(), x_to_zeta_bruteforce(xs).as_array(),
                               atol=1e-9 * max(1, np.abs(xs).max()))


def test_x_to_zeta_examples():
    assert x_to_zeta([0, 0, 0]).values == (0, 0, 0)
    z1, z2 = 0.4 + 0.3j, -0.25j
    x = [z1 * (1 + abs(z2) ** 2), z2]
    np.testing.assert_allclose(x_to_zeta(x).as_array(), [z1, z2], atol=1e-15)


def test_random_x_round_trip(rng):
    x = rand_c(rng, 6, 1.0)
    np.testing.assert_allclose(zeta_to_x(x_to_zeta(x)).as_array(), x, atol=1e-10)


def test_x_from_loop_errors():
    assert x_from_loop(MatrixLoop.identity()).values == ()
    with pytest.raises(DegenerateLoopError):
        x_from_loop(MatrixLoop(LaurentPoly({-1: 1.0}), 0.0, 0.0, LaurentPoly({1: 1.0})))
    with pytest.raises(DomainError):
        x_from_loop(MatrixLoop(0.0, 1.0, -1.0, 0.0))
    with pytest.raises(DomainError):
        x_from_loop(MatrixLoop(1.0, 0.0, 0.0, LaurentPoly({-1: 1.0, 0: 1.0})))


@given(coords(1, 6, 1.0))
def test_x1_recursion(zs):
    ref = zeta_to_x(zs).values[0]
    assert x1_recursion(zs) == pytest.approx(ref, abs=1e-12 * max(1, abs(ref)))


def test_x1_examples(rng):
    assert x1_series_check([0.3j]) == 0.3j
    z1, z2 = 0.6, 0.5 - 0.5j
    assert x1_series_check([z1, z2]) == pytest.approx(z1 * (1 + abs(z2) ** 2))
    z = rand_c(rng, 5)
    assert x1_series_check(z) == pytest.approx(zeta_to_x(z).values[0], abs=1e-12)


def test_coordinate_containers():
    z = ZetaCoords((1, 2j))
    assert z.weighted_sum == pytest.approx(1 + 2 * 4)
    assert ZetaCoords((1, 1), start=0).weighted_sum == pytest.approx(1)
    x = XCoords((1, 2))
    assert x.poly.to_dict() == {-1: 1, -2: 2}
    assert XCoords.from_poly(x.poly) == x
    with pytest.raises(DomainError):
        XCoords.from_poly(LaurentPoly({1: 1.0}))


# -- product loops -----------------------------------------------------------

def test_product_loop_examples():
    assert product_loop([]).allclose(MatrixLoop.identity(), 0)
    s = 2 ** -0.5
    assert product_loop([1]).allclose(MatrixLoop(s, LaurentPoly({-1: s}), LaurentPoly({1: -s}), s), 1e-15)
    sv = sigma_values(product_loop([0.5, 0.25]))
    assert sv.sigma0_sq == pytest.approx(1 / 1.25 / 1.0625 ** 2)


@given(coords(0, 5, 1.0))
def test_product_loops_are_su2(zs):
    for fam in ("negative-power", "positive-power"):
        g = product_loop(zs, fam)
        assert g.unitarity_residual() < 1e-12
        assert g.det().allclose(LaurentPoly.constant(1.0), 1e-12)
    with pytest.raises(ValueError):
        product_loop(zs, "other")


@given(coords(0, 5, 1.0))
def test_automorphism_exchanges_families(zs):
    eta = np.array(zs, dtype=complex)
    zeta = -np.conj(eta)
    h = product_loop(eta, POSITIVE)
    assert diagram_automorphism(product_loop(zeta)).max_abs_diff(h) < 1e-13


# -- unipotent factorization ---------------------------------------------------

def test_factor_unipotent_trivial():
    f = factor_unipotent([])
    assert f.a == 1 and f.reconstruct().allclose(MatrixLoop.identity(), 0)


def test_factor_unipotent_one_mode():
    z = 0.8 - 0.3j
    w = 1 + abs(z) ** 2
    f = factor_unipotent([z])
    assert f.sigma.sigma0_sq == pytest.approx(1 / w)
    assert f.sigma.sigma1_sq == pytest.approx(1.0)
    assert f.a ** 2 == pytest.approx(w)
    # direct solve: gamma = -conj(z) z / (1 + |0|^2) since C(zx) = 0
    assert f.gamma.allclose(LaurentPoly({1: -np.conj(z)}), 1e-14)
    assert f.reconstruct().allclose(elementary_loop(1, z), 1e-14)


@given(coords(1, 6, 1.5))
def test_factor_unipotent_properties(xs):
    n = len(xs)
    if abs(xs[-1]) < 1e-3:
        xs = xs[:-1] + [0.5]
    f = factor_unipotent(xs)
    g = f.reconstruct()
    assert g.unitarity_residual() < 1e-9
    assert check_unipotent_shape(f, n)
    u0 = np.array([[f.upper[i, j][0] for j in range(2)] for i in range(2)])
    np.testing.assert_allclose(u0[0, 0], 1, atol=1e-12)
    np.testing.assert_allclose(u0[1, 1], 1, atol=1e-12)
    assert abs(u0[1, 0]) < 1e-12
    sv = sigma_values(g)
    assert f.a == pytest.approx(sv.a, rel=1e-9)
    z = x_to_zeta(xs).as_array()
    assert f.a == pytest.approx(math.sqrt(np.prod(1 + np.abs(z) ** 2)), rel=1e-9)
    assert g.max_abs_diff(product_loop(z)) < 1e-8 * max(1, f.a ** 2)


def test_factor_unipotent_rejects_holomorphic_x():
    with pytest.raises(DomainError):
        factor_unipotent(LaurentPoly({0: 1.0}))


# -- eta family --------------------------------------------------------------

def test_factor_h_constant():
    eta0 = 0.6 + 0.2j
    h = product_loop([eta0], POSITIVE)
    y = y_from_eta([eta0])
    assert y.values == (-np.conj(eta0),)
    f = factor_h(y)
    assert f.sigma.sigma0_sq == pytest.approx(1.0)
    assert f.sigma.sigma1_sq == pytest.approx(1 / (1 + abs(eta0) ** 2))
    assert f.reconstruct().max_abs_diff(h) < 1e-14


@given(coords(1, 4, 1.0))
def test_factor_h_product_formulas(es):
    eta = np.array(es, dtype=complex)
    h = product_loop(eta, POSITIVE)
    y, y2 = y_from_eta(eta).as_array(), y_from_loop(h).as_array()
    y2 = np.concatenate([y2, np.zeros(len(y) - len(y2))])  # trailing zeros drop out of the loop
    np.testing.assert_allclose(y, y2, atol=1e-11)
    f = factor_h(y_from_eta(eta))
    w = 1 + np.abs(eta) ** 2
    j = np.arange(len(eta))
    assert f.sigma.sigma0_sq == pytest.approx(np.prod(w ** -j.astype(float)), rel=1e-9)
    assert f.sigma.sigma1_sq == pytest.approx(np.prod(w ** -(j + 1.0)), rel=1e-9)
    assert f.a ** 2 == pytest.approx(1 / np.prod(w), rel=1e-9)
    assert f.reconstruct().max_abs_diff(h) < 1e-9
    sv = sigma_values(h)
    assert sv.sigma0_sq == pytest.approx(f.sigma.sigma0_sq, rel=1e-9)


def test_factor_h_trivial():
    assert factor_h([]).a == 1.0
    with pytest.raises(DomainError):
        factor_h(LaurentPoly({1: 1.0}))


# -- direct factorization ----------------------------------------------------

@given(coords(1, 5, 1.0), coords(1, 3, 0.8))
def test_birkhoff_matches_formulas(zs, es):
    g = product_loop(zs)
    f = factor_unipotent(zeta_to_x(zs))
    b = birkhoff_factor(g)
    assert b.a == pytest.approx(f.a, rel=1e-9)
    assert b.lower.max_abs_diff(f.lower) < 1e-8 * f.a ** 2
    assert b.reconstruct().max_abs_diff(g) < 1e-9 * f.a ** 2
    h = product_loop(es, POSITIVE)
    bh = birkhoff_factor(h)
    fh = factor_h(y_from_eta(es))
    assert bh.lower.max_abs_diff(fh.lower) < 1e-8


def test_birkhoff_degenerate():
    with pytest.raises(DegenerateLoopError):
        birkhoff_factor(MatrixLoop(0.0, 1j, 1j, 0.0))


# -- triple product ------------------------------------------------------------

def test_triple_trivial():
    td = triple_product([], LaurentPoly(), [])
    assert td.loop.allclose(MatrixLoop.identity(), 0)
    assert td.predicted == (1.0, 1.0, 1.0)
    assert l_matrix([], LaurentPoly(), []).allclose(MatrixLoop.identity(), 0)


def test_triple_reduces_to_zeta_family():
    z = 0.7j
    assert predicted_sigma([], LaurentPoly(), [z]) == pytest.approx(
        tuple(sigma_values(product_loop([z]))))


def test_triple_spec_example():
    eta, chi, zeta = [0, 0.4], LaurentPoly({1: 0.2}), [0.3, 0.1]
    td = triple_product(eta, chi, zeta)
    assert td.tail_bound < 1e-10
    assert toeplitz_det_product(td.loop) == pytest.approx(td.predicted.sigma0_sq, rel=1e-6)


def test_triple_random(rng):
    for _ in range(5):
        eta, zeta = rand_c(rng, 3, 0.5), rand_c(rng, 3, 0.5)
        chi = LaurentPoly.from_positive(rand_c(rng, 2, 0.2))
        td = triple_product(eta, chi, zeta)
        sv = sigma_values(td.loop)
        for a, b in zip(sv, td.predicted):
            assert a == pytest.approx(b, rel=1e-6)
        assert l_matrix(eta, chi, zeta).max_abs_diff(birkhoff_factor(td.loop).lower) < 1e-8


def test_l_matrix_chi_only():
    chi = LaurentPoly({1: 0.3 - 0.1j})
    lm = l_matrix([], chi, [])
    em = np.exp(-np.conj(0.3 - 0.1j) / 1j)  # value at z = 1j of exp(-chi*)
    val = lm(np.array([1j]))[0]
    np.testing.assert_allclose(val, np.diag([em, 1 / em]), atol=1e-10)
    assert abs(lm.b[0]) == 0 and lm.c.is_zero()


def test_ordered_product_determinant(rng):
    eta, zeta = rand_c(rng, 3, 0.6), rand_c(rng, 2, 0.6)
    chi = LaurentPoly({1: 0.2j, 2: 0.1})
    g = ordered_product_loop(eta, chi, zeta)
    je = np.arange(3.0)
    jz = np.arange(1.0, 3.0)
    pred = (np.prod((1 + np.abs(eta) ** 2) ** -je) * np.prod((1 + np.abs(zeta) ** 2) ** -jz)
            * math.exp(-2 * (0.04 + 2 * 0.01)))
    assert toeplitz_det_product(g) == pytest.approx(pred, rel=1e-6)


def test_injectivity_small():
    assert injectivity_margin(pairs=40, seed=3) > 1e-3
