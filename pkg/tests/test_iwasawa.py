import numpy as np
import pytest

from loopfact.errors import DegenerateLoopError, DomainError, TruncationError
from loopfact.iwasawa import (DiskLoop, build_F, g0_values, hilbert0, iwasawa, recover_factors,
                              solve_h)
from loopfact.loops import CircleSampling, LaurentPoly
from loopfact.report import random_disk_poly


def test_hilbert0():
    p = LaurentPoly({-2: 1.0, 0: 2.0, 3: 1j})
    assert hilbert0(p).to_dict() == {-2: -1.0, 0: 2.0, 3: 1j}


def test_disk_loop_rejects_large_f():
    with pytest.raises(DomainError):
        DiskLoop.from_poly(LaurentPoly({1: 1.0}))
    assert DiskLoop.from_poly(LaurentPoly()).sup_bound == 0.0


def test_constant_f_is_explicit():
    # f = Z constant: h = 2/(1-|Z|^2), L = [[1, -conj Z], [0, 1]] scaled, F = Z
    Z = 0.3 + 0.4j
    data = iwasawa(LaurentPoly.constant(Z), N=8)
    assert data.h.allclose(LaurentPoly.constant(2 / (1 - abs(Z) ** 2)), 1e-12)
    assert data.a0 ** 2 == pytest.approx((1 + abs(Z) ** 2) / (1 - abs(Z) ** 2))
    F = build_F(data)
    assert F.F.allclose(LaurentPoly.constant(Z), 1e-10)
    assert F.oracle_residual < 1e-12


def test_zero_f():
    data = iwasawa(LaurentPoly(), N=4)
    assert data.a0 == pytest.approx(1.0)
    assert data.reconstruction_residual() < 1e-14


def test_linear_example_zero_mode():
    # f = 0.4 z: h = 2/(1 - 0.16 ...) has zero mode 2/(1 + 0.16)
    data = iwasawa(LaurentPoly({1: 0.4}), N=32)
    assert data.h[0].real == pytest.approx(2 / 1.16, rel=1e-10)
    assert data.h[0].real > 1.0
    assert data.reconstruction_residual() < 1e-10


def test_factors_random(rng):
    for _ in range(5):
        f = random_disk_poly(rng, 0.5)
        data = iwasawa(f, N=32)
        assert data.reconstruction_residual() < 1e-8
        assert data.unitarity_residual() < 1e-8
        assert data.holomorphy_residual() == 0.0
        assert data.normalization_residual() < 1e-12
        pts = CircleSampling(32).points
        np.testing.assert_allclose(data.u_prop_values(pts), data.product_u_values(pts), atol=1e-8)


def test_truncation_doubling(rng):
    f = random_disk_poly(rng, 0.5)
    a, b = solve_h(f, 32), solve_h(f, 64)
    assert (a.h - b.h).norm1() < 1e-8


def test_truncation_error_raised():
    f = LaurentPoly({-2: 0.49, 1: 0.49})
    with pytest.raises(TruncationError):
        solve_h(f, N=8)
    assert solve_h(f, N=8, tol=1.0).residual > 1e-3
    with pytest.raises(DomainError):
        solve_h(LaurentPoly({3: 0.1}), N=4)


def test_degenerate_zero_mode():
    with pytest.raises(DegenerateLoopError):
        recover_factors(LaurentPoly(), LaurentPoly.constant(1.0))


def test_g0_is_hermitian_unimodular():
    pts = CircleSampling(16).points
    g = g0_values(LaurentPoly({1: 0.3, -2: 0.1j}), pts)
    np.testing.assert_allclose(np.linalg.det(g), 1.0, atol=1e-14)
    np.testing.assert_allclose(g, np.conj(np.swapaxes(g, -1, -2)), atol=1e-15)


def test_F_matches_oracle(rng):
    f = random_disk_poly(rng, 0.5)
    res = build_F(iwasawa(f, N=32))
    assert res.oracle_residual < 1e-9
