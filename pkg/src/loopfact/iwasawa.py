"""Iwasawa factors for ``g_0 = (1 - |f|^2)^(-1/2) [[1, conj f], [f, 1]]``.

For a loop ``f`` into the unit disk, write ``L = [[a, b], [c, d]]`` for the
inverse adjoint of the lower factor (holomorphic in the disk,
``a(0) = d(0) = 1``, ``c(0) = 0``). Everything follows from the scalar
function

    h = 2 (1 - H0 f H0 conj(f))^(-1) (1),      H0 = P+ - P-,

via ``conj(c) = -P-(conj(f) h)``, ``b a0^2 = -P+(conj(f) h)``,
``conj(a) - 1 = P-(h)``, ``1 + d a0^2 = P+(h)`` and ``a0^2 = h_0 - 1``.

``U = g_0 L diag(1/a0, a0)`` is unitary; the Iwasawa factorization reads
``g_0 = l diag(a0, 1/a0) u`` with ``l = L^-*`` and ``u = U*``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import config
from .errors import DegenerateLoopError, DomainError, TruncationError
from .loops import CircleSampling, LaurentPoly, MatrixLoop
from .toeplitz import multiplication_block


def hilbert0(p: LaurentPoly) -> LaurentPoly:
    """``H0 = P+ - P-`` (degree 0 counts as ``+``)."""
    return p.plus_part() - p.singular_part()


@dataclass(frozen=True)
class DiskLoop:
    f: LaurentPoly
    sup_bound: float

    @classmethod
    def from_poly(cls, f: LaurentPoly, samples: int = 4096) -> "DiskLoop":
        lo, hi = f.window if not f.is_zero() else (0, 0)
        pts = CircleSampling(max(samples, 16 * (hi - lo + 1))).points
        sup = float(np.abs(f(pts)).max()) if not f.is_zero() else 0.0
        if sup >= 1.0:
            raise DomainError(f"f must map the circle into the unit disk (sup |f| = {sup:.6g})")
        return cls(f, sup)


def _disk(f) -> DiskLoop:
    return f if isinstance(f, DiskLoop) else DiskLoop.from_poly(f)


@dataclass(frozen=True)
class HSolution:
    h: LaurentPoly
    N: int
    residual: float  # untruncated equation, all degrees (mass leaking past +-N)
    edge_mass: float  # largest |h_k| with |k| > N/2


def _operator(f: LaurentPoly, N: int) -> np.ndarray:
    degs = list(range(-N, N + 1))
    sign = np.where(np.array(degs) >= 0, 1.0, -1.0)
    mf = multiplication_block(f, degs, degs)
    mfbar = multiplication_block(f.star(), degs, degs)
    return (sign[:, None] * mf) @ (sign[:, None] * mfbar)


def solve_h(f, N: int = 32, tol: float = 1e-8) -> HSolution:
    """Dense solve of ``(1 - H0 f H0 conj(f)) h = 2`` on degrees ``-N..N``."""
    disk = _disk(f)
    fp = disk.f
    width = 0 if fp.is_zero() else max(abs(fp.min_deg), abs(fp.max_deg))
    if N < 2 * width + 2:
        raise DomainError(f"N = {N} too small for f of degree width {width}")
    T = _operator(fp, N)
    rhs = np.zeros(2 * N + 1, dtype=complex)
    rhs[N] = 2.0
    sol = np.linalg.solve(np.eye(2 * N + 1) - T, rhs)
    h = LaurentPoly.from_array(-N, sol)
    r = h - hilbert0(fp * hilbert0(fp.star() * h)) - 2.0
    residual = float(np.abs(r.coeffs).max()) if not r.is_zero() else 0.0
    outer = h - h.restrict(-N // 2, N // 2)
    edge = float(np.abs(outer.coeffs).max()) if not outer.is_zero() else 0.0
    if residual > tol:
        raise TruncationError(f"h residual {residual:.3e} exceeds {tol:.1e}; increase N", residual)
    return HSolution(h, N, residual, edge)


@dataclass
class IwasawaData:
    f: DiskLoop
    h: LaurentPoly
    a0: float
    l_inv_star: MatrixLoop
    N: int

    # -- pointwise pieces ------------------------------------------------
    def g0_values(self, pts) -> np.ndarray:
        return g0_values(self.f.f, pts)

    def _num_den(self, pts):
        f = self.f.f
        pm_h = self.h.singular_part()
        pm_fh = (f.star() * self.h).singular_part()
        num = f.star()(pts) * (1.0 + pm_h(pts)) - pm_fh(pts)
        den = 1.0 + pm_h(pts) - f(pts) * pm_fh(pts)
        return num, den

    def u_prop_values(self, pts) -> np.ndarray:
        """The unitary matrix ``g_0 L diag(1/a0, a0)`` written through ``h`` alone."""
        f = self.f.f
        num, den = self._num_den(pts)
        scale = 1.0 / (np.sqrt(1.0 - np.abs(f(pts)) ** 2) * self.a0)
        out = np.empty(np.shape(pts) + (2, 2), dtype=complex)
        out[..., 0, 0] = np.conj(den)
        out[..., 0, 1] = -num
        out[..., 1, 0] = np.conj(num)
        out[..., 1, 1] = den
        return out * scale[..., None, None]

    def u_values(self, pts) -> np.ndarray:
        """Unitary Iwasawa factor ``u`` in ``g_0 = l a u``."""
        return np.conj(np.swapaxes(self.u_prop_values(pts), -1, -2))

    def l_values(self, pts) -> np.ndarray:
        L = self.l_inv_star(pts)
        return np.linalg.inv(np.conj(np.swapaxes(L, -1, -2)))

    def a_matrix(self) -> np.ndarray:
        return np.diag([self.a0, 1.0 / self.a0])

    # -- residuals -------------------------------------------------------
    def reconstruction_residual(self, samples: int = config.DEFAULT_SAMPLES) -> float:
        pts = CircleSampling(samples).points
        rec = self.l_values(pts) @ self.a_matrix() @ self.u_values(pts)
        return float(np.abs(rec - self.g0_values(pts)).max())

    def unitarity_residual(self, samples: int = config.DEFAULT_SAMPLES) -> float:
        u = self.u_values(CircleSampling(samples).points)
        prod = np.conj(np.swapaxes(u, -1, -2)) @ u - np.eye(2)
        return float(np.linalg.norm(prod, ord=2, axis=(-2, -1)).max())

    def holomorphy_residual(self) -> float:
        """Negative-degree mass of ``a, b, c, d`` (zero by construction)."""
        return float(sum(e.singular_part().norm1() for e in self.l_inv_star.entries))

    def normalization_residual(self) -> float:
        L = self.l_inv_star
        return float(max(abs(L.a[0] - 1), abs(L.d[0] - 1), abs(L.c[0])))

    def product_u_values(self, pts) -> np.ndarray:
        """``g_0 L diag(1/a0, a0)`` by direct multiplication (oracle for the closed form)."""
        m = np.diag([1.0 / self.a0, self.a0])
        return self.g0_values(pts) @ self.l_inv_star(pts) @ m


def g0_values(f: LaurentPoly, pts) -> np.ndarray:
    fv = f(pts)
    s = 1.0 / np.sqrt(1.0 - np.abs(fv) ** 2)
    out = np.empty(np.shape(pts) + (2, 2), dtype=complex)
    out[..., 0, 0] = s
    out[..., 0, 1] = s * np.conj(fv)
    out[..., 1, 0] = s * fv
    out[..., 1, 1] = s
    return out


def recover_factors(f, h) -> IwasawaData:
    """Assemble ``a0`` and ``L = [[a, b], [c, d]]`` from ``h``."""
    disk = _disk(f)
    sol = h if isinstance(h, HSolution) else None
    hp = sol.h if sol else h
    zero = hp[0]
    if abs(zero.imag) > 1e-8 or zero.real <= 1.0:
        raise DegenerateLoopError(f"zero mode of h is {zero}; need a real value > 1")
    a02 = zero.real - 1.0
    fh = disk.f.star() * hp
    a = 1.0 + hp.singular_part().star()
    b = -fh.plus_part() / a02
    c = -fh.singular_part().star()
    d = (hp.plus_part() - 1.0) / a02
    L = MatrixLoop(a, b, c, d)
    N = sol.N if sol else max(abs(hp.min_deg), abs(hp.max_deg))
    return IwasawaData(disk, hp, math.sqrt(a02), L, N)


@dataclass(frozen=True)
class FResult:
    F: LaurentPoly
    oracle_residual: float


def build_F(data: IwasawaData, samples: int | None = None, tol: float = 1e-6) -> FResult:
    """``F = ((conj f + conj f P-h - P-(conj f h)) / (1 + P-h - f P-(conj f h)))*``.

    Values on a fine grid are turned into Laurent coefficients on
    ``-N..N``. ``oracle_residual`` compares with ``U_21 / U_11`` computed
    from ``g_0 L diag(1/a0, a0)``.
    """
    N = data.N
    grid = CircleSampling(samples or 8 * N + 8)
    pts = grid.points
    num, den = data._num_den(pts)
    if np.abs(den).min() < 1e-12:
        raise DomainError("denominator of F vanishes on the sample grid")
    vals = np.conj(num / den)
    F = grid.coefficients(vals, -N, N)
    check = CircleSampling(config.DEFAULT_SAMPLES).points
    U = data.product_u_values(check)
    n2, d2 = data._num_den(check)
    resid = float(np.abs(np.conj(n2 / d2) - U[..., 1, 0] / U[..., 0, 0]).max())
    return FResult(F, resid)


def iwasawa(f, N: int = 32, tol: float = 1e-8) -> IwasawaData:
    """``solve_h`` followed by ``recover_factors``."""
    disk = _disk(f)
    return recover_factors(disk, solve_h(disk, N, tol))
