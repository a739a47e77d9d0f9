"""Coordinates on polynomial SU(2) loops and their triangular factorizations.

A product of negative-power elementary loops
``g = E_n(zeta_n) ... E_1(zeta_1)`` factors as
``[[1, x], [0, 1]] diag(a, 1/a) u`` with ``x = sum_j x_j z^-j`` and ``u``
holomorphic, ``u(0)`` upper unipotent. This module moves between ``zeta``
and ``x``, builds the factors from ``x`` alone with exact finite Hankel
sections, and does the same for the positive-power (``eta``) family and for
the triple product ``h^-1 exp((chi - chi*) h_1) g``.

Throughout, a *lower* factor ``l`` satisfies ``l(inf)`` lower unipotent and
is a polynomial in ``z^-1``; an *upper* factor ``u`` is holomorphic with
``u(0)`` upper unipotent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import config
from .errors import (ConsistencyError, DegenerateLoopError, DomainError,
                     NumericalDegeneracyError)
from .loops import (NEGATIVE, POSITIVE, LaurentPoly, MatrixLoop, elementary_loop,
                    exp_series, exp_tail_bound, torus_loop)
from .toeplitz import SigmaValues, hankel_block, hankel_matrix


# ---------------------------------------------------------------------------
# coordinate containers


@dataclass(frozen=True)
class ZetaCoords:
    """``zeta_1..zeta_n`` (``start=1``) or ``eta_0..eta_n`` (``start=0``)."""

    values: tuple = ()
    start: int = 1

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def indices(self) -> range:
        return range(self.start, self.start + len(self.values))

    @property
    def weighted_sum(self) -> float:
        """``sum_j j |zeta_j|^2``, the quantity that must stay finite in the limit."""
        return float(sum(j * abs(v) ** 2 for j, v in zip(self.indices, self.values)))

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)


@dataclass(frozen=True)
class XCoords:
    """``x = sum_j x_j z^-j`` for ``j = start..start+n-1``."""

    values: tuple = ()
    start: int = 1

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def poly(self) -> LaurentPoly:
        return LaurentPoly({-(self.start + k): v for k, v in enumerate(self.values)})

    @classmethod
    def from_poly(cls, p: LaurentPoly, n: int | None = None, start: int = 1) -> "XCoords":
        if p.max_deg > -start and not p.is_zero():
            raise DomainError(f"x must be supported in degrees <= {-start}")
        if n is None:
            n = 0 if p.is_zero() else -p.min_deg - start + 1
        return cls(tuple(p[-(start + k)] for k in range(n)), start)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)


def _zetas(z) -> np.ndarray:
    if isinstance(z, (ZetaCoords, XCoords)):
        return z.as_array()
    return np.asarray(list(z), dtype=complex)


def _x_poly(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, XCoords):
        return x.poly
    return LaurentPoly.from_negative(x)


# ---------------------------------------------------------------------------
# zeta <-> x


def zeta_to_x(zeta) -> XCoords:
    """Iterate ``x <- ((x + z_new z^-(n+1)) sum_{p<=n} (conj(z_new) x z^(n+1))^p)_-``."""
    zs = _zetas(zeta)
    x = LaurentPoly()
    for n, zn in enumerate(zs):
        base = x + LaurentPoly.monomial(-(n + 1), zn)
        t = x.shift(n + 1) * np.conj(zn)
        s = LaurentPoly.constant(1.0)
        tp = LaurentPoly.constant(1.0)
        for _ in range(n):
            tp = tp * t
            s = s + tp
        x = (base * s).singular_part()
    return XCoords.from_poly(x, len(zs))


def x_from_loop(g: MatrixLoop) -> XCoords:
    """``x = (g_12 g_22^-1)_-`` with ``g_22^-1`` expanded as a power series.

    This reads ``x`` off the loop without any recursion and is the
    independent check on :func:`zeta_to_x`.
    """
    d = g.d
    if d.is_zero() or d.min_deg < 0:
        raise DomainError("the (2,2) entry must be holomorphic to read off x")
    scale = max(1.0, d.norm1())
    if abs(d[0]) <= 1e-14 * scale:
        raise DegenerateLoopError("the (2,2) entry vanishes at 0: loop is not in the big cell")
    b = g.b
    if b.is_zero() or b.min_deg >= 0:
        return XCoords(())
    order = -b.min_deg - 1
    x = (b * d.series_inverse(order)).singular_part()
    return XCoords.from_poly(x, -b.min_deg)


def _peel(x: LaurentPoly, n: int) -> tuple[complex, LaurentPoly]:
    zn = x[-n]
    rest = x - LaurentPoly.monomial(-n, zn)
    denom = 1.0 + x.shift(n) * np.conj(zn)
    if n == 1:
        return zn, LaurentPoly()
    return zn, (rest * denom.series_inverse(n - 2)).singular_part()


def x_to_zeta(x) -> ZetaCoords:
    """Invert :func:`zeta_to_x` by peeling one elementary factor at a time.

    ``zeta_n`` is the top coefficient ``x_n``; then
    ``x <- ((x - zeta_n z^-n) (1 + conj(zeta_n) x z^n)^-1)_-`` with the
    inverse taken as a power series (its constant term is ``1 + |zeta_n|^2``).
    """
    if isinstance(x, XCoords):
        n = len(x)
    else:
        n = len(_zetas(x)) if not isinstance(x, LaurentPoly) else (0 if x.is_zero() else -x.min_deg)
    p = _x_poly(x)
    out = np.zeros(n, dtype=complex)
    for k in range(n, 0, -1):
        out[k - 1], p = _peel(p, k)
    return ZetaCoords(tuple(out))


def x_to_zeta_bruteforce(x) -> ZetaCoords:
    """Sequential top-coefficient extraction using only the forward map.

    ``x_j`` is affine in ``zeta_j`` once ``zeta_{j+1..n}`` are fixed and does
    not involve ``zeta_1..zeta_{j-1}``, so each step is one affine solve.
    """
    xs = _zetas(x)
    n = len(xs)
    zs = np.zeros(n, dtype=complex)
    for j in range(n, 0, -1):
        trial = zs.copy()
        trial[j - 1] = 0.0
        r = zeta_to_x(trial).values[j - 1]
        trial[j - 1] = 1.0
        slope = zeta_to_x(trial).values[j - 1] - r
        zs[j - 1] = (xs[j - 1] - r) / slope
    return ZetaCoords(tuple(zs))


def x1_recursion(zeta) -> complex:
    """``x_1`` from the recursion over contiguous runs of ``zeta``.

    With ``X[i][m] = x_1(zeta_i..zeta_m)`` and ``P(t) = sum_k X[i+k-1][m] t^k``,
    ``X[i][m+1] = (1 + |zeta_{m+1}|^2) sum_p conj(zeta_{m+1})^p [t^(1+p(L+1))] P(t)^(p+1)``
    where ``L = m - i + 1``.
    """
    zs = tuple(_zetas(zeta))
    n = len(zs)
    if n == 0:
        return 0j

    @lru_cache(maxsize=None)
    def X(i, m):  # zero-based inclusive run
        if i == m:
            return zs[i]
        L = m - i
        P = np.zeros(L + 1, dtype=complex)
        for k in range(1, L + 1):
            P[k] = X(i + k - 1, m - 1)
        zn = zs[m]
        total = 0j
        power = np.array([1.0 + 0j])
        for p in range(L):
            power = np.convolve(power, P)
            target = 1 + p * (L + 1)
            if target < len(power):
                total += np.conj(zn) ** p * power[target]
        return (1.0 + abs(zn) ** 2) * total

    return complex(X(0, n - 1))


def x1_series_check(zeta, tol: float = 1e-12) -> complex:
    """``x_1`` via :func:`x1_recursion`, cross-checked against :func:`zeta_to_x`."""
    val = x1_recursion(zeta)
    xs = zeta_to_x(zeta).values
    ref = xs[0] if xs else 0j
    if abs(val - ref) > tol * max(1.0, abs(ref)):
        raise ConsistencyError(f"x_1 recursion {val} disagrees with zeta_to_x {ref}")
    return val


# ---------------------------------------------------------------------------
# product loops


def product_loop(zeta, family: str = NEGATIVE) -> MatrixLoop:
    """``E_n ... E_1`` (negative family, zeta_1..) or ``E_n^+ ... E_0^+`` (positive, eta_0..)."""
    zs = _zetas(zeta)
    start = 1 if family == NEGATIVE else 0
    if family not in (NEGATIVE, POSITIVE):
        raise ValueError(f"unknown family {family!r}")
    g = MatrixLoop.identity()
    for k, v in enumerate(zs):
        g = elementary_loop(start + k, v, family) @ g
    return g


def ordered_product_loop(eta, chi: LaurentPoly, zeta, tol: float = config.TAIL_TOL) -> MatrixLoop:
    """``E_0^+(eta_0) ... E_n^+(eta_n) exp((chi - chi*) h_1) E_n(zeta_n) ... E_1(zeta_1)``.

    The eta factors appear in increasing order here, unlike in ``h``.
    """
    left = MatrixLoop.identity()
    for j, v in enumerate(_zetas(eta)):
        left = left @ elementary_loop(j, v, POSITIVE)
    return left @ torus_loop(chi, tol=tol).loop @ product_loop(zeta)


# ---------------------------------------------------------------------------
# triangular factorizations


@dataclass
class TriangularFactorization:
    """``lower diag(a, 1/a) upper``."""

    lower: MatrixLoop
    a: float
    upper: MatrixLoop
    residual: float = 0.0  # size of what was discarded to enforce the shape
    sigma: SigmaValues | None = None

    def reconstruct(self) -> MatrixLoop:
        m = MatrixLoop.diag(LaurentPoly.constant(self.a), LaurentPoly.constant(1.0 / self.a))
        return self.lower @ m @ self.upper

    @property
    def alpha(self) -> LaurentPoly:
        return self.upper.a - 1.0

    @property
    def beta(self) -> LaurentPoly:
        return self.upper.b

    @property
    def gamma(self) -> LaurentPoly:
        return self.upper.c

    @property
    def delta(self) -> LaurentPoly:
        return self.upper.d - 1.0

    def degree_windows(self) -> dict:
        """``(min_deg, max_deg)`` of alpha, beta, gamma, delta; ``None`` when zero."""
        out = {}
        for name in ("alpha", "beta", "gamma", "delta"):
            p = getattr(self, name)
            out[name] = None if p.is_zero() else p.window
        return out


def _within(p: LaurentPoly, lo: int, hi: int, tol: float) -> bool:
    if p.is_zero():
        return True
    outside = p - p.restrict(lo, hi)
    return outside.norm1() <= tol


def check_unipotent_shape(f: TriangularFactorization, n: int, tol: float = 1e-12) -> bool:
    """Degree windows for factorizations of ``[[1, x], [0, 1]]``-type loops."""
    return (_within(f.alpha, 1, n - 1, tol) and _within(f.beta, 0, n - 2, tol)
            and _within(f.gamma, 1, n, tol) and _within(f.delta, 1, n - 1, tol))


def _solve(mat: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if mat.size == 0:
        return rhs
    cond = np.linalg.cond(mat)
    if not np.isfinite(cond) or cond > 1e13:
        raise NumericalDegeneracyError(f"section is numerically singular (cond {cond:.3e})")
    return np.linalg.solve(mat, rhs)


def _minus_vec(p: LaurentPoly, K: int) -> np.ndarray:
    """Degrees ``-1..-K`` in that order."""
    return p.dense(-K, -1)[::-1]


def _minus_poly(v: np.ndarray) -> LaurentPoly:
    return LaurentPoly.from_negative(v)


def _plus_vec(p: LaurentPoly, K: int) -> np.ndarray:
    """Degrees ``K-1..0`` in that order."""
    return p.dense(0, K - 1)[::-1]


def _plus_poly(v: np.ndarray) -> LaurentPoly:
    return LaurentPoly.from_array(0, np.asarray(v)[::-1])


def _inv_det_one_plus(mat: np.ndarray) -> float:
    if mat.size == 0:
        return 1.0
    return 1.0 / float(np.prod(1.0 + np.linalg.svd(mat, compute_uv=False) ** 2))


def factor_unipotent(x, tol: float = config.ATOL) -> TriangularFactorization:
    """Factor the unitary loop whose lower factor is ``[[1, x], [0, 1]]``.

    ``gamma = -((1 + C(zx) C(zx)*)^-1 x)*``, ``delta* = C(x) gamma``,
    ``1 + alpha = a^-2 (1 - A(x) gamma)``, ``beta = -a^-2 A(x)(1 + delta)``,
    with ``a^2 = det(1 + C(x)*C(x)) / det(1 + C(zx)*C(zx))``. ``C`` and ``A``
    are the Hankel and Toeplitz operators of the symbol; the finite sections
    used contain them exactly.
    """
    xp = _x_poly(x)
    if not xp.is_zero() and xp.max_deg >= 0:
        raise DomainError("x must be strictly singular")
    n = 0 if xp.is_zero() else -xp.min_deg
    if n == 0:
        return TriangularFactorization(MatrixLoop.identity(), 1.0, MatrixLoop.identity(),
                                       0.0, SigmaValues(1.0, 1.0, 1.0))
    zx = xp.shift(1)
    cx = hankel_matrix(xp, n)
    czx = hankel_matrix(zx, n)
    s0 = _inv_det_one_plus(cx)
    s1 = _inv_det_one_plus(czx)
    a2 = s1 / s0
    w = _solve(np.eye(n) + czx @ czx.conj().T, _minus_vec(xp, n))
    gamma = -_minus_poly(w).star()
    delta = (xp * gamma).singular_part().star()
    one_alpha = (1.0 - (xp * gamma).plus_part()) / a2
    residual = abs(one_alpha[0] - 1.0)
    one_alpha = one_alpha - (one_alpha[0] - 1.0)
    beta = -(xp * (1.0 + delta)).plus_part() / a2
    upper = MatrixLoop(one_alpha, beta, gamma, 1.0 + delta)
    lower = MatrixLoop(1.0, xp, 0.0, 1.0)
    return TriangularFactorization(lower, math.sqrt(a2), upper, residual,
                                   SigmaValues(s0, s1, math.sqrt(a2)))


def y_from_eta(eta) -> XCoords:
    """``y`` for ``h = E_n^+ ... E_0^+`` via the diagram automorphism: ``y = z x(-conj(eta))``."""
    es = _zetas(eta)
    x = zeta_to_x(-np.conj(es)).poly
    return XCoords.from_poly(x.shift(1), len(es), start=0)


def y_from_loop(h: MatrixLoop) -> XCoords:
    """``y`` = degrees ``<= 0`` of ``h_21 h_11^-1`` (power-series inverse)."""
    a, c = h.a, h.c
    if a.is_zero() or a.min_deg < 0:
        raise DomainError("the (1,1) entry must be holomorphic to read off y")
    if abs(a[0]) <= 1e-14 * max(1.0, a.norm1()):
        raise DegenerateLoopError("the (1,1) entry vanishes at 0: loop is not in the big cell")
    if c.is_zero():
        return XCoords((), start=0)
    n = max(0, -c.min_deg)
    y = (c * a.series_inverse(n)).restrict(None, 0)
    return XCoords.from_poly(y, n + 1, start=0)


def factor_h(y, tol: float = config.ATOL) -> TriangularFactorization:
    """Factor the unitary loop whose lower factor is ``[[1, 0], [y, 1]]``, ``y`` of degrees ``-n..0``.

    ``beta = -(1 + C(y)*C(y))^-1 y*``, ``alpha* = C(y) beta``,
    ``1 + delta = a^2 (1 - A(y) beta)``, ``gamma* = -a^2 D(y*) alpha*``,
    where ``D(f) = P- f P-``.
    """
    yp = y.poly if isinstance(y, XCoords) else (y if isinstance(y, LaurentPoly)
                                                 else XCoords(tuple(y), 0).poly)
    if not yp.is_zero() and yp.max_deg > 0:
        raise DomainError("y must have degrees <= 0")
    if yp.is_zero():
        return TriangularFactorization(MatrixLoop.identity(), 1.0, MatrixLoop.identity(),
                                       0.0, SigmaValues(1.0, 1.0, 1.0))
    n = -yp.min_deg
    K = n + 1
    cy = hankel_matrix(yp, K)
    cyz = hankel_matrix(yp.shift(-1), K)
    s0 = _inv_det_one_plus(cy)
    s1 = _inv_det_one_plus(cyz)
    a2 = s1 / s0
    v = _solve(np.eye(K) + cy.conj().T @ cy, _plus_vec(yp.star(), K))
    beta = -_plus_poly(v)
    alpha = (yp * beta).singular_part().star()
    one_delta = a2 * (1.0 - (yp * beta).plus_part())
    residual = abs(one_delta[0] - 1.0)
    one_delta = one_delta - (one_delta[0] - 1.0)
    gamma = -(a2 * (yp.star() * alpha.star()).singular_part()).star()
    upper = MatrixLoop(1.0 + alpha, beta, gamma, one_delta)
    lower = MatrixLoop(1.0, 0.0, yp, 1.0)
    return TriangularFactorization(lower, math.sqrt(a2), upper, residual,
                                   SigmaValues(s0, s1, math.sqrt(a2)))


def birkhoff_factor(g: MatrixLoop, tol: float = config.UNITARY_TOL) -> TriangularFactorization:
    """Direct factorization of a polynomial SU(2) loop in the big cell.

    Columns of ``A(g)^-1 = (1 - C*C)^-1 A(g*)`` applied to ``e_1, e_2`` give
    ``m = g_+^-1`` and ``l_1 = I + C(g) m`` with ``l_1(inf) = I``; an LDU
    split of ``(l_1^-1 g)(0)`` then fixes the diagonal and unipotent parts.
    ``residual`` reports the negative-degree mass discarded from ``upper``.
    """
    lo, _ = g.window
    K = max(0, -lo)
    if K == 0:
        l1 = MatrixLoop.identity()
    else:
        C = hankel_block(g, K).matrix
        M = np.eye(2 * K) - C.conj().T @ C
        gs = g.star()
        cols = []
        for k in range(2):
            rhs = np.zeros(2 * K, dtype=complex)
            for i in range(2):
                rhs[i::2] = _plus_vec(gs[i, k].plus_part(), K)
            m = _solve(M, rhs)
            w = C @ m
            cols.append([_minus_poly(w[i::2]) for i in range(2)])
        l1 = MatrixLoop(1.0 + cols[0][0], cols[1][0], cols[0][1], 1.0 + cols[1][1])
    m1 = l1.adjugate() @ g
    m0 = np.array([[m1[i, j][0] for j in range(2)] for i in range(2)])
    p = m0[0, 0]
    if abs(p) < 1e-12:
        raise DegenerateLoopError("leading entry of the holomorphic factor vanishes at 0")
    r = m0[1, 0] / p
    if abs(p.imag) > 1e-8 * abs(p) or p.real <= 0:
        raise NumericalDegeneracyError(f"diagonal factor {p} is not positive real")
    a = float(p.real)
    l0 = MatrixLoop(1.0, 0.0, r, 1.0)
    lower = l1 @ l0
    u = MatrixLoop(1.0 / a, 0.0, 0.0, a) @ MatrixLoop(1.0, 0.0, -r, 1.0) @ m1
    residual = sum(e.singular_part().norm1() for e in u.entries)
    upper = u.map(lambda e: e.plus_part())
    return TriangularFactorization(lower, a, upper, residual)


# ---------------------------------------------------------------------------
# triple product


@dataclass
class TripleData:
    """Inputs ``eta``, ``chi``, ``zeta`` and the loop ``h^-1 exp((chi - chi*) h_1) g``."""

    eta: ZetaCoords
    chi: LaurentPoly
    zeta: ZetaCoords
    loop: MatrixLoop
    predicted: SigmaValues
    tail_bound: float = 0.0
    torus_degree: int = 0


def predicted_sigma(eta, chi: LaurentPoly, zeta) -> SigmaValues:
    """Closed-form ``|sigma_0|^2``, ``|sigma_1|^2``, ``a`` of the triple product."""
    es = np.abs(_zetas(eta)) ** 2
    zs = np.abs(_zetas(zeta)) ** 2
    je = np.arange(len(es))
    jz = np.arange(1, len(zs) + 1)
    torus = math.exp(-2.0 * sum(d * abs(c) ** 2 for d, c in chi.to_dict().items()))
    s0 = float(np.prod((1 + es) ** (-je.astype(float))) * torus * np.prod((1 + zs) ** (-jz.astype(float))))
    s1 = float(np.prod((1 + es) ** (-(je + 1.0))) * torus * np.prod((1 + zs) ** (-(jz - 1.0))))
    a2 = float(np.prod(1 + zs) / np.prod(1 + es))
    return SigmaValues(s0, s1, math.sqrt(a2))


def triple_product(eta, chi: LaurentPoly, zeta, tol: float = config.TAIL_TOL) -> TripleData:
    """Assemble ``h^-1 exp((chi - chi*) h_1) g`` and its predicted sigma values.

    ``h = E_n^+(eta_n) ... E_0^+(eta_0)`` and ``g = E_n(zeta_n) ... E_1(zeta_1)``;
    the torus factor is truncated so that its tail stays below ``tol``.
    """
    eta_c = eta if isinstance(eta, ZetaCoords) else ZetaCoords(tuple(_zetas(eta)), 0)
    zeta_c = zeta if isinstance(zeta, ZetaCoords) else ZetaCoords(tuple(_zetas(zeta)), 1)
    h = product_loop(eta_c, POSITIVE)
    t = torus_loop(chi, tol=tol)
    g = product_loop(zeta_c, NEGATIVE)
    loop = h.star() @ t.loop @ g
    return TripleData(eta_c, chi, zeta_c, loop, predicted_sigma(eta_c, chi, zeta_c),
                      t.tail_bound, t.degree)


def _exp_poly(chi: LaurentPoly, tol: float) -> LaurentPoly:
    """``exp(chi)`` for ``chi`` of positive degrees, truncated below ``tol``."""
    if chi.is_zero():
        return LaurentPoly.constant(1.0)
    N = max(chi.max_deg, 1)
    while exp_tail_bound(chi, N) > tol:
        N *= 2
        if N > 4096:
            from .errors import TruncationError
            raise TruncationError("exponential series does not reach tolerance", exp_tail_bound(chi, N))
    return LaurentPoly.from_array(0, exp_series(chi, N))


def l_matrix(eta, chi: LaurentPoly, zeta, tol: float = config.TAIL_TOL) -> MatrixLoop:
    """Lower factor of the triple product from the factors of its pieces.

    ``l = u(h)* exp(-chi* h_1) [[1, a(h)^2 P-(y* exp(2 chi*) + x exp(2 chi))], [0, 1]]``.
    """
    es = _zetas(eta)
    fh = factor_h(y_from_eta(es))
    x = zeta_to_x(zeta).poly
    y = y_from_eta(es).poly
    e2 = _exp_poly(chi * 2.0, tol)
    em = _exp_poly(-chi, tol)
    corner = (y.star() * e2.star() + x * e2).singular_part() * fh.a ** 2
    torus_minus = MatrixLoop.diag(em.star(), _exp_poly(chi, tol).star())
    return fh.upper.star() @ torus_minus @ MatrixLoop(1.0, corner, 0.0, 1.0)


def injectivity_margin(pairs: int = 1000, separation: float = 0.05, n: int = 2,
                       seed: int = 0, scale: float = 0.4) -> float:
    """Smallest coefficient distance between ``l_matrix`` outputs of distinct random triples.

    Each pair differs in at least one input coordinate by ``separation``.
    """
    rng = np.random.default_rng(seed)
    worst = math.inf

    def rand_c(size):
        return scale * (rng.uniform(-1, 1, size) + 1j * rng.uniform(-1, 1, size))

    def dist(p, q):
        return max((pe - qe).norm1() for pe, qe in zip(p.entries, q.entries))

    for _ in range(pairs):
        eta, chi, zeta = rand_c(n + 1), rand_c(n), rand_c(n)
        eta2, chi2, zeta2 = eta.copy(), chi.copy(), zeta.copy()
        which = rng.integers(3)
        target = (eta2, chi2, zeta2)[which]
        k = rng.integers(len(target))
        target[k] += separation * np.exp(2j * np.pi * rng.uniform())
        l1 = l_matrix(eta, LaurentPoly.from_positive(chi), zeta)
        l2 = l_matrix(eta2, LaurentPoly.from_positive(chi2), zeta2)
        worst = min(worst, dist(l1, l2))
    return worst
