"""Densities on the cell and the determinant-power integrals over ``x``.

The integrand over ``x = (x_1, ..., x_n)`` is

    prod_l det(1 + B_l B_l*)^(-q_l),    B_l = B(sum_j x_{l+j} z^j),

for a zero-based exponent vector ``q = (q_0, ..., q_{n-1})``. In the
``zeta`` coordinates everything factors, which gives both the closed form
and a natural importance-sampling proposal.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import ConsistencyError, DivergentIntegralError, DomainError
from .factor import ZetaCoords, _zetas, zeta_to_x
from .weyl import haar_exponents


@dataclass(frozen=True)
class ExponentVector:
    """Level exponents ``q_0, ..., q_{n-1}``."""

    q: tuple

    def __post_init__(self):
        q = tuple(float(v) for v in self.q)
        if len(q) < 1:
            raise DomainError("exponent vector must have length >= 1")
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return len(self.q)

    def zeta_exponents(self) -> np.ndarray:
        """``e_j = sum_{i<j} (j - i) q_i - 2(j - 1)``: the power of ``(1+|zeta_j|^2)^-1``."""
        q = np.array(self.q)
        return np.array([sum((j - i) * q[i] for i in range(j)) - 2 * (j - 1)
                         for j in range(1, self.n + 1)])

    def margins(self) -> np.ndarray:
        """``e_j - 1``; all must be positive for a finite integral."""
        return self.zeta_exponents() - 1.0


def _q(q) -> ExponentVector:
    return q if isinstance(q, ExponentVector) else ExponentVector(tuple(q))


@dataclass(frozen=True)
class IntegralResult:
    value: float
    stderr: float
    samples: int
    seed: int
    method: str = "closed-form"
    proposal: str = ""

    def __post_init__(self):
        if not self.stderr >= 0:
            raise ValueError("stderr must be nonnegative")


# ---------------------------------------------------------------------------
# densities


def jacobian_density(zeta) -> float:
    """``prod_j (1 + |zeta_j|^2)^(2(j-1))``: Lebesgue measure in ``x`` over that in ``zeta``."""
    zs = np.abs(_zetas(zeta)) ** 2
    j = np.arange(1, len(zs) + 1)
    return float(np.prod((1.0 + zs) ** (2.0 * (j - 1))))


def _real_map(v: np.ndarray) -> np.ndarray:
    n = len(v) // 2
    x = zeta_to_x(v[:n] + 1j * v[n:]).as_array()
    return np.concatenate([x.real, x.imag])


def finite_difference_jacobian(zeta, rel_step: float = 1e-5) -> float:
    """``|det|`` of the real ``2n x 2n`` Jacobian of ``zeta -> x`` by central differences."""
    zs = _zetas(zeta)
    n = len(zs)
    if n == 0:
        return 1.0
    v = np.concatenate([zs.real, zs.imag])
    J = np.zeros((2 * n, 2 * n))
    for k in range(2 * n):
        h = rel_step * max(1.0, abs(v[k]))
        e = np.zeros(2 * n)
        e[k] = h
        J[:, k] = (_real_map(v + e) - _real_map(v - e)) / (2 * h)
    return float(abs(np.linalg.det(J)))


def haar_density_word(word, zeta) -> float:
    """``prod_j (1 + |zeta_j|^2)^(e_j)`` with the Haar exponents of ``word``."""
    ex = haar_exponents(word)
    zs = np.abs(_zetas(zeta)) ** 2
    if len(ex) != len(zs):
        raise DomainError(f"word length {len(ex)} differs from {len(zs)} coordinates")
    return float(np.prod((1.0 + zs) ** np.array(ex, dtype=float)))


# ---------------------------------------------------------------------------
# closed form and criticality


def closed_form_integral(q) -> float:
    """``pi^n prod_j 1 / (sum_{i<j} (j-i) q_i - (2j - 1))``."""
    qv = _q(q)
    margins = qv.margins()
    for j, m in enumerate(margins, start=1):
        if m <= 0:
            raise DivergentIntegralError(f"integral diverges: level sum at j={j} gives margin {m}", j)
    return float(math.pi ** qv.n / np.prod(margins))


def criticality(p: float, n: int) -> bool:
    """True iff ``det(1 + B B*)^-p`` is integrable over ``C^n``: ``p > 2 - 1/n``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return p > 2.0 - 1.0 / n


# ---------------------------------------------------------------------------
# x-side integrand, batched


def zeta_to_x_batch(Z: np.ndarray) -> np.ndarray:
    """Row-wise :func:`zeta_to_x`; ``X[:, j-1]`` is the coefficient of ``z^-j``."""
    Z = np.asarray(Z, dtype=complex)
    S, n = Z.shape
    X = np.zeros((S, 0), dtype=complex)
    for k in range(n):
        zn = Z[:, k]
        # t = conj(zn) x z^(k+1): T[:, d] is the coefficient of z^d, d = 0..k
        T = np.zeros((S, k + 1), dtype=complex)
        for j in range(1, k + 1):
            T[:, k + 1 - j] = np.conj(zn) * X[:, j - 1]
        s = np.zeros((S, k + 1), dtype=complex)
        s[:, 0] = 1.0
        tp = s.copy()
        for _ in range(k):
            nxt = np.zeros_like(tp)
            for d in range(1, k + 1):
                nxt[:, d] = np.einsum("ij,ij->i", T[:, 1:d + 1], tp[:, d - 1::-1][:, :d])
            tp = nxt
            s += tp
        base = np.concatenate([X, zn[:, None]], axis=1)  # degrees -1..-(k+1)
        new = np.zeros((S, k + 1), dtype=complex)
        for m in range(1, k + 2):
            for d in range(0, k + 2 - m):
                new[:, m - 1] += base[:, m + d - 1] * s[:, d]
        X = new
    return X


def x_integrand_batch(X: np.ndarray, q) -> np.ndarray:
    """``prod_l det(1 + B_l B_l*)^(-q_l)`` row-wise for x-coefficient rows."""
    qv = _q(q)
    S, n = X.shape
    out = np.ones(S)
    for level, ql in enumerate(qv.q):
        if ql == 0.0:
            continue
        xs = X[:, level:]
        m = xs.shape[1]
        B = np.zeros((S, m, m), dtype=complex)
        for r in range(m):
            for c in range(r + 1):
                B[:, r, c] = xs[:, m - 1 - (r - c)]
        M = np.eye(m) + B @ np.conj(np.swapaxes(B, 1, 2))
        out *= np.linalg.det(M).real ** (-ql)
    return out


# ---------------------------------------------------------------------------
# Monte Carlo


def _merge(a, b):
    """Combine ``(count, mean, M2)`` summaries (Chan et al.)."""
    na, ma, va = a
    nb, mb, vb = b
    n = na + nb
    if n == 0:
        return a
    d = mb - ma
    return n, ma + d * nb / n, va + vb + d * d * na * nb / n


def _shard(q: ExponentVector, exps: np.ndarray, count: int, seed_seq) -> tuple:
    rng = np.random.default_rng(seed_seq)
    n = q.n
    u = rng.random((count, n))
    theta = rng.random((count, n)) * 2 * np.pi
    r2 = u ** (-1.0 / (exps - 1.0)) - 1.0
    Z = np.sqrt(r2) * np.exp(1j * theta)
    X = zeta_to_x_batch(Z)
    j = np.arange(1, n + 1)
    jac = np.prod((1.0 + r2) ** (2.0 * (j - 1)), axis=1)
    dens = np.prod((exps - 1.0) / np.pi * (1.0 + r2) ** (-exps), axis=1)
    w = x_integrand_batch(X, q) * jac / dens
    return count, float(w.mean()), float(((w - w.mean()) ** 2).sum())


def monte_carlo_integral(q, samples: int = 100_000, seed: int = 0, temper: float = 0.9,
                         shard_size: int = 100_000, workers: int = 1,
                         min_margin: float = 0.0) -> IntegralResult:
    """Importance-sampling estimate of the x-space integral.

    The proposal draws ``zeta_j`` independently with density proportional to
    ``(1 + |zeta_j|^2)^(-e'_j)``, where ``e'_j = 1 + temper (e_j - 1)``;
    ``temper = 1`` is the exact law (zero variance). Each sample is mapped to
    ``x`` and weighted by integrand times Jacobian over proposal density.
    Shards use independent streams spawned from ``seed``, so the result does
    not depend on ``workers``.
    """
    qv = _q(q)
    margins = qv.margins()
    bad = np.flatnonzero(margins <= min_margin)
    if bad.size:
        j = int(bad[0]) + 1
        raise DivergentIntegralError(
            f"refusing Monte Carlo: margin {margins[bad[0]]:.3g} at j={j} (integral diverges or is marginal)", j)
    if not 0.0 < temper <= 1.0:
        raise DomainError("temper must lie in (0, 1]")
    exps = 1.0 + temper * margins
    counts = [shard_size] * (samples // shard_size)
    if samples % shard_size:
        counts.append(samples % shard_size)
    seqs = np.random.SeedSequence(seed).spawn(len(counts))
    jobs = list(zip(counts, seqs))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda cs: _shard(qv, exps, *cs), jobs))
    else:
        parts = [_shard(qv, exps, *cs) for cs in jobs]
    acc = (0, 0.0, 0.0)
    for p in parts:
        acc = _merge(acc, p)
    count, mean, m2 = acc
    var = m2 / (count - 1) if count > 1 else 0.0
    desc = "zeta_j ~ (e'_j - 1)/pi (1+|zeta_j|^2)^(-e'_j), e' = " + ", ".join(f"{e:.6g}" for e in exps)
    return IntegralResult(mean, math.sqrt(var / count), count, seed, "monte-carlo", desc)


def quadrature_integral(q) -> IntegralResult:
    """``n = 1`` only: ``2 pi int_0^inf r (1 + r^2)^(-q_0) dr`` by adaptive quadrature."""
    qv = _q(q)
    if qv.n != 1:
        raise DomainError("quadrature is implemented for n = 1")
    closed_form_integral(qv)
    q0 = qv.q[0]
    val, err = integrate.quad(lambda r: r * (1.0 + r * r) ** (-q0), 0.0, np.inf)
    return IntegralResult(2 * math.pi * val, 0.0, 0, 0, "quadrature", f"abs error estimate {2 * math.pi * err:.3e}")


def divergence_witness(p: float, n: int, sizes: Sequence[int] = (10**3, 10**4, 10**5),
                       seed: int = 0, proposal_exponent: float = 1.5) -> list[float]:
    """Running Monte Carlo means for ``q = (p, 0, ..., 0)`` at increasing sample sizes.

    Uses a fixed heavy-tailed proposal so the estimator is defined even when
    the integral diverges; a diverging integral shows up as means that keep
    climbing. Informational only.
    """
    qv = ExponentVector((p,) + (0.0,) * (n - 1))
    exps = np.full(n, proposal_exponent)
    rng_seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    out = []
    acc = (0, 0.0, 0.0)
    prev = 0
    for size, ss in zip(sizes, rng_seqs):
        acc = _merge(acc, _shard(qv, exps, size - prev, ss))
        prev = size
        out.append(acc[1])
    return out
