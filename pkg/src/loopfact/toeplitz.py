"""Finite sections of Toeplitz and Hankel operators with Laurent symbols.

Basis conventions. For scalar symbols the Hardy space ``H+`` is spanned by
``z^0, z^1, ...`` and ``H-`` by ``z^-1, z^-2, ...``. Blocks are ordered the
way the vector-valued basis ``..., e1 z^(j+1), e2 z^(j+1), e1 z^j, ...`` is:
columns (sources in ``H+``) by descending degree ``K-1, ..., 0`` and rows
(targets in ``H-``) by descending degree ``-1, ..., -K``. The
``interleaved-vector`` tag puts ``e1`` before ``e2`` at each degree.

For polynomial symbols the Hankel block ``C(g) = P- g P+`` has finite rank
and is captured exactly by a section of size ``K = -min_deg(g)``, which is
why determinants are computed as ``det(1 - C*C)`` instead of from growing
Toeplitz sections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import config
from .errors import ConvergenceError, DegenerateLoopError, DomainError
from .loops import LaurentPoly, MatrixLoop, torus_loop

SCALAR = "scalar-monomial"
INTERLEAVED = "interleaved-vector"


@dataclass(frozen=True)
class FiniteSection:
    """A dense block together with the ordered basis it is written in.

    ``row_degrees``/``col_degrees`` list the monomial degree of each basis
    vector; for the interleaved tag each degree appears twice (``e1`` then
    ``e2``).
    """

    matrix: np.ndarray
    basis_tag: str
    row_degrees: tuple
    col_degrees: tuple
    exact: bool = True
    tail_bound: float = 0.0

    def __post_init__(self):
        per = 2 if self.basis_tag == INTERLEAVED else 1
        if self.matrix.shape != (len(self.row_degrees) * per, len(self.col_degrees) * per):
            raise ValueError("matrix shape does not match the declared basis")

    def to_csv(self) -> str:
        """Row-major ``re,im`` pairs, one matrix row per line."""
        lines = []
        for row in self.matrix:
            lines.append(",".join(f"{v.real:.17g},{v.imag:.17g}" for v in row))
        return "\n".join(lines) + "\n"


class SigmaValues(NamedTuple):
    sigma0_sq: float
    sigma1_sq: float
    a: float


# ---------------------------------------------------------------------------
# scalar operator blocks


def multiplication_block(p: LaurentPoly, row_degrees, col_degrees) -> np.ndarray:
    """Matrix of ``f -> p f`` between monomial bases: entry ``p[r - c]``."""
    r = np.asarray(row_degrees, dtype=int)[:, None]
    c = np.asarray(col_degrees, dtype=int)[None, :]
    if p.is_zero():
        return np.zeros((r.shape[0], c.shape[1]), dtype=complex)
    k = r - c - p.min_deg
    coeffs = p.coeffs
    ok = (k >= 0) & (k < len(coeffs))
    out = np.zeros(k.shape, dtype=complex)
    out[ok] = coeffs[k[ok]]
    return out


def plus_degrees(K: int) -> list[int]:
    return list(range(K - 1, -1, -1))


def minus_degrees(K: int) -> list[int]:
    return list(range(-1, -K - 1, -1))


def hankel_matrix(p: LaurentPoly, K: int) -> np.ndarray:
    """``C(p) = P- p P+`` restricted to ``z^0..z^(K-1) -> z^-1..z^-K``."""
    return multiplication_block(p, minus_degrees(K), plus_degrees(K))


def _hankel_support(p: LaurentPoly) -> int:
    return max(0, -p.min_deg) if not p.is_zero() else 0


def _omitted_frobenius(p: LaurentPoly, K: int) -> float:
    total = 0.0
    for m, c in p.to_dict().items():
        if m >= 0:
            continue
        j_lo, j_hi = max(0, -K - m), min(K - 1, -1 - m)
        inside = max(0, j_hi - j_lo + 1)
        total += abs(c) ** 2 * (-m - inside)
    return math.sqrt(total)


def hankel_block(symbol, size: int | None = None) -> FiniteSection:
    """Finite section of ``P- g P+`` for a scalar or 2x2 matrix symbol.

    ``size`` is the number of degrees kept on each side (``z^0..z^(K-1)``
    and ``z^-1..z^-K``). The default captures every nonzero entry, so
    ``exact`` is set; a smaller size clears it and reports the Frobenius
    norm of the omitted entries as ``tail_bound``.
    """
    if isinstance(symbol, LaurentPoly):
        need = _hankel_support(symbol)
        K = need if size is None else size
        mat = hankel_matrix(symbol, K)
        tail = _omitted_frobenius(symbol, K)
        return FiniteSection(mat, SCALAR, tuple(minus_degrees(K)), tuple(plus_degrees(K)),
                             exact=tail == 0.0, tail_bound=tail)
    if isinstance(symbol, MatrixLoop):
        need = max(_hankel_support(e) for e in symbol.entries)
        K = need if size is None else size
        mat = np.zeros((2 * K, 2 * K), dtype=complex)
        tail2 = 0.0
        for i in range(2):
            for j in range(2):
                e = symbol[i, j]
                mat[i::2, j::2] = hankel_matrix(e, K)
                tail2 += _omitted_frobenius(e, K) ** 2
        return FiniteSection(mat, INTERLEAVED, tuple(minus_degrees(K)), tuple(plus_degrees(K)),
                             exact=tail2 == 0.0, tail_bound=math.sqrt(tail2))
    raise TypeError("symbol must be a LaurentPoly or MatrixLoop")


def toeplitz_block(symbol: MatrixLoop, K: int) -> np.ndarray:
    """``A(g) = P+ g P+`` on ``z^0..z^(K-1)``, interleaved basis, descending degrees."""
    mat = np.zeros((2 * K, 2 * K), dtype=complex)
    for i in range(2):
        for j in range(2):
            mat[i::2, j::2] = multiplication_block(symbol[i, j], plus_degrees(K), plus_degrees(K))
    return mat


def cross_hankel_block(symbol: MatrixLoop, K: int) -> np.ndarray:
    """``B(g) = P+ g P-`` from ``z^-1..z^-K`` into ``z^0..z^(K-1)``, interleaved."""
    mat = np.zeros((2 * K, 2 * K), dtype=complex)
    for i in range(2):
        for j in range(2):
            mat[i::2, j::2] = multiplication_block(symbol[i, j], plus_degrees(K), minus_degrees(K))
    return mat


# ---------------------------------------------------------------------------
# B-matrix


def _xs(x) -> np.ndarray:
    if isinstance(x, LaurentPoly):
        if x.is_zero():
            return np.zeros(0, dtype=complex)
        if x.max_deg < 0:
            return x.negative_coeffs(-x.min_deg)
        if x.min_deg >= 1:
            return x.dense(1, x.max_deg)
        raise DomainError("b_matrix needs x supported in degrees 1..n (or -n..-1)")
    return np.asarray(list(x), dtype=complex)


def b_matrix(x) -> FiniteSection:
    """Lower-triangular Toeplitz matrix with ``x_n`` on the diagonal.

    Entry ``(r, c)`` is ``x_{n-(r-c)}`` for ``r >= c``. ``x`` is either the
    sequence ``x_1..x_n`` or a LaurentPoly supported in ``1..n`` (or in
    ``-n..-1``, read through ``z^-j -> z^j``).
    """
    xs = _xs(x)
    n = len(xs)
    r = np.arange(n)[:, None]
    c = np.arange(n)[None, :]
    k = n - (r - c)  # 1-based index into xs
    mat = np.zeros((n, n), dtype=complex)
    low = r >= c
    mat[low] = xs[k[low] - 1]
    degs = tuple(range(1, n + 1))
    return FiniteSection(mat, SCALAR, degs, degs)


def det_one_plus_bbstar(x) -> float:
    """``det(1 + B B*)`` for the B-matrix of ``x``; 1 for empty ``x``."""
    b = b_matrix(x).matrix
    if b.size == 0:
        return 1.0
    m = np.eye(len(b)) + b @ b.conj().T
    return float(np.prod(np.diag(np.linalg.cholesky(m)).real) ** 2)


def shifted_x(x, level: int) -> np.ndarray:
    """``x_{l+1}, ..., x_n``: the coefficients of ``sum_j x_{l+j} z^j``."""
    return _xs(x)[level:]


# ---------------------------------------------------------------------------
# determinants


def _det_one_minus(mat: np.ndarray) -> float:
    if mat.size == 0:
        return 1.0
    s = np.linalg.svd(mat, compute_uv=False)
    return float(np.prod((1.0 - s) * (1.0 + s)))


def sigma0_sq(g: MatrixLoop) -> float:
    """``det(1 - C*C) = det A(g)*A(g)`` on the exactly containing section."""
    return _det_one_minus(hankel_block(g).matrix)


def _check_unitary(g: MatrixLoop, tol: float):
    lo, hi = g.window
    samples = max(config.DEFAULT_SAMPLES, 4 * (hi - lo + 1))
    res = g.unitarity_residual(samples)
    if res > tol:
        raise DomainError(f"symbol is not SU(2)-valued: unitarity residual {res:.3e}")


def sigma_values(g: MatrixLoop, tol: float = config.UNITARY_TOL) -> SigmaValues:
    """``|sigma_0|^2``, ``|sigma_1|^2`` and ``a = |sigma_1|/|sigma_0|`` of a polynomial SU(2) loop.

    ``|sigma_1|^2`` is ``|sigma_0|^2`` of the loop conjugated by
    ``diag(z^(1/2), z^(-1/2))``, which for Laurent loops is the integer
    relabeling ``(b, c) -> (z b, z^-1 c)``.
    """
    _check_unitary(g, tol)
    s0 = sigma0_sq(g)
    s1 = sigma0_sq(g.conjugate_by_shift(1))
    if s0 <= 0.0 or s1 <= 0.0:
        raise DegenerateLoopError(f"loop is not in the big cell (det values {s0:.3e}, {s1:.3e})")
    return SigmaValues(s0, s1, math.sqrt(s1 / s0))


def toeplitz_det_product(g: MatrixLoop, tol: float = config.UNITARY_TOL) -> float:
    """``det(A(g) A(g)*)`` computed as ``det(1 - C(g) C(g)*)``."""
    _check_unitary(g, tol)
    c = hankel_block(g).matrix
    if c.size == 0:
        return 1.0
    val = float(np.linalg.det(np.eye(len(c)) - c @ c.conj().T).real)
    if val <= 0.0:
        raise DegenerateLoopError(f"loop is not in the big cell (det = {val:.3e})")
    return val


def toeplitz_section_det(g: MatrixLoop, K: int) -> float:
    """``det(A_K A_K*)`` for the K-degree finite section.

    Truncation cuts the symbol at both ends, so for large K this tends to
    ``det(A A*)`` times the matching determinant of the reflected symbol
    ``g(1/z)``, not to ``det(A A*)`` alone.
    """
    a = toeplitz_block(g, K)
    return float(np.linalg.det(a @ a.conj().T).real)


class SzegoResult(NamedTuple):
    value: float
    previous: float
    degree: int
    tail_bound: float


def szego_torus(chi: LaurentPoly, degree: int | None = None, tol: float = config.SECTION_TOL,
                max_degree: int = 512) -> SzegoResult:
    """``|sigma_0|^2`` of ``exp((chi - chi*) h_1)`` by section doubling.

    Each section truncates the exponential at ``degree`` and evaluates
    ``det(1 - C*C)`` exactly for the truncated symbol; doubling stops when
    two consecutive values differ by less than ``tol``.
    """
    if chi.is_zero():
        return SzegoResult(1.0, 1.0, 0, 0.0)
    N = degree or max(8, 2 * chi.max_deg)
    prev = None
    while True:
        t = torus_loop(chi, N, tol=math.inf)
        val = sigma0_sq(t.loop)
        if prev is not None and abs(val - prev) < tol:
            return SzegoResult(val, prev, N, t.tail_bound)
        if 2 * N > max_degree:
            raise ConvergenceError(
                f"torus section did not settle by degree {N}",
                values=(prev if prev is not None else float("nan"), val))
        prev, N = val, 2 * N


def szego_prediction(chi: LaurentPoly) -> float:
    """``exp(-2 sum_j j |chi_j|^2)``."""
    return math.exp(-2.0 * sum(d * abs(c) ** 2 for d, c in chi.to_dict().items()))
