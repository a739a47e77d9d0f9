"""Truncated Laurent polynomials and 2x2 matrix loops on the unit circle.

A :class:`LaurentPoly` stores the coefficients of degrees ``lo .. lo+len-1``
in a read-only complex array. Exact zeros at either end are stripped, so
``window`` is always the true support. Arithmetic never truncates; the
degree window of a product is the sum of the factor windows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from . import config
from .errors import DomainError, ParseError, TruncationError


def _frozen(arr):
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


class LaurentPoly:
    """Finitely supported map ``degree -> complex coefficient``."""

    __slots__ = ("_lo", "_c")

    def __init__(self, coeffs: Mapping[int, complex] | None = None):
        if not coeffs:
            self._lo, self._c = 0, _frozen([])
            return
        lo, hi = min(coeffs), max(coeffs)
        arr = np.zeros(hi - lo + 1, dtype=complex)
        for deg, val in coeffs.items():
            arr[deg - lo] += val
        self._set(lo, arr)

    def _set(self, lo, arr):
        nz = np.flatnonzero(arr)
        if nz.size == 0:
            self._lo, self._c = 0, _frozen([])
        else:
            self._lo = int(lo + nz[0])
            self._c = _frozen(arr[nz[0]:nz[-1] + 1])

    @classmethod
    def from_array(cls, lo: int, coeffs) -> "LaurentPoly":
        """Coefficients ``coeffs[k]`` of ``z**(lo + k)``."""
        obj = cls.__new__(cls)
        obj._set(int(lo), np.asarray(coeffs, dtype=complex))
        return obj

    @classmethod
    def constant(cls, c: complex) -> "LaurentPoly":
        return cls.from_array(0, [c])

    @classmethod
    def monomial(cls, deg: int, c: complex = 1.0) -> "LaurentPoly":
        return cls.from_array(deg, [c])

    @classmethod
    def from_negative(cls, xs: Iterable[complex]) -> "LaurentPoly":
        """``sum_j xs[j-1] z**(-j)``, j = 1..n."""
        xs = np.asarray(list(xs), dtype=complex)
        return cls.from_array(-len(xs), xs[::-1])

    @classmethod
    def from_positive(cls, xs: Iterable[complex], start: int = 1) -> "LaurentPoly":
        """``sum_k xs[k] z**(start + k)``."""
        return cls.from_array(start, list(xs))

    # -- introspection -------------------------------------------------
    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def min_deg(self) -> int:
        return self._lo

    @property
    def max_deg(self) -> int:
        return self._lo + len(self._c) - 1

    @property
    def window(self) -> tuple[int, int]:
        """``(min_deg, max_deg)``; ``(0, -1)`` for the zero polynomial."""
        return self.min_deg, self.max_deg

    def is_zero(self) -> bool:
        return self._c.size == 0

    def __getitem__(self, deg: int) -> complex:
        k = deg - self._lo
        if 0 <= k < len(self._c):
            return complex(self._c[k])
        return 0j

    def to_dict(self) -> dict[int, complex]:
        return {self._lo + k: complex(v) for k, v in enumerate(self._c) if v != 0}

    def dense(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients of degrees ``lo..hi`` (zero padded, others dropped)."""
        out = np.zeros(hi - lo + 1, dtype=complex)
        for k, v in enumerate(self._c):
            d = self._lo + k
            if lo <= d <= hi:
                out[d - lo] = v
        return out

    def negative_coeffs(self, n: int) -> np.ndarray:
        """``[p[-1], p[-2], ..., p[-n]]``."""
        return np.array([self[-j] for j in range(1, n + 1)], dtype=complex)

    # -- arithmetic ----------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, Number):
            return LaurentPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.min_deg, other.min_deg)
        hi = max(self.max_deg, other.max_deg)
        arr = np.zeros(hi - lo + 1, dtype=complex)
        arr[self.min_deg - lo:self.max_deg - lo + 1] += self._c
        arr[other.min_deg - lo:other.max_deg - lo + 1] += other._c
        return LaurentPoly.from_array(lo, arr)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly.from_array(self._lo, -self._c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return LaurentPoly.from_array(self._lo, self._c * other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return LaurentPoly()
        return LaurentPoly.from_array(self._lo + other._lo, np.convolve(self._c, other._c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return self * (1.0 / other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        out = LaurentPoly.constant(1.0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``z**k``."""
        if self.is_zero():
            return self
        return LaurentPoly.from_array(self._lo + k, self._c)

    def star(self) -> "LaurentPoly":
        """``sum conj(c_n) z**(-n)``: the pointwise complex conjugate on the circle."""
        if self.is_zero():
            return self
        return LaurentPoly.from_array(-self.max_deg, np.conj(self._c[::-1]))

    def restrict(self, lo: int | None = None, hi: int | None = None) -> "LaurentPoly":
        """Keep only degrees in ``[lo, hi]``."""
        if self.is_zero():
            return self
        lo = self.min_deg if lo is None else max(lo, self.min_deg)
        hi = self.max_deg if hi is None else min(hi, self.max_deg)
        if lo > hi:
            return LaurentPoly()
        return LaurentPoly.from_array(lo, self._c[lo - self._lo:hi - self._lo + 1])

    def singular_part(self) -> "LaurentPoly":
        """Strictly negative degrees."""
        return self.restrict(None, -1)

    def plus_part(self) -> "LaurentPoly":
        """Degrees >= 0."""
        return self.restrict(0, None)

    def series_inverse(self, order: int) -> "LaurentPoly":
        """Power-series inverse of a holomorphic polynomial, up to degree ``order``."""
        if not self.is_zero() and self.min_deg < 0:
            raise DomainError("series_inverse needs a holomorphic polynomial")
        c0 = self[0]
        if abs(c0) == 0.0:
            raise DomainError("series_inverse needs a nonzero constant term")
        p = self.dense(0, order)
        inv = np.zeros(order + 1, dtype=complex)
        inv[0] = 1.0 / c0
        for k in range(1, order + 1):
            inv[k] = -np.dot(p[1:k + 1], inv[k - 1::-1]) / c0
        return LaurentPoly.from_array(0, inv)

    # -- evaluation and comparison ---------------------------------------
    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.is_zero():
            return np.zeros_like(z)
        # Horner in z on the positive-power polynomial, then scale.
        acc = np.zeros_like(z)
        for c in self._c[::-1]:
            acc = acc * z + c
        return acc * z ** self._lo

    def norm1(self) -> float:
        """Wiener norm ``sum |c_n|``; bounds the sup norm on the circle."""
        return float(np.abs(self._c).sum())

    def allclose(self, other, atol: float = config.ATOL) -> bool:
        diff = self - self._coerce(other)
        return diff.is_zero() or float(np.abs(diff._c).max()) <= atol

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, LaurentPoly) else other
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._lo == other._lo and np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash((self._lo, self._c.tobytes()))

    def __repr__(self):
        if self.is_zero():
            return "LaurentPoly(0)"
        terms = ", ".join(f"{d}: {c:.6g}" for d, c in self.to_dict().items())
        return f"LaurentPoly({{{terms}}})"


def star(p: LaurentPoly) -> LaurentPoly:
    return p.star()


def singular_part(p: LaurentPoly) -> LaurentPoly:
    return p.singular_part()


def plus_part(p: LaurentPoly) -> LaurentPoly:
    return p.plus_part()


# ---------------------------------------------------------------------------


class MatrixLoop:
    """2x2 array of :class:`LaurentPoly`, stored row major as ``(a, b, c, d)``."""

    __slots__ = ("entries",)

    def __init__(self, a, b, c, d):
        self.entries = tuple(
            e if isinstance(e, LaurentPoly) else LaurentPoly.constant(e) for e in (a, b, c, d)
        )

    @classmethod
    def identity(cls) -> "MatrixLoop":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def constant(cls, m) -> "MatrixLoop":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def diag(cls, p: LaurentPoly, q: LaurentPoly) -> "MatrixLoop":
        return cls(p, 0.0, 0.0, q)

    @property
    def a(self):
        return self.entries[0]

    @property
    def b(self):
        return self.entries[1]

    @property
    def c(self):
        return self.entries[2]

    @property
    def d(self):
        return self.entries[3]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[2 * i + j]

    @property
    def window(self) -> tuple[int, int]:
        nz = [e for e in self.entries if not e.is_zero()]
        if not nz:
            return 0, -1
        return min(e.min_deg for e in nz), max(e.max_deg for e in nz)

    def __matmul__(self, other: "MatrixLoop") -> "MatrixLoop":
        a, b, c, d = self.entries
        p, q, r, s = other.entries
        return MatrixLoop(a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)

    def __mul__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        return MatrixLoop(*(e * scalar for e in self.entries))

    __rmul__ = __mul__

    def __add__(self, other: "MatrixLoop") -> "MatrixLoop":
        return MatrixLoop(*(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: "MatrixLoop") -> "MatrixLoop":
        return MatrixLoop(*(x - y for x, y in zip(self.entries, other.entries)))

    def det(self) -> LaurentPoly:
        a, b, c, d = self.entries
        return a * d - b * c

    def adjugate(self) -> "MatrixLoop":
        """Inverse for determinant-one loops."""
        a, b, c, d = self.entries
        return MatrixLoop(d, -b, -c, a)

    def star(self) -> "MatrixLoop":
        """Pointwise conjugate transpose on the circle."""
        a, b, c, d = self.entries
        return MatrixLoop(a.star(), c.star(), b.star(), d.star())

    def conjugate_by_shift(self, k: int = 1) -> "MatrixLoop":
        """``diag(z**(k/2), z**(-k/2)) g diag(z**(-k/2), z**(k/2))``."""
        a, b, c, d = self.entries
        return MatrixLoop(a, b.shift(k), c.shift(-k), d)

    def map(self, fn) -> "MatrixLoop":
        return MatrixLoop(*(fn(e) for e in self.entries))

    def __call__(self, z) -> np.ndarray:
        """Values at points ``z`` (no circle check); shape ``z.shape + (2, 2)``."""
        z = np.asarray(z, dtype=complex)
        vals = [e(z) for e in self.entries]
        out = np.empty(z.shape + (2, 2), dtype=complex)
        out[..., 0, 0], out[..., 0, 1], out[..., 1, 0], out[..., 1, 1] = vals
        return out

    def allclose(self, other: "MatrixLoop", atol: float = config.ATOL) -> bool:
        return all(x.allclose(y, atol) for x, y in zip(self.entries, other.entries))

    def max_abs_diff(self, other: "MatrixLoop", samples: int = config.DEFAULT_SAMPLES) -> float:
        pts = CircleSampling(samples).points
        return float(np.abs(self(pts) - other(pts)).max())

    def unitarity_residual(self, samples: int = config.DEFAULT_SAMPLES) -> float:
        """``max_theta ||g(theta)^* g(theta) - I||`` (spectral norm) over the sample grid."""
        vals = self(CircleSampling(samples).points)
        prod = np.conj(np.swapaxes(vals, -1, -2)) @ vals - np.eye(2)
        return float(np.linalg.norm(prod, ord=2, axis=(-2, -1)).max())

    def __repr__(self):
        return "MatrixLoop(\n  " + ",\n  ".join(repr(e) for e in self.entries) + ")"


@dataclass(frozen=True)
class CircleSampling:
    """The ``count``-th roots of unity."""

    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("sampling count must be positive")

    @classmethod
    def for_window(cls, lo: int, hi: int, minimum: int = 8) -> "CircleSampling":
        """Enough points that degrees ``lo..hi`` are recoverable from values."""
        return cls(max(minimum, hi - lo + 1, 2 * max(abs(lo), abs(hi)) + 1))

    @property
    def points(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.count) / self.count)

    def coefficients(self, values, lo: int, hi: int) -> LaurentPoly:
        """Recover degrees ``lo..hi`` from samples by discrete Fourier inversion."""
        if hi - lo + 1 > self.count:
            raise DomainError("too few samples to determine the requested window")
        c = np.fft.fft(np.asarray(values, dtype=complex)) / self.count
        degs = np.arange(lo, hi + 1)
        return LaurentPoly.from_array(lo, c[degs % self.count])


def evaluate(loop, point, tol: float = config.UNIT_CIRCLE_TOL):
    """Value of a scalar or matrix loop at a point of the unit circle."""
    pts = np.asarray(point, dtype=complex)
    if np.any(np.abs(np.abs(pts) - 1.0) > tol):
        raise DomainError(f"evaluation point off the unit circle: {point!r}")
    return loop(pts)


# ---------------------------------------------------------------------------
# building blocks


def a_factor(zeta: complex) -> float:
    """``(1 + |zeta|^2)^(-1/2)``."""
    return 1.0 / math.sqrt(1.0 + abs(zeta) ** 2)


NEGATIVE = "negative-power"
POSITIVE = "positive-power"


def elementary_loop(j: int, zeta: complex, orientation: str = NEGATIVE) -> MatrixLoop:
    """``a(zeta) [[1, zeta z^-j], [-conj(zeta) z^j, 1]]`` or its positive-power twin."""
    zeta = complex(zeta)
    s = a_factor(zeta)
    if orientation == NEGATIVE:
        k = -j
    elif orientation == POSITIVE:
        k = j
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    return MatrixLoop(
        LaurentPoly.constant(s),
        LaurentPoly.monomial(k, s * zeta),
        LaurentPoly.monomial(-k, -s * zeta.conjugate()),
        LaurentPoly.constant(s),
    )


def exp_series(chi: LaurentPoly, order: int) -> np.ndarray:
    """Coefficients ``0..order`` of ``exp(chi)`` for ``chi`` with degrees >= 1."""
    c = chi.dense(0, order)
    out = np.zeros(order + 1, dtype=complex)
    out[0] = 1.0
    m = np.arange(order + 1)
    for k in range(1, order + 1):
        out[k] = np.dot(m[1:k + 1] * c[1:k + 1], out[k - 1::-1]) / k
    return out


def exp_tail_bound(chi: LaurentPoly, order: int) -> float:
    """Wiener-norm bound on the part of ``exp(chi)`` above degree ``order``.

    Uses the majorant ``exp(|chi|)`` with ``|chi| = sum |chi_m| z^m``.
    """
    maj = LaurentPoly.from_array(chi.min_deg, np.abs(chi.coeffs)) if not chi.is_zero() else chi
    total = math.exp(maj.norm1())
    partial = float(exp_series(maj, order).real.sum())
    return max(total - partial, 0.0) + 8 * np.finfo(float).eps * total


class TorusLoop(NamedTuple):
    loop: MatrixLoop
    tail_bound: float
    degree: int


def torus_loop(chi: LaurentPoly, degree: int | None = None, tol: float = config.TAIL_TOL,
               max_degree: int = 1024) -> TorusLoop:
    """Truncation of ``diag(exp(chi - chi*), exp(-(chi - chi*)))``.

    ``chi`` must have degrees >= 1. The exponentials are expanded as power
    series up to ``degree``; ``tail_bound`` bounds the sup-norm error of each
    entry. With ``degree=None`` the smallest degree meeting ``tol`` is used.
    """
    if not chi.is_zero() and chi.min_deg < 1:
        raise DomainError("torus_loop needs chi with only positive degrees")
    if chi.is_zero():
        return TorusLoop(MatrixLoop.identity(), 0.0, 0)
    s = math.exp(sum(abs(v) for v in chi.coeffs))

    def bound(k):
        return 2.0 * s * exp_tail_bound(chi, k)

    if degree is None:
        degree = max(chi.max_deg, 1)
        while bound(degree) > tol:
            if degree >= max_degree:
                raise TruncationError(
                    f"no truncation up to degree {max_degree} meets tol={tol}", bound(degree))
            degree = min(2 * degree, max_degree)
    tail = bound(degree)
    if tail > tol:
        raise TruncationError(f"degree {degree} gives tail bound {tail:.3e} > {tol:.1e}", tail)
    ep = LaurentPoly.from_array(0, exp_series(chi, degree))
    em = LaurentPoly.from_array(0, exp_series(-chi, degree))
    loop = MatrixLoop.diag(ep * em.star(), em * ep.star())
    return TorusLoop(loop, tail, degree)


# ---------------------------------------------------------------------------
# document format: per entry a list of [degree, re, im]


def poly_to_doc(p: LaurentPoly) -> list:
    return [[d, c.real, c.imag] for d, c in sorted(p.to_dict().items())]


def poly_from_doc(doc, location: str = "") -> LaurentPoly:
    if not isinstance(doc, list):
        raise ParseError("expected a list of [degree, re, im] triples", location)
    out = {}
    for k, item in enumerate(doc):
        loc = f"{location}[{k}]"
        if not (isinstance(item, (list, tuple)) and len(item) == 3):
            raise ParseError("expected [degree, re, im]", loc)
        deg, re, im = item
        if isinstance(deg, bool) or not isinstance(deg, int):
            raise ParseError("degree must be an integer", loc)
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
            raise ParseError("re and im must be numbers", loc)
        out[deg] = out.get(deg, 0j) + complex(re, im)
    return LaurentPoly(out)


_ENTRY_KEYS = ("11", "12", "21", "22")


def loop_to_doc(g: MatrixLoop) -> dict:
    return {"entries": {k: poly_to_doc(e) for k, e in zip(_ENTRY_KEYS, g.entries)}}


def loop_from_doc(doc, location: str = "") -> MatrixLoop:
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), dict):
        raise ParseError("expected an object with an 'entries' map", location)
    ents = doc["entries"]
    missing = [k for k in _ENTRY_KEYS if k not in ents]
    if missing:
        raise ParseError(f"missing entries {missing}", f"{location}.entries")
    return MatrixLoop(*(poly_from_doc(ents[k], f"{location}.entries.{k}") for k in _ENTRY_KEYS))
