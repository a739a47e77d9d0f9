"""Affine sl(2) Weyl group combinatorics on the coroot lattice.

Coroots are integer pairs ``(a, b)`` meaning ``a h_1 + b c``. The simple
coroots are ``h_0 = (-1, 1)`` and ``h_1 = (1, 0)``; the pairings needed are

=========  =========
``alpha_0``  ``-2a``
``alpha_1``  ``2a``
``Lambda_0`` ``b``
``Lambda_1`` ``a + b``
``delta``    ``a + 2b``
=========  =========

A word lists its letters in *application order*: ``AffineWord((0, 1))`` is
``s_0`` followed by ``s_1``, i.e. the group element ``s_1 s_0``. Use
:meth:`AffineWord.from_product` to read the usual left-to-right product
notation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import ConsistencyError, DomainError, ParseError
from .loops import LaurentPoly, MatrixLoop


@dataclass(frozen=True, order=True)
class AffineCoroot:
    a: int
    b: int

    def __add__(self, other: "AffineCoroot") -> "AffineCoroot":
        return AffineCoroot(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "AffineCoroot") -> "AffineCoroot":
        return AffineCoroot(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "AffineCoroot":
        return AffineCoroot(-self.a, -self.b)

    def scale(self, k: int) -> "AffineCoroot":
        return AffineCoroot(k * self.a, k * self.b)

    def alpha(self, i: int) -> int:
        """Simple root ``alpha_i`` paired with this coroot."""
        if i == 0:
            return -2 * self.a
        if i == 1:
            return 2 * self.a
        raise DomainError(f"no simple root alpha_{i} in affine sl2")

    @property
    def delta(self) -> int:
        return self.a + 2 * self.b


H0 = AffineCoroot(-1, 1)
H1 = AffineCoroot(1, 0)
CENTER = AffineCoroot(0, 1)


def simple_coroot(i: int) -> AffineCoroot:
    if i not in (0, 1):
        raise DomainError(f"no simple coroot h_{i} in affine sl2")
    return H0 if i == 0 else H1


@dataclass(frozen=True)
class Weight:
    """Integral functional ``m0 Lambda_0 + m1 Lambda_1`` (the ``delta``/``d`` part never enters)."""

    m0: int
    m1: int

    def __call__(self, h: AffineCoroot) -> int:
        return self.m0 * h.b + self.m1 * (h.a + h.b)

    def is_antidominant(self) -> bool:
        return self.m0 <= 0 and self.m1 <= 0


MINUS_LAMBDA0 = Weight(-1, 0)
MINUS_LAMBDA1 = Weight(0, -1)


def reflect(i: int, h: AffineCoroot) -> AffineCoroot:
    """``s_i(h) = h - alpha_i(h) h_i``."""
    return h - simple_coroot(i).scale(h.alpha(i))


@dataclass(frozen=True)
class AffineWord:
    """Letters ``gamma_1, gamma_2, ...`` in {0, 1}, in application order."""

    letters: tuple = ()

    def __post_init__(self):
        letters = tuple(int(x) for x in self.letters)
        if any(x not in (0, 1) for x in letters):
            raise DomainError(f"letters must be 0 or 1, got {self.letters!r}")
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    @classmethod
    def alternating(cls, n: int, first: int = 0) -> "AffineWord":
        return cls(tuple((first + k) % 2 for k in range(n)))

    @classmethod
    def from_product(cls, text: str) -> "AffineWord":
        """Parse product notation such as ``"s1 s0"`` (rightmost acts first)."""
        tokens = re.findall(r"\S+", text.replace("*", " ").replace("·", " "))
        letters = []
        for pos, tok in enumerate(tokens):
            m = re.fullmatch(r"s_?([01])", tok)
            if not m:
                raise ParseError(f"bad Weyl letter {tok!r}", location=f"token {pos}")
            letters.append(int(m.group(1)))
        return cls(tuple(reversed(letters)))

    def to_product(self) -> str:
        return " ".join(f"s{g}" for g in reversed(self.letters))

    def is_reduced(self) -> bool:
        return all(x != y for x, y in zip(self.letters, self.letters[1:]))

    def require_reduced(self):
        if not self.is_reduced():
            raise DomainError(f"word {self.letters} is not reduced (letters must alternate)")


def _word(word) -> AffineWord:
    return word if isinstance(word, AffineWord) else AffineWord(tuple(word))


def reduced_words(max_length: int) -> list[AffineWord]:
    """All reduced words of length ``<= max_length``."""
    out = [AffineWord(())]
    for n in range(1, max_length + 1):
        out += [AffineWord.alternating(n, 0), AffineWord.alternating(n, 1)]
    return out


def inversion_coroots(word) -> list[AffineCoroot]:
    """``h_{tau_j} = s_{gamma_1} ... s_{gamma_{j-1}} (h_{gamma_j})``."""
    word = _word(word)
    word.require_reduced()
    out = []
    for j, g in enumerate(word.letters):
        h = simple_coroot(g)
        for i in reversed(word.letters[:j]):
            h = reflect(i, h)
        out.append(h)
    return out


def exponents(weight: Weight, word, strict: bool = False) -> list[int]:
    """``lambda_j = -weight(h_{tau_j})``.

    Negative values signal a non-antidominant weight or a non-reduced word
    and raise. Zero is legitimate for weights such as ``-Lambda_1`` (whose
    pairing with ``h_0`` vanishes); ``strict=True`` rejects it too.
    """
    if not weight.is_antidominant():
        raise DomainError(f"{weight} is not antidominant")
    vals = [-weight(h) for h in inversion_coroots(word)]
    for j, v in enumerate(vals, start=1):
        if v < 0 or (strict and v == 0):
            raise DomainError(f"exponent lambda_{j} = {v} violates positivity")
    return vals


def haar_exponents_delta(word) -> list[int]:
    """``delta(h_{tau_j}) - 1``."""
    return [h.delta - 1 for h in inversion_coroots(word)]


def haar_exponents_roots(word) -> list[int]:
    """``-sum_{i<j} gamma_i(s_{gamma_{i+1}} ... s_{gamma_{j-1}} h_{gamma_j})``."""
    word = _word(word)
    word.require_reduced()
    out = []
    for j, g in enumerate(word.letters):
        v = simple_coroot(g)
        total = 0
        for i in range(j - 1, -1, -1):
            gi = word.letters[i]
            total -= v.alpha(gi)
            v = reflect(gi, v)
        out.append(total)
    return out


def haar_exponents(word) -> list[int]:
    """Haar exponents, computed both ways and required to agree."""
    first = haar_exponents_delta(word)
    second = haar_exponents_roots(word)
    if first != second:
        raise ConsistencyError(f"Haar exponent formulas disagree: {first} vs {second}")
    return first


# ---------------------------------------------------------------------------
# loop representatives


def s0_loop() -> MatrixLoop:
    return MatrixLoop(0.0, LaurentPoly.monomial(-1, 1j), LaurentPoly.monomial(1, 1j), 0.0)


def s1_loop() -> MatrixLoop:
    return MatrixLoop(0.0, 1j, 1j, 0.0)


def weyl_representative(word) -> MatrixLoop:
    """``s_{gamma_n} ... s_{gamma_1}`` as a loop."""
    g = MatrixLoop.identity()
    for letter in _word(word).letters:
        g = (s0_loop() if letter == 0 else s1_loop()) @ g
    return g


def diagram_automorphism(g: MatrixLoop) -> MatrixLoop:
    """``[[a, b], [c, d]] -> [[d, c z^-1], [b z, a]]``; an involution swapping ``s_0`` and ``s_1``."""
    return MatrixLoop(g.d, g.c.shift(-1), g.b.shift(1), g.a)


@dataclass(frozen=True)
class CellDescription:
    """Dimension of the cell and the root-subgroup coordinates that fill it.

    ``upper`` lists degrees ``k`` contributing ``x z^k`` to the (1,2) entry of
    the unipotent coordinate loop, ``lower`` likewise for the (2,1) entry.
    """

    dimension: int
    upper: tuple
    lower: tuple

    def coordinate_loop(self, upper_coeffs=(), lower_coeffs=()) -> MatrixLoop:
        up = LaurentPoly(dict(zip(self.upper, upper_coeffs)))
        lo = LaurentPoly(dict(zip(self.lower, lower_coeffs)))
        return MatrixLoop(1.0, up, lo, 1.0)


def _in_positive_nilpotent(m: MatrixLoop) -> bool:
    a, b, c, d = m.entries
    holo = all(e.is_zero() or e.min_deg >= 0 for e in (a, b, d))
    return holo and (c.is_zero() or c.min_deg >= 1) and a[0] == 0 and d[0] == 0


def cell_dimension_and_coords(word) -> CellDescription:
    """Root vectors ``X`` of the negative nilpotent algebra with ``w X w^-1`` positive.

    Negative root vectors are ``e z^-k`` (``k >= 1``) and ``f z^-k``
    (``k >= 0``); the word has length ``n`` so only ``k <= n`` can qualify.
    """
    word = _word(word)
    word.require_reduced()
    n = len(word)
    w = weyl_representative(word)
    winv = w.adjugate()
    upper, lower = [], []
    for k in range(0, n + 1):
        if k >= 1:
            e = MatrixLoop(0.0, LaurentPoly.monomial(-k), 0.0, 0.0)
            if _in_positive_nilpotent(w @ e @ winv):
                upper.append(-k)
        f = MatrixLoop(0.0, 0.0, LaurentPoly.monomial(-k), 0.0)
        if _in_positive_nilpotent(w @ f @ winv):
            lower.append(-k)
    dim = len(upper) + len(lower)
    if dim != n:
        raise ConsistencyError(f"cell dimension {dim} differs from word length {n}")
    return CellDescription(dim, tuple(upper), tuple(lower))
