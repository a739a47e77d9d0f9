"""Check records, deterministic JSON-lines serialization and the verification suites."""

from __future__ import annotations

import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import config
from .factor import (XCoords, birkhoff_factor, check_unipotent_shape, factor_h, factor_unipotent,
                     l_matrix, ordered_product_loop, predicted_sigma, product_loop,
                     triple_product, x1_series_check, x_from_loop, x_to_zeta,
                     x_to_zeta_bruteforce, y_from_eta, y_from_loop, zeta_to_x)
from .iwasawa import build_F, iwasawa
from .loops import POSITIVE, LaurentPoly, MatrixLoop, loop_to_doc, poly_to_doc
from .measures import (closed_form_integral, criticality, finite_difference_jacobian,
                       haar_density_word, jacobian_density, monte_carlo_integral,
                       quadrature_integral)
from .toeplitz import (det_one_plus_bbstar, shifted_x, sigma_values, szego_prediction,
                       szego_torus, toeplitz_det_product)
from .weyl import (MINUS_LAMBDA0, MINUS_LAMBDA1, AffineWord, exponents, haar_exponents_delta,
                   haar_exponents_roots, reduced_words)

PLUMBING = "plumbing"


@dataclass
class Record:
    name: str
    anchor: str
    inputs: Any
    expected: Any
    actual: Any
    tolerance: float
    passed: bool

    def to_obj(self) -> dict:
        return {"name": self.name, "anchor": self.anchor, "inputs": self.inputs,
                "expected": self.expected, "actual": self.actual,
                "tolerance": self.tolerance, "pass": bool(self.passed)}


def rel_record(name, anchor, inputs, expected, actual, tol) -> Record:
    """Pass iff ``|actual - expected| <= tol * max(1, |expected|)``."""
    err = abs(actual - expected) / max(1.0, abs(expected))
    return Record(name, anchor, inputs, expected, actual, tol, bool(err <= tol))


def bound_record(name, anchor, inputs, value, tol) -> Record:
    """Pass iff a residual ``value <= tol``."""
    return Record(name, anchor, inputs, 0.0, value, tol, bool(value <= tol))


def exact_record(name, anchor, inputs, expected, actual) -> Record:
    return Record(name, anchor, inputs, expected, actual, 0.0, expected == actual)


# ---------------------------------------------------------------------------
# serialization


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return '"' + repr(x) + '"'
    s = format(x, ".17g")
    if s in ("-0", "0") or s.lstrip("-").isdigit():
        s += ".0"
    return s


def dumps(obj) -> str:
    """JSON text with every float written to 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return "true" if obj is True else "false" if obj is False else "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps([obj.real, obj.imag])
    if isinstance(obj, str):
        import json
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class Report:
    records: list = field(default_factory=list)

    def extend(self, recs):
        self.records.extend(recs)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.records)

    def summary(self) -> dict:
        failed = [r.name for r in self.records if not r.passed]
        return {"summary": True, "total": len(self.records),
                "passed": len(self.records) - len(failed), "failed": failed}

    def to_text(self) -> str:
        lines = [dumps(r.to_obj()) for r in self.records]
        lines.append(dumps(self.summary()))
        return "\n".join(lines) + "\n"


def cvec(z) -> list:
    return [[complex(v).real, complex(v).imag] for v in z]


# ---------------------------------------------------------------------------
# suites


@dataclass(frozen=True)
class SuiteContext:
    seed: int
    tol: float
    samples: int
    trunc: int

    def rng(self, suite: str, index: int = 0) -> np.random.Generator:
        """Independent stream per ``(seed, suite, index)``; stable across runs and platforms."""
        return np.random.default_rng([self.seed, zlib.crc32(suite.encode()), index])


def _rand_c(rng, n, scale):
    return scale * (rng.normal(size=n) + 1j * rng.normal(size=n)) / math.sqrt(2)


def suite_coordinates(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("coordinates")
    out = []
    for k in range(6):
        n = int(rng.integers(1, 9))
        z = _rand_c(rng, n, 0.7)
        x = zeta_to_x(z)
        inp = {"zeta": cvec(z)}
        out.append(bound_record(f"coordinates/oracle/{k}", "zeta-to-x recursion vs loop entries", inp,
                                float(np.abs(x.as_array() - x_from_loop(product_loop(z)).as_array()).max()), 1e-10))
        out.append(bound_record(f"coordinates/round-trip/{k}", "inverse peeling", inp,
                                float(np.abs(x_to_zeta(x).as_array() - z).max()), 1e-10))
        out.append(bound_record(f"coordinates/brute-force-inverse/{k}", "top-coefficient extraction", inp,
                                float(np.abs(x_to_zeta_bruteforce(x).as_array() - z).max()), 1e-10))
        out.append(exact_record(f"coordinates/top-coefficient/{k}", "top-coefficient law", inp,
                                cvec([z[-1]])[0], cvec([x.values[-1]])[0]))
        x1 = x1_series_check(z)
        out.append(rel_record(f"coordinates/x1-recursion/{k}", "x1 recursion", inp,
                              abs(x.values[0]), abs(x1), 1e-12))
    return out


def suite_determinants(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("determinants")
    out = []
    for k in range(8):
        n = int(rng.integers(1, 9))
        z = _rand_c(rng, n, 0.8)
        x = zeta_to_x(z)
        w = 1.0 + np.abs(z) ** 2
        for level in range(n):
            pred = float(np.prod(w[level:] ** np.arange(1, n - level + 1)))
            val = det_one_plus_bbstar(shifted_x(x, level))
            out.append(rel_record(f"determinants/bbstar/{k}/{level}", "hankel determinant product formula",
                                  {"zeta": cvec(z), "level": level}, 1.0, val / pred, ctx.tol))
        sv = sigma_values(product_loop(z))
        j = np.arange(1, n + 1)
        out.append(rel_record(f"determinants/sigma0/{k}", "sigma_0 product formula", {"zeta": cvec(z)},
                              float(np.prod(w ** -j.astype(float))), sv.sigma0_sq, ctx.tol))
        out.append(rel_record(f"determinants/sigma1/{k}", "sigma_1 product formula", {"zeta": cvec(z)},
                              float(np.prod(w ** -(j - 1.0))), sv.sigma1_sq, ctx.tol))
    return out


def suite_factorization(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("factorization")
    out = []
    for k in range(6):
        n = int(rng.integers(1, 7))
        xs = _rand_c(rng, n, 1.0)
        inp = {"x": cvec(xs)}
        f = factor_unipotent(xs)
        g = f.reconstruct()
        out.append(bound_record(f"factorization/unitary/{k}", "unipotent factorization", inp,
                                g.unitarity_residual(64), ctx.tol))
        out.append(Record(f"factorization/degree-windows/{k}", "unipotent factorization", inp,
                          "alpha[1,n-1] beta[0,n-2] gamma[1,n] delta[1,n-1]",
                          {k2: list(v) if v else None for k2, v in f.degree_windows().items()},
                          0.0, check_unipotent_shape(f, n)))
        z = x_to_zeta(xs)
        out.append(rel_record(f"factorization/a/{k}", "a from the determinant ratio", inp,
                              math.sqrt(float(np.prod(1 + np.abs(z.as_array()) ** 2))), f.a, ctx.tol))
        direct = birkhoff_factor(g)
        out.append(bound_record(f"factorization/direct/{k}", "direct Birkhoff factorization", inp,
                                direct.lower.max_abs_diff(f.lower), 1e-8))
    for k in range(4):
        n = int(rng.integers(0, 4))
        eta = _rand_c(rng, n + 1, 0.7)
        inp = {"eta": cvec(eta)}
        h = product_loop(eta, POSITIVE)
        fh = factor_h(y_from_eta(eta))
        out.append(bound_record(f"factorization/eta-reconstruct/{k}", "eta-family factorization", inp,
                                fh.reconstruct().max_abs_diff(h), ctx.tol))
        out.append(bound_record(f"factorization/eta-y/{k}", "diagram automorphism", inp,
                                float(np.abs(y_from_eta(eta).as_array() - y_from_loop(h).as_array()).max()),
                                1e-10))
        w = 1.0 + np.abs(eta) ** 2
        out.append(rel_record(f"factorization/eta-a2/{k}", "eta-family product formulas", inp,
                              float(1.0 / np.prod(w)), fh.a ** 2, ctx.tol))
    return out


def suite_triple(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("triple")
    out = []
    for k in range(4):
        eta = _rand_c(rng, int(rng.integers(1, 4)), 0.4)
        zeta = _rand_c(rng, int(rng.integers(1, 4)), 0.4)
        chi = LaurentPoly.from_positive(_rand_c(rng, int(rng.integers(1, 3)), 0.2))
        inp = {"eta": cvec(eta), "chi": poly_to_doc(chi), "zeta": cvec(zeta)}
        td = triple_product(eta, chi, zeta)
        sv = sigma_values(td.loop)
        out.append(rel_record(f"triple/sigma0/{k}", "triple product sigma_0", inp,
                              td.predicted.sigma0_sq, sv.sigma0_sq, 1e-6))
        out.append(rel_record(f"triple/sigma1/{k}", "triple product sigma_1", inp,
                              td.predicted.sigma1_sq, sv.sigma1_sq, 1e-6))
        out.append(rel_record(f"triple/a2/{k}", "triple product a", inp,
                              td.predicted.a ** 2, sv.a ** 2, 1e-6))
        out.append(bound_record(f"triple/l-matrix/{k}", "lower factor of the triple product", inp,
                                l_matrix(eta, chi, zeta).max_abs_diff(birkhoff_factor(td.loop).lower), 1e-8))
        lit = ordered_product_loop(eta, chi, zeta)
        out.append(rel_record(f"triple/ordered-product/{k}", "block Toeplitz determinant formula", inp,
                              predicted_sigma(eta, chi, zeta).sigma0_sq, toeplitz_det_product(lit), 1e-6))
    return out


def suite_szego(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("szego")
    out = []
    for k in range(4):
        chi = LaurentPoly.from_positive(_rand_c(rng, int(rng.integers(1, 4)), 0.25))
        res = szego_torus(chi)
        out.append(rel_record(f"szego/{k}", "Szego limit for the torus factor", {"chi": poly_to_doc(chi)},
                              szego_prediction(chi), res.value, 1e-6))
    return out


def suite_measures(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("measures")
    out = []
    for k in range(5):
        z = _rand_c(rng, int(rng.integers(1, 6)), 0.7)
        out.append(rel_record(f"measures/jacobian/{k}", "Jacobian of zeta -> x", {"zeta": cvec(z)},
                              jacobian_density(z), finite_difference_jacobian(z), 1e-4))
    out.append(rel_record("measures/quadrature/n1", "closed-form integral", {"q": [2.0]},
                          math.pi, quadrature_integral([2.0]).value, 1e-3))
    for q in ([2.0], [2.0, 1.0], [3.0, 0.0]):
        ref = closed_form_integral(q)
        mc = monte_carlo_integral(q, ctx.samples, seed=ctx.seed)
        out.append(Record(f"measures/monte-carlo/{','.join(map(str, q))}", "closed-form integral",
                          {"q": q, "samples": ctx.samples, "seed": ctx.seed, "proposal": mc.proposal},
                          ref, {"value": mc.value, "stderr": mc.stderr}, 3 * mc.stderr,
                          abs(mc.value - ref) <= 3 * mc.stderr))
    for n in range(1, 11):
        p = 2.0 - 1.0 / n
        out.append(exact_record(f"measures/criticality/{n}", "critical exponent", {"p": p, "n": n},
                                [False, True], [criticality(p, n), criticality(p + 0.05, n)]))
    for n in range(0, 7):
        w = AffineWord.alternating(n, 0)
        z = _rand_c(rng, n, 0.7)
        out.append(rel_record(f"measures/haar-vs-jacobian/{n}", "Haar density on the cell",
                              {"word": list(w.letters), "zeta": cvec(z)},
                              jacobian_density(z), haar_density_word(w, z), 1e-12))
    return out


def suite_iwasawa(ctx: SuiteContext) -> list[Record]:
    rng = ctx.rng("iwasawa")
    out = []
    N = ctx.trunc
    for k in range(4):
        f = random_disk_poly(rng)
        data = iwasawa(f, N)
        inp = {"f": poly_to_doc(f), "N": N}
        out.append(bound_record(f"iwasawa/reconstruction/{k}", "Iwasawa factors", inp,
                                data.reconstruction_residual(64), 1e-6))
        out.append(bound_record(f"iwasawa/unitary/{k}", "Iwasawa factors", inp,
                                data.unitarity_residual(64), 1e-6))
        out.append(bound_record(f"iwasawa/F-oracle/{k}", "F from h", inp, build_F(data).oracle_residual, 1e-6))
        h2 = iwasawa(f, 2 * N).h
        out.append(bound_record(f"iwasawa/doubling/{k}", "truncation stability", inp,
                                float(np.abs((data.h - h2).dense(-8, 8)).max()), 1e-8))
    Z = 0.3 + 0.2j
    data = iwasawa(LaurentPoly.constant(Z), N)
    out.append(rel_record("iwasawa/constant-model", "finite-dimensional model", {"Z": [Z.real, Z.imag]},
                          (1 + abs(Z) ** 2) / (1 - abs(Z) ** 2), data.a0 ** 2, 1e-12))
    return out


def random_disk_poly(rng, sup: float = 0.5, width: int = 2) -> LaurentPoly:
    """Random ``f`` on degrees ``-width..width`` rescaled so ``sup |f|`` on the circle is ``sup``."""
    c = rng.normal(size=2 * width + 1) + 1j * rng.normal(size=2 * width + 1)
    f = LaurentPoly.from_array(-width, c)
    pts = np.exp(2j * np.pi * np.arange(4096) / 4096)
    return f * (sup / float(np.abs(f(pts)).max()) * (1 - 1e-9))


def suite_weyl(ctx: SuiteContext) -> list[Record]:
    out = []
    for n in range(0, 21):
        w = AffineWord.alternating(n, 0)
        out.append(exact_record(f"weyl/exponents/{n}", "weight exponents", {"letters": list(w.letters)},
                                list(range(1, n + 1)), exponents(MINUS_LAMBDA0, w)))
        out.append(exact_record(f"weyl/exponents-lambda1/{n}", "weight exponents", {"letters": list(w.letters)},
                                list(range(0, n)), exponents(MINUS_LAMBDA1, w)))
        out.append(exact_record(f"weyl/haar/{n}", "Haar exponents", {"letters": list(w.letters)},
                                [2 * (j - 1) for j in range(1, n + 1)], haar_exponents_delta(w)))
    for w in reduced_words(12):
        out.append(exact_record(f"weyl/haar-forms/{''.join(map(str, w.letters)) or 'e'}",
                                "Haar exponents, two forms", {"letters": list(w.letters)},
                                haar_exponents_delta(w), haar_exponents_roots(w)))
    return out


SUITES: dict[str, Callable[[SuiteContext], list[Record]]] = {
    "coordinates": suite_coordinates,
    "determinants": suite_determinants,
    "factorization": suite_factorization,
    "triple": suite_triple,
    "szego": suite_szego,
    "measures": suite_measures,
    "iwasawa": suite_iwasawa,
    "weyl": suite_weyl,
}


def run_suites(names, ctx: SuiteContext, workers: int = 4) -> Report:
    """Run suites concurrently; records are merged in the order of ``names``."""
    for n in names:
        if n not in SUITES:
            raise KeyError(f"unknown suite {n!r}; choose from {sorted(SUITES)}")

    def one(name):
        try:
            return SUITES[name](ctx)
        except Exception as exc:  # a crashing suite is a failing record, not a crash
            return [Record(f"{name}/error", PLUMBING, {}, "no exception",
                           f"{type(exc).__name__}: {exc}", 0.0, False)]

    with ThreadPoolExecutor(max(1, workers)) as pool:
        results = list(pool.map(one, names))
    rep = Report()
    for recs in results:
        rep.extend(recs)
    return rep
