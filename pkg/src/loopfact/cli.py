"""Command-line front end.

Every subcommand writes JSON lines (one record per check, then a summary)
to ``--out`` or stdout and exits with status 1 if any record fails. Each
flag can also be set through the environment as ``LOOPFACT_<FLAG>``, e.g.
``LOOPFACT_SEED=7``; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import config
from .errors import LoopError, ParseError
from .factor import (factor_h, factor_unipotent, l_matrix, product_loop, triple_product,
                     x_to_zeta, y_from_eta, zeta_to_x)
from .iwasawa import build_F, iwasawa
from .loops import POSITIVE, LaurentPoly, loop_to_doc, poly_from_doc, poly_to_doc
from .measures import closed_form_integral, monte_carlo_integral, quadrature_integral
from .report import (PLUMBING, SUITES, Record, Report, SuiteContext, bound_record, cvec,
                     exact_record, rel_record, run_suites)
from .toeplitz import b_matrix, sigma_values
from .weyl import (MINUS_LAMBDA0, MINUS_LAMBDA1, AffineWord, cell_dimension_and_coords,
                   exponents, haar_exponents, inversion_coroots, weyl_representative)

ENV_PREFIX = "LOOPFACT_"
COMMANDS = ("verify", "factor", "integrate", "iwasawa", "weyl")


@dataclass
class RunConfig:
    command: str
    tol: float = config.UNITARY_TOL
    trunc: int = 32
    samples: int = 100_000
    seed: int = 0
    input: str | None = None
    output: str | None = None
    suites: tuple = tuple(SUITES)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.trunc < 1 or self.samples < 1:
            raise ValueError("truncation and sample counts must be positive")


# ---------------------------------------------------------------------------
# input parsing


def parse_complex_list(text: str, location: str = "") -> list[complex]:
    """``"1, 0.5+0.2j, -1j"`` -> complex numbers; empty string -> []."""
    out = []
    for k, tok in enumerate(t.strip() for t in text.split(",")):
        if not tok:
            continue
        try:
            out.append(complex(tok.replace(" ", "")))
        except ValueError:
            raise ParseError(f"not a complex number: {tok!r}", f"{location}[{k}]") from None
    return out


def parse_poly_text(text: str, location: str = "") -> LaurentPoly:
    """``"1:0.4, -1:0.2j"`` -> ``0.4 z + 0.2i z^-1``."""
    coeffs = {}
    for k, tok in enumerate(t.strip() for t in text.split(",")):
        if not tok:
            continue
        deg, sep, val = tok.partition(":")
        try:
            coeffs[int(deg)] = coeffs.get(int(deg), 0j) + complex(val.replace(" ", ""))
        except ValueError:
            raise ParseError(f"expected degree:coefficient, got {tok!r}", f"{location}[{k}]") from None
        if not sep:
            raise ParseError(f"expected degree:coefficient, got {tok!r}", f"{location}[{k}]")
    return LaurentPoly(coeffs)


def coords_from_doc(doc, location: str) -> list[complex]:
    """Coordinates as ``[[re, im], ...]`` or plain numbers."""
    if not isinstance(doc, list):
        raise ParseError("expected a list of coordinates", location)
    out = []
    for k, item in enumerate(doc):
        if isinstance(item, (int, float)) and not isinstance(item, bool):
            out.append(complex(item))
        elif (isinstance(item, list) and len(item) == 2
              and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)):
            out.append(complex(item[0], item[1]))
        else:
            raise ParseError("expected a number or [re, im]", f"{location}[{k}]")
    return out


def load_document(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", path)
    return doc


def _inputs(cfg: RunConfig) -> dict:
    """Merge the ``--in`` document with command-line parameters (flags win)."""
    data = {}
    if cfg.input:
        doc = load_document(cfg.input)
        for key in ("zeta", "eta", "x"):
            if key in doc:
                data[key] = coords_from_doc(doc[key], f"{cfg.input}:{key}")
        for key in ("chi", "f"):
            if key in doc:
                data[key] = poly_from_doc(doc[key], f"{cfg.input}:{key}")
        if "q" in doc:
            data["q"] = [float(v.real) for v in coords_from_doc(doc["q"], f"{cfg.input}:q")]
        if "word" in doc:
            data["word"] = doc["word"]
    p = cfg.params
    for key in ("zeta", "eta", "x"):
        if p.get(key) is not None:
            data[key] = parse_complex_list(p[key], key)
    for key in ("chi", "f"):
        if p.get(key) is not None:
            data[key] = parse_poly_text(p[key], key)
    if p.get("q") is not None:
        data["q"] = [v.real for v in parse_complex_list(p["q"], "q")]
    if p.get("word") is not None:
        data["word"] = p["word"]
    return data


# ---------------------------------------------------------------------------
# commands


def cmd_factor(cfg: RunConfig) -> Report:
    d = _inputs(cfg)
    rep = Report()
    eta, zeta = d.get("eta", []), d.get("zeta")
    chi = d.get("chi", LaurentPoly())
    if "x" in d and zeta is None:
        zeta = list(x_to_zeta(d["x"]).values)
    zeta = zeta or []
    inp = {"eta": cvec(eta), "chi": poly_to_doc(chi), "zeta": cvec(zeta)}
    w = 1.0 + np.abs(np.array(zeta, dtype=complex)) ** 2
    if not eta and chi.is_zero():
        x = zeta_to_x(zeta)
        f = factor_unipotent(x)
        g = product_loop(zeta)
        n = len(zeta)
        rep.extend([
            Record("factor/x", "zeta-to-x recursion", inp, None, cvec(x.values), 0.0, True),
            rel_record("factor/a2", "a from the determinant ratio", inp, float(np.prod(w)), f.a ** 2, cfg.tol),
            rel_record("factor/sigma0", "sigma_0 product formula", inp,
                       float(np.prod(w ** -np.arange(1.0, n + 1))), f.sigma.sigma0_sq, cfg.tol),
            rel_record("factor/sigma1", "sigma_1 product formula", inp,
                       float(np.prod(w ** -np.arange(0.0, n))), f.sigma.sigma1_sq, cfg.tol),
            bound_record("factor/reconstruction", "unipotent factorization", inp,
                         f.reconstruct().max_abs_diff(g), cfg.tol),
            bound_record("factor/unitary", "unipotent factorization", inp,
                         f.reconstruct().unitarity_residual(), cfg.tol),
            bound_record("factor/alpha-constant", "unipotent factorization", inp, f.residual, cfg.tol),
            Record("factor/factors", PLUMBING, inp, None,
                   {"lower": loop_to_doc(f.lower), "a": f.a, "upper": loop_to_doc(f.upper)}, 0.0, True),
        ])
        return rep
    td = triple_product(eta, chi, zeta, tol=min(cfg.tol, config.TAIL_TOL))
    sv = sigma_values(td.loop)
    fh = factor_h(y_from_eta(eta))
    rep.extend([
        rel_record("factor/triple/sigma0", "triple product sigma_0", inp, td.predicted.sigma0_sq,
                   sv.sigma0_sq, max(cfg.tol, 1e-6)),
        rel_record("factor/triple/sigma1", "triple product sigma_1", inp, td.predicted.sigma1_sq,
                   sv.sigma1_sq, max(cfg.tol, 1e-6)),
        rel_record("factor/triple/a2", "triple product a", inp, td.predicted.a ** 2, sv.a ** 2,
                   max(cfg.tol, 1e-6)),
        bound_record("factor/triple/torus-tail", "torus truncation", inp, td.tail_bound, config.TAIL_TOL),
        bound_record("factor/eta/reconstruction", "eta-family factorization", inp,
                     fh.reconstruct().max_abs_diff(product_loop(eta, POSITIVE)), cfg.tol),
        Record("factor/triple/l-matrix", PLUMBING, inp, None,
               loop_to_doc(l_matrix(eta, chi, zeta)), 0.0, True),
    ])
    return rep


def cmd_integrate(cfg: RunConfig) -> Report:
    d = _inputs(cfg)
    q = d.get("q", [2.0])
    method = cfg.params.get("method") or "mc"
    ref = closed_form_integral(q)
    rep = Report()
    inp = {"q": q}
    rep.extend([Record("integrate/closed-form", "closed-form integral", inp, None, ref, 0.0, True)])
    if method == "quad":
        res = quadrature_integral(q)
        rep.extend([rel_record("integrate/quadrature", "closed-form integral", inp, ref, res.value, 1e-3)])
    else:
        res = monte_carlo_integral(q, cfg.samples, cfg.seed)
        inp = {"q": q, "samples": cfg.samples, "seed": cfg.seed, "proposal": res.proposal}
        rep.extend([Record("integrate/monte-carlo", "closed-form integral", inp, ref,
                           {"value": res.value, "stderr": res.stderr}, 3 * res.stderr,
                           abs(res.value - ref) <= 3 * res.stderr)])
    return rep


def cmd_iwasawa(cfg: RunConfig) -> Report:
    d = _inputs(cfg)
    f = d.get("f", LaurentPoly({1: 0.4}))
    data = iwasawa(f, cfg.trunc)
    F = build_F(data)
    inp = {"f": poly_to_doc(f), "N": cfg.trunc}
    tol = max(cfg.tol, 1e-6)
    rep = Report()
    rep.extend([
        Record("iwasawa/a0", "Iwasawa factors", inp, None, data.a0, 0.0, True),
        bound_record("iwasawa/reconstruction", "Iwasawa factors", inp, data.reconstruction_residual(), tol),
        bound_record("iwasawa/unitary", "Iwasawa factors", inp, data.unitarity_residual(), tol),
        bound_record("iwasawa/holomorphy", "Iwasawa factors", inp, data.holomorphy_residual(), tol),
        bound_record("iwasawa/normalization", "Iwasawa factors", inp, data.normalization_residual(), tol),
        bound_record("iwasawa/F-oracle", "F from h", inp, F.oracle_residual, tol),
        Record("iwasawa/h", PLUMBING, inp, None, poly_to_doc(data.h), 0.0, True),
        Record("iwasawa/F", PLUMBING, inp, None, poly_to_doc(F.F), 0.0, True),
    ])
    return rep


def _word(d) -> AffineWord:
    w = d.get("word", "s1 s0")
    if isinstance(w, list):
        return AffineWord(tuple(w))
    return AffineWord.from_product(w)


def cmd_weyl(cfg: RunConfig) -> Report:
    w = _word(_inputs(cfg))
    inp = {"product": w.to_product(), "letters": list(w.letters)}
    cell = cell_dimension_and_coords(w)
    rep = Report()
    rep.extend([
        Record("weyl/inversion-coroots", "inversion coroots", inp, None,
               [[h.a, h.b] for h in inversion_coroots(w)], 0.0, True),
        Record("weyl/exponents/-Lambda0", "weight exponents", inp, None, exponents(MINUS_LAMBDA0, w), 0.0, True),
        Record("weyl/exponents/-Lambda1", "weight exponents", inp, None, exponents(MINUS_LAMBDA1, w), 0.0, True),
        Record("weyl/haar", "Haar exponents, two forms", inp, None, haar_exponents(w), 0.0, True),
        exact_record("weyl/cell-dimension", "cell coordinates", inp, len(w), cell.dimension),
        Record("weyl/cell-window", "cell coordinates", inp, None,
               {"upper": list(cell.upper), "lower": list(cell.lower)}, 0.0, True),
        Record("weyl/representative", "Weyl representatives", inp, None,
               loop_to_doc(weyl_representative(w)), 0.0, True),
    ])
    return rep


def cmd_verify(cfg: RunConfig) -> Report:
    ctx = SuiteContext(cfg.seed, cfg.tol, cfg.samples, cfg.trunc)
    return run_suites(list(cfg.suites), ctx)


HANDLERS = {"verify": cmd_verify, "factor": cmd_factor, "integrate": cmd_integrate,
            "iwasawa": cmd_iwasawa, "weyl": cmd_weyl}


def run(cfg: RunConfig) -> Report:
    return HANDLERS[cfg.command](cfg)


# ---------------------------------------------------------------------------
# argument handling


def _env(name, cast, default):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise ParseError(f"bad value {raw!r}", ENV_PREFIX + name.upper()) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, help="tolerance for residual checks")
    common.add_argument("--trunc", type=int, help="truncation degree N (Iwasawa solve)")
    common.add_argument("--samples", type=int, help="Monte Carlo sample count")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--in", dest="input", help="input JSON document")
    common.add_argument("--out", dest="output", help="report path (default stdout)")
    p = argparse.ArgumentParser(prog="loopfact", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", action="append", choices=sorted(SUITES),
                   help="suite to run (repeatable; default all)")
    f = sub.add_parser("factor", parents=[common], help="factor a product loop or triple product")
    f.add_argument("--zeta", help="comma-separated complex zeta_1..zeta_n")
    f.add_argument("--eta", help="comma-separated complex eta_0..eta_n")
    f.add_argument("--chi", help="degree:coefficient pairs for chi")
    f.add_argument("--x", help="comma-separated complex x_1..x_n")
    f.add_argument("--csv", help="write the B-matrix of x as CSV here")
    i = sub.add_parser("integrate", parents=[common], help="determinant-power integral")
    i.add_argument("--q", help="comma-separated exponents q_0..q_{n-1}")
    i.add_argument("--method", choices=("mc", "quad"), help="Monte Carlo or quadrature (n = 1)")
    w = sub.add_parser("iwasawa", parents=[common], help="Iwasawa factors of a disk loop")
    w.add_argument("--f", help="degree:coefficient pairs for f")
    y = sub.add_parser("weyl", parents=[common], help="affine Weyl data for a word")
    y.add_argument("--word", help='product notation, e.g. "s1 s0"')
    return p


def config_from_args(argv: Sequence[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    params = {k: v for k, v in vars(ns).items()
              if k not in ("command", "tol", "trunc", "samples", "seed", "input", "output", "suite")}
    return RunConfig(
        command=ns.command,
        tol=ns.tol if ns.tol is not None else _env("tol", float, config.UNITARY_TOL),
        trunc=ns.trunc if ns.trunc is not None else _env("trunc", int, 32),
        samples=ns.samples if ns.samples is not None else _env("samples", int, 100_000),
        seed=ns.seed if ns.seed is not None else _env("seed", int, 0),
        input=ns.input if ns.input is not None else _env("in", str, None),
        output=ns.output if ns.output is not None else _env("out", str, None),
        suites=tuple(getattr(ns, "suite", None) or
                     [s for s in _env("suite", str, "").split(",") if s] or SUITES),
        params=params,
    )


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
        rep = run(cfg)
        if cfg.command == "factor" and cfg.params.get("csv"):
            d = _inputs(cfg)
            x = d["x"] if "x" in d else zeta_to_x(d.get("zeta", [])).values
            with open(cfg.params["csv"], "w", encoding="utf-8") as fh:
                fh.write(b_matrix(list(x)).to_csv())
    except (LoopError, ValueError, KeyError, OSError) as exc:
        print(f"loopfact: error: {exc}", file=sys.stderr)
        return 2
    text = rep.to_text()
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
