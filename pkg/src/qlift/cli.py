"""Command-line front end: ``qlift {gen,dilate,lift,coextend,verify,suite}``.

Reports are JSON with sorted keys.  Exit status: 0 when every check passes,
1 when some check fails, 2 for invalid input or a violated hypothesis.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import math
import os
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .dilation import coisometric_extension, schaeffer_isometric, unitary_dilation
from .errors import HypothesisViolated, QLiftError
from .lifting import (QPair, adjoint_lift_q, coiso_lift_q, isometric_lift_q, q_coextension,
                      q_intertwining_coextension, qcommutant_lift, unitary_q_lift)
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, operator_norm
from .qalgebra import (GeneratorSpec, example_pair_jordan, hardy_pair_truncated,
                       q_commutant_basis, random_qpair)
from .verify import (Certificate, certificate_from_residuals, check_dilation_identity,
                     check_q_commuting)

__all__ = ["main", "parse_q", "matrix_to_json", "matrix_from_json", "pair_to_json",
           "pair_from_json"]

ENGINES = {
    "isometric": isometric_lift_q,
    "coiso": coiso_lift_q,
    "qcommutant": qcommutant_lift,
    "unitary": unitary_q_lift,
}


class InputError(ValueError):
    pass


# ---------------------------------------------------------------- file formats

def parse_q(text: str) -> complex:
    """``"re,im"`` or polar ``"r@degrees"``."""
    try:
        if "@" in text:
            r, deg = (float(x) for x in text.split("@"))
            return complex(r * math.cos(math.radians(deg)), r * math.sin(math.radians(deg)))
        parts = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"cannot parse q from {text!r}; use 're,im' or 'r@degrees'") from exc
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) != 2:
        raise InputError(f"cannot parse q from {text!r}; use 're,im' or 'r@degrees'")
    return complex(parts[0], parts[1])


def matrix_to_json(M) -> dict:
    M = as_matrix(M)
    flat = M.reshape(-1)
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
            "data": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_json(doc) -> np.ndarray:
    try:
        rows, cols, data = int(doc["rows"]), int(doc["cols"]), doc["data"]
        if len(data) != rows * cols:
            raise InputError(f"matrix data has {len(data)} entries, expected {rows * cols}")
        vals = np.array([complex(float(re), float(im)) for re, im in data], dtype=np.complex128)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed matrix: {exc}") from exc
    return as_matrix(vals.reshape(rows, cols))


def _q_from_json(q) -> complex:
    try:
        re, im = q
        return complex(float(re), float(im))
    except (TypeError, ValueError) as exc:
        raise InputError("q must be [re, im]") from exc


def pair_to_json(p: QPair) -> dict:
    return {"T1": matrix_to_json(p.T1), "T2": matrix_to_json(p.T2), "q": [p.q.real, p.q.imag]}


def pair_from_json(doc) -> QPair:
    try:
        return QPair(matrix_from_json(doc["T1"]), matrix_from_json(doc["T2"]), _q_from_json(doc["q"]))
    except KeyError as exc:
        raise InputError(f"pair file lacks {exc}") from exc


# ---------------------------------------------------------------- plumbing

def _tolerances(args) -> Tolerances:
    tol = DEFAULT_TOL
    env = os.environ.get("QLIFT_TOL_RESIDUAL")
    if env:
        try:
            tol = replace(tol, residual_tol=float(env))
        except ValueError as exc:
            raise InputError(f"QLIFT_TOL_RESIDUAL={env!r}: {exc}") from exc
    for name in ("rank_tol", "psd_tol", "residual_tol"):
        value = getattr(args, name, None)
        if value is not None:
            tol = replace(tol, **{name: value})
    return tol


def _read_json(path: str, stdin):
    try:
        if path == "-":
            return json.load(stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _write_json(doc, path: str, stdout) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if path == "-":
        stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _config_echo(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("func", "output"):
            continue
        out[k] = [v.real, v.imag] if isinstance(v, complex) else v
    return out


def _report(construction: str, args, cert: Certificate, tol: Tolerances, norms=None,
            conds=None, extra=None) -> dict:
    doc = {
        "construction": construction,
        "config": _config_echo(args),
        "checks": [c.to_dict() for c in cert.checks],
        "norms": norms or {},
        "condition_numbers": conds or {},
        "tolerances": tol.as_dict(),
        "version": __version__,
        "pass": cert.passed,
    }
    if extra:
        doc.update(extra)
    return doc


def _finish(doc: dict, args, stdout) -> int:
    _write_json(doc, args.output, stdout)
    return 0 if doc["pass"] else 1


def _pair_with_q(args, stdin) -> QPair:
    p = pair_from_json(_read_json(args.input, stdin))
    if args.q is not None:
        p = QPair(p.T1, p.T2, args.q)
    return p


# ---------------------------------------------------------------- commands

def cmd_gen(args, tol, stdin, stdout) -> int:
    q = 1.0 if args.q is None else args.q
    if args.family == "jordan":
        a, b, d = (complex(x) for x in args.abd.split(","))
        p = example_pair_jordan(a, b, d, q)
    elif args.family == "hardy":
        p = hardy_pair_truncated(q, args.dim)
    elif args.family == "random":
        p = random_qpair(GeneratorSpec("random", args.dim, q, args.seed),
                         t2_norm=args.t2_norm)
    else:   # custom: random element of the q-commutant of a supplied T1
        T1 = matrix_from_json(_read_json(args.input, stdin))
        basis = q_commutant_basis(T1, q, tol)
        rng = np.random.default_rng(args.seed)
        T2 = np.zeros_like(T1)
        for B in basis:
            T2 = T2 + (rng.standard_normal() + 1j * rng.standard_normal()) * B
        if operator_norm(T2) > 0:
            T2 *= args.t2_norm / operator_norm(T2)
        p = QPair(T1, T2, q)
    _write_json(pair_to_json(p), args.output, stdout)
    return 0


def cmd_dilate(args, tol, stdin, stdout) -> int:
    doc = _read_json(args.input, stdin)
    T = matrix_from_json(doc["T1"] if isinstance(doc, dict) and "T1" in doc else doc)
    build = {"isometric": schaeffer_isometric, "coisometric": coisometric_extension,
             "unitary": unitary_dilation}[args.kind]
    b = build(T, args.depth, tol)
    cert = check_dilation_identity(b, args.depth, tol)
    from .verify import Check
    checks = list(cert.checks)
    if b.kind in ("isometric", "unitary"):
        v = b.isometry_defect()
        checks.append(Check("op* op = I (interior)", v, "interior", v <= tol.residual_tol))
    if b.kind in ("co-isometric", "unitary"):
        v = b.coisometry_defect()
        checks.append(Check("op op* = I (interior)", v, "interior", v <= tol.residual_tol))
    cert = Certificate(cert.construction, checks, tol, cert.metadata)
    extra = {"operator": matrix_to_json(b.op)} if args.include_operator else None
    doc = _report(cert.construction, args, cert, tol,
                  {"source": operator_norm(T), "op": operator_norm(b.op)}, {}, extra)
    return _finish(doc, args, stdout)


def cmd_lift(args, tol, stdin, stdout) -> int:
    p = _pair_with_q(args, stdin)
    if args.engine == "adjoint":
        r = adjoint_lift_q(p.T1, p.T2, p.q, args.depth, tol)
    else:
        r = ENGINES[args.engine](p, args.depth, tol)
    cert = certificate_from_residuals(r.construction, r.residuals, tol)
    extra = {"operator": matrix_to_json(r.op)} if args.include_operator else None
    doc = _report(r.construction, args, cert, tol,
                  {"achieved": r.norm_claim[0], "target": r.norm_claim[1]}, {}, extra)
    return _finish(doc, args, stdout)


def cmd_coextend(args, tol, stdin, stdout) -> int:
    doc_in = _read_json(args.input, stdin)
    if args.mode == "pair":
        p = pair_from_json(doc_in)
        if args.q is not None:
            p = QPair(p.T1, p.T2, args.q)
        t = q_coextension(p, args.depth, args.copies, tol, args.margin)
        norms = {"T2": operator_norm(p.T2)}
    else:
        try:
            A, T1, T2 = (matrix_from_json(doc_in[k]) for k in ("A", "T1", "T2"))
            q = _q_from_json(doc_in["q"]) if args.q is None else args.q
        except KeyError as exc:
            raise InputError(f"intertwining file lacks {exc}") from exc
        t = q_intertwining_coextension(A, T1, T2, q, args.depth, args.copies, tol, args.margin)
        norms = {"A": operator_norm(A), "B": operator_norm(t.B)}
    cert = certificate_from_residuals(t.construction, t.residuals, tol)
    doc = _report(t.construction, args, cert, tol, norms, {"D": t.meta["cond_D"]})
    return _finish(doc, args, stdout)


def cmd_verify(args, tol, stdin, stdout) -> int:
    p = _pair_with_q(args, stdin)
    cert = check_q_commuting(p.T1, p.T2, p.q, tol)
    doc = _report(cert.construction, args, cert, tol,
                  {"T1": operator_norm(p.T1), "T2": operator_norm(p.T2)}, {})
    return _finish(doc, args, stdout)


def cmd_suite(args, tol, stdin, stdout) -> int:
    from .suite import run_suite
    from .verify import Check
    cases = args.cases.split(",") if args.cases else None
    results = run_suite(args.seed, cases)
    checks = [Check(f"{r.case_id} {r.description}", 0.0 if r.passed else 1.0, "full", r.passed)
              for r in results]
    cert = Certificate("suite", checks, tol)
    doc = _report("suite", args, cert, tol, {}, {},
                  {"cases": [r.to_dict() for r in results]})
    return _finish(doc, args, stdout)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default="-", help="report path ('-' for stdout)")
    common.add_argument("--rank-tol", dest="rank_tol", type=float)
    common.add_argument("--psd-tol", dest="psd_tol", type=float)
    common.add_argument("--residual-tol", dest="residual_tol", type=float,
                        help="overrides QLIFT_TOL_RESIDUAL")

    parser = argparse.ArgumentParser(prog="qlift", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qlift {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="write a q-commuting pair")
    g.add_argument("--family", choices=["jordan", "hardy", "random", "custom"], default="random")
    g.add_argument("--q", type=parse_q)
    g.add_argument("--dim", type=int, default=3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--abd", default="1,0.5,0.25", help="a,b,d for the jordan family")
    g.add_argument("--t2-norm", dest="t2_norm", type=float, default=0.8)
    g.add_argument("--input", default=None, help="T1 matrix file for the custom family")
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("dilate", parents=[common], help="build and check a dilation")
    d.add_argument("--kind", choices=["isometric", "coisometric", "unitary"], default="isometric")
    d.add_argument("--depth", type=int, default=4)
    d.add_argument("--input", required=True, help="matrix file for T, or a pair file (uses T1)")
    d.add_argument("--include-operator", action="store_true")
    d.set_defaults(func=cmd_dilate)

    lf = sub.add_parser("lift", parents=[common], help="lift T2 along a dilation of T1")
    lf.add_argument("--engine", choices=sorted([*ENGINES, "adjoint"]), default="isometric")
    lf.add_argument("--q", type=parse_q, help="overrides q from the pair file")
    lf.add_argument("--depth", type=int, default=4)
    lf.add_argument("--input", required=True, help="pair file")
    lf.add_argument("--include-operator", action="store_true")
    lf.set_defaults(func=cmd_lift)

    c = sub.add_parser("coextend", parents=[common], help="q-commuting co-extensions")
    c.add_argument("--mode", choices=["pair", "intertwining"], default="pair")
    c.add_argument("--q", type=parse_q)
    c.add_argument("--depth", type=int, default=4)
    c.add_argument("--copies", type=int, default=3)
    c.add_argument("--margin", type=float, default=1e-6, help="strictness margin")
    c.add_argument("--input", required=True)
    c.set_defaults(func=cmd_coextend)

    v = sub.add_parser("verify", parents=[common], help="check T1 T2 = q T2 T1")
    v.add_argument("--q", type=parse_q)
    v.add_argument("--input", required=True)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("suite", parents=[common], help="run the acceptance suite")
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--cases", default=None, help="comma-separated case ids (default: all)")
    s.set_defaults(func=cmd_suite)
    return parser


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(argv)
    except SystemExit as exc:   # argparse reports usage errors itself
        return 2 if exc.code not in (0, None) else 0
    try:
        tol = _tolerances(args)
        if getattr(args, "depth", 0) < 0 or getattr(args, "copies", 1) < 1:
            raise InputError("depth must be >= 0 and copies >= 1")
        return args.func(args, tol, stdin, stdout)
    except HypothesisViolated as exc:
        msg = str(exc)
        if exc.hypothesis and "requires" not in msg:
            msg = f"{msg}; requires {exc.hypothesis}"
        stderr.write(f"qlift: hypothesis violated: {msg}\n")
        return 2
    except (InputError, QLiftError, ValueError) as exc:
        stderr.write(f"qlift: invalid input: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
