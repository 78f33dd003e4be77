"""Command line interface.

Subcommands
-----------
poly           construct one polynomial and print it in the text format
verify         run verification suites
norms          quadrature norms against their closed forms
transform      forward or inverse transform of a file
constant-term  quadrature constant term against the closed product

Exit status is 0 when every check passes, 1 when a check fails and 2 for
unusable arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .errors import AskeyWilsonError
from .forms import (
    QuadratureSettings,
    constant_term_closed,
    diagonal_closed,
    pair,
    relative_gap,
)
from .laurent import LaurentPoly
from .params import (
    EXACT,
    F1_VALUES,
    FLOAT,
    format_scalar,
    inverse_params,
    make_params,
    scalar_to_json,
)
from .polys import antisym_series, nonsym, renormalize, sym_series, symmetrize
from .suites import SUITES, SuiteConfig, run_suite
from .transform import SpectralFunction, forward, inverse

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    # flags are accepted before and after the subcommand
    def d(v):
        return argparse.SUPPRESS if suppress else v

    g = p.add_argument_group("run configuration")
    g.add_argument("--params", default=d(",".join(F1_VALUES)),
                   help="p,k0,k1,u0,u1 as rationals (default: fixture F1)")
    g.add_argument("--backend", choices=(EXACT, FLOAT), default=d(EXACT))
    g.add_argument("--precision", type=int, default=d(256), help="float precision in bits")
    g.add_argument("--tol", type=float, default=d(1e-10), help="relative tolerance")
    g.add_argument("--max-degree", type=int, default=d(6), dest="max_degree")
    g.add_argument("--json", action="store_true", default=d(False), help="emit JSON")
    g.add_argument("--timings", action="store_true", default=d(False),
                   help="include elapsed times in reports")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="askey-wilson", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("poly", help="construct a polynomial")
    p.add_argument("--kind", required=True, choices=("nonsym", "sym", "antisym", "E", "Eplus"))
    p.add_argument("--m", required=True, type=int)
    p.add_argument("--method", choices=("triangular", "rodrigues", "series"), default="triangular")

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")

    sub.add_parser("norms", help="diagonal norms by quadrature and closed form")

    tr = sub.add_parser("transform", help="forward or inverse transform")
    tr.add_argument("--input", required=True, help="polynomial (text or JSON) or spectral JSON")
    tr.add_argument("--direction", required=True, choices=("fwd", "inv"))

    sub.add_parser("constant-term", help="constant term by quadrature and closed form")

    for sp in sub.choices.values():
        _add_globals(sp, suppress=True)
    return parser


def _params(args):
    parts = [s.strip() for s in args.params.split(",")]
    if len(parts) != 5:
        raise ValueError("--params needs five comma separated values p,k0,k1,u0,u1")
    return make_params(*parts, backend=args.backend, bits=args.precision)


def _validate(args) -> None:
    if not args.tol > 0:
        raise ValueError("--tol must be positive")
    if args.max_degree < 1:
        raise ValueError("--max-degree must be at least 1")
    if args.backend == FLOAT and args.precision < 53:
        raise ValueError("--precision must be at least 53 for the float backend")


def _settings(args) -> QuadratureSettings:
    return SuiteConfig(None, bits=args.precision).quadrature


def _config(args) -> dict:
    return {"params": args.params, "backend": args.backend, "precision": args.precision,
            "tol": args.tol, "max_degree": args.max_degree}


def _emit(args, obj: dict, text: str) -> None:
    if args.json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_poly(args) -> int:
    t = _params(args)
    m, method = args.m, args.method
    if args.kind == "nonsym":
        res = nonsym(t, m, method)
    elif args.kind == "sym":
        res = sym_series(t, m) if method == "series" else symmetrize(t, m, "+", method)
    elif args.kind == "antisym":
        res = antisym_series(t, m) if method == "series" else symmetrize(t, m, "-", method)
    elif args.kind == "E":
        res = renormalize(t, m)
    else:
        res = renormalize(t, m, True)
    obj = {"schema": 1, "config": _config(args), "polynomial": res.to_json()}
    _emit(args, obj, res.poly.to_text())
    return EXIT_PASS


def _cmd_verify(args) -> int:
    cfg = SuiteConfig(_params(args), args.max_degree, args.tol, args.precision)
    rep = run_suite(args.suite, cfg)
    rep.config = dict(_config(args), suite=args.suite)
    if args.json:
        print(rep.dumps(args.timings))
    else:
        print(rep.to_text(args.timings))
    return EXIT_PASS if rep.passed else EXIT_FAIL


def _cmd_norms(args) -> int:
    t = _params(args)
    ti = inverse_params(t)
    s = _settings(args)
    rows = []
    M = args.max_degree
    todo = [(m, "nonsym_pos") for m in range(M + 1)]
    todo += [(m, "nonsym_neg") for m in range(1, M + 1)]
    todo += [(m, "sym") for m in range(M + 1)]
    todo += [(m, "antisym") for m in range(1, M + 1)]
    for m, kind in todo:
        if kind == "nonsym_pos":
            fv = pair(nonsym(t, m).poly, nonsym(ti, m).poly, t, "angle", s)
        elif kind == "nonsym_neg":
            fv = pair(nonsym(t, -m).poly, nonsym(ti, -m).poly, t, "angle", s)
        elif kind == "sym":
            P = symmetrize(t, m).poly
            fv = pair(P, P, t, "round", s)
        else:
            fv = pair(symmetrize(t, m, "-").poly, symmetrize(ti, m, "-").poly, t, "angle", s)
        closed = diagonal_closed(t, m, kind, s.bits, s.product_tol)
        rows.append({"kind": kind, "m": m, "quadrature": scalar_to_json(fv.value),
                     "closed": scalar_to_json(closed),
                     "rel_gap": relative_gap(fv.value, closed), "nodes": fv.nodes_used})
    ok = all(r["rel_gap"] <= args.tol for r in rows)
    obj = {"schema": 1, "config": _config(args), "norms": rows, "status": "pass" if ok else "fail"}
    lines = [f"{r['kind']:<11} m={r['m']:<3} rel_gap={r['rel_gap']:.3e}  nodes={r['nodes']}"
             for r in rows]
    lines.append(f"overall: {obj['status']}")
    _emit(args, obj, "\n".join(lines))
    return EXIT_PASS if ok else EXIT_FAIL


def _read_input(path: str):
    with open(path, encoding="utf-8") as fh:
        raw = fh.read()
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return LaurentPoly.from_text(raw)


def _cmd_transform(args) -> int:
    t = _params(args)
    s = _settings(args)
    data = _read_input(args.input)
    if isinstance(data, dict):
        # accept the documents written by this command as well as bare objects
        data = data.get("spectral", data.get("polynomial", data))
    if args.direction == "fwd":
        if not isinstance(data, LaurentPoly) and "terms" not in data:
            raise ValueError("the forward transform needs a polynomial")
        f = data if isinstance(data, LaurentPoly) else LaurentPoly.from_json(data)
        g = forward(f, t, args.max_degree, s)
        obj = {"schema": 1, "config": _config(args), "spectral": g.to_json()}
        text = "\n".join(f"{m}: {format_scalar(g.values[m])}" for m in g.support()) or "0"
    else:
        if isinstance(data, LaurentPoly) or "values" not in data:
            raise ValueError("the inverse transform needs a spectral function in JSON")
        g = SpectralFunction.from_json(data, params=t)
        f = inverse(g, t, s)
        obj = {"schema": 1, "config": _config(args), "polynomial": f.to_json()}
        text = f.to_text()
    _emit(args, obj, text)
    return EXIT_PASS


def _cmd_constant_term(args) -> int:
    t = _params(args)
    s = _settings(args)
    fv = pair(LaurentPoly.constant(1), LaurentPoly.constant(1), t, "round", s)
    closed = constant_term_closed(t, s.bits, s.product_tol)
    gap = relative_gap(fv.value, closed)
    ok = gap <= args.tol
    obj = {"schema": 1, "config": _config(args), "quadrature": scalar_to_json(fv.value),
           "closed": scalar_to_json(closed), "rel_gap": gap, "nodes": fv.nodes_used,
           "status": "pass" if ok else "fail"}
    text = (f"quadrature {format_scalar(fv.value)}\nclosed     {format_scalar(closed)}\n"
            f"rel_gap    {gap:.3e}  nodes={fv.nodes_used}\noverall: {obj['status']}")
    _emit(args, obj, text)
    return EXIT_PASS if ok else EXIT_FAIL


_COMMANDS = {"poly": _cmd_poly, "verify": _cmd_verify, "norms": _cmd_norms,
             "transform": _cmd_transform, "constant-term": _cmd_constant_term}


def run(argv=None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate(args)
        start = time.perf_counter()
        code = _COMMANDS[args.command](args)
    except (AskeyWilsonError, ValueError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"askey-wilson: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.timings and not args.json:
        print(f"elapsed: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))
