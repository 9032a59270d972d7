"""``torface`` command-line driver.

Reports are JSON on stdout (or ``--out``); logs go to stderr. Exit codes:
0 pass, 1 usage, 2 check failed, 3 undecided, 4 parse or validation error.
The environment variable TORFACE_SEED is reserved and currently ignored.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import fixtures
from .errors import NotConeWiseNormal, ParseError, TorfaceError, ValidationError
from .homology import (
    StrandBuilder,
    _default_jobs,
    box_scan,
    cm_diagnostic,
    duality_check,
    ishida_vs_dual_check,
)
from .io import Model, load_document, read_json
from .linalg import Field
from .localization import DEFAULT_CAP
from .oracle import oracle_diff
from .squarefree import check_squarefree, explicit_module

log = logging.getLogger("torface")

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_UNDECIDED, EXIT_INVALID = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("input", help="input JSON file, or the name of a bundled fixture (fx1..fx6)")
    p.add_argument("--box", type=int, default=4, help="scan box: sup-norm bound on degree coordinates")
    p.add_argument("--field", default="q", help="scalar field: q or fp:P (default q)")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="shift cap for localization membership")
    p.add_argument("--degree-bound", type=int, default=3, help="word length bound for presentations")
    p.add_argument("--normalize", action="store_true", help="replace every semigroup by its normalization")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    p = _Parser(prog="torface", description="Toric face rings: presentations, local cohomology, duality checks.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("validate", parents=[common], help="parse and validate an input")
    sub.add_parser("presentation", parents=[common], help="variables and relations up to a degree bound")
    d = sub.add_parser("degreeset", parents=[common], help="degree sets of T_σ^{-1}R, E_σ(M) and M_σ in the box")
    d.add_argument("--cell", required=True)
    c = sub.add_parser("cohomology", parents=[common], help="cohomology table of L, J or I over the box")
    c.add_argument("--complex", choices=("L", "J", "I"), required=True)
    k = sub.add_parser("check", help="duality, Ishida comparison or Cohen-Macaulay diagnostic")
    ksub = k.add_subparsers(dest="check", required=True, parser_class=_Parser)
    for name in ("duality", "ishida", "cm"):
        ksub.add_parser(name, parents=[common])
    s = sub.add_parser("sqcheck", parents=[common], help="squarefreeness of a module over the box")
    s.add_argument("--module", required=True, help='module JSON file, or builtin spec like "ring" or "quotient:CELL"')
    sub.add_parser("oracle-diff", parents=[common], help="compare strands with brute-force oracles")
    return p


def _load(arg: str, normalize: bool) -> Model:
    path = Path(arg)
    if not path.exists() and arg in fixtures.NAMES:
        doc = fixtures.raw(arg)
    else:
        doc = read_json(path)
    model = load_document(doc)
    return model.normalized() if normalize else model


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _module_doc(spec: str) -> dict:
    if spec == "ring":
        return {"builtin": "ring"}
    for kind in ("quotient", "prime"):
        if spec.startswith(kind + ":"):
            return {"builtin": kind, "cell": spec.split(":", 1)[1]}
    return read_json(spec)


def run(args) -> int:
    field = Field.parse(args.field)
    jobs = _default_jobs() if args.jobs is None else args.jobs
    model = _load(args.input, args.normalize)
    cx = model.complex
    ring = model.ring()
    builder = StrandBuilder(ring, args.cap)
    raw = model.raw if not args.normalize else model.monoidal.to_raw()
    cmd = args.command

    if cmd == "validate":
        _emit(args, {
            "schema": 1, "valid": True, "name": model.name, "cells": len(cx), "dim": cx.dim,
            "krull_dim": ring.dim, "cone_wise_normal": model.monoidal.is_cone_wise_normal(),
        })
        return EXIT_OK

    if cmd == "presentation":
        pres = ring.presentation(args.degree_bound)
        if pres.bound_reached:
            log.warning("BoundTooSmall: new relations appeared at the degree bound")
        _emit(args, pres.to_json(cx))
        return EXIT_OK

    if cmd == "degreeset":
        s = cx.cell(args.cell)
        loc = builder.loc
        out = {"localization": [], "dual": [], "semigroup": []}
        for a in ring.box_degrees(args.box):
            for key, count in (("localization", len(loc.loc_slots(a, s))),
                               ("dual", len(loc.dual_slots(a, s))),
                               ("semigroup", int(ring.in_cell(a, s)))):
                if count:
                    entry = a.to_json(cx)
                    if count > 1:
                        entry["multiplicity"] = count
                    out[key].append(entry)
        _emit(args, {"schema": 1, "cell": args.cell, "box": args.box, **out})
        return EXIT_OK

    if cmd == "cohomology":
        table = box_scan(builder, args.complex, args.box, field, jobs, raw)
        _emit(args, table.to_csv(cx) if args.format == "csv" else table.to_json(cx))
        return EXIT_UNDECIDED if table.undecided else EXIT_OK

    if cmd == "check":
        if args.check == "cm":
            table = box_scan(builder, "J", args.box, field, jobs, raw)
            verdict = cm_diagnostic(table, ring.dim)
            _emit(args, {**verdict.to_json(cx), "box": args.box, "d": ring.dim})
            return {"ConsistentWithCM": EXIT_OK, "NotCM": EXIT_FAIL, "Undecided": EXIT_UNDECIDED}[verdict.verdict]
        if args.check == "duality":
            report = duality_check(builder, args.box, field, jobs, raw)
        else:
            try:
                report = ishida_vs_dual_check(builder, args.box, field, jobs, raw)
            except NotConeWiseNormal as exc:
                _emit(args, {"schema": 1, "check": "ishida", "status": "refused", "reason": str(exc)})
                return EXIT_FAIL
        _emit(args, report.to_json())
        return {"pass": EXIT_OK, "fail": EXIT_FAIL, "undecided": EXIT_UNDECIDED}[report.status]

    if cmd == "sqcheck":
        module = explicit_module(ring, _module_doc(args.module), args.box)
        rep = check_squarefree(module)
        for w in rep.warnings:
            log.warning(w)
        _emit(args, rep.to_json(cx))
        return EXIT_OK if rep.squarefree else EXIT_FAIL

    if cmd == "oracle-diff":
        report = oracle_diff(builder, args.box, field=field)
        _emit(args, report)
        return EXIT_OK if report["status"] == "pass" else EXIT_FAIL

    raise AssertionError(cmd)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return run(args)
    except (ParseError, ValidationError) as exc:
        log.error("%s", exc)
        payload = {"schema": 1, "valid": False, "error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ValidationError):
            payload.update(rule=exc.rule, cells=list(exc.cells))
        elif exc.line is not None:
            payload["line"] = exc.line
        _emit(args, payload)
        return EXIT_INVALID
    except (ValueError, KeyError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except TorfaceError as exc:
        log.error("%s", exc)
        return EXIT_UNDECIDED


if __name__ == "__main__":
    sys.exit(main())
