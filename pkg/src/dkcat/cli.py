"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 on malformed input or a refused request.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import Optional

from . import enriched as en
from . import intervals as iv_mod
from . import path_objects as po
from . import serialize as ser
from . import suites
from .chains import StructuralError
from .hopf import group_algebra
from .linalg import Field

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _field(text: Optional[str], default: Optional[str] = None) -> Optional[Field]:
    text = text or default
    if text is None:
        return None
    try:
        return Field.parse(text)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _require_prime(k: Field, verb: str) -> None:
    if not k.is_finite:
        raise InputError(f"{verb} needs a prime field F<p>, not Q")


def _emit(report: dict, path: Optional[str], stream=None) -> None:
    text = ser.dumps(report)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    (stream or sys.stdout).write(text)


# ------------------------------------------------------------------- verbs


def _builtin_interval(name: str, k: Optional[Field]) -> iv_mod.CocategoryInterval:
    if name == "cat":
        return iv_mod.cat_interval()
    if k is None:
        raise InputError(f"the builtin interval {name!r} needs --field")
    if name == "chain":
        return iv_mod.chain_interval(k)
    if name == "smod":
        return iv_mod.smod_interval(k)
    if name.startswith("hopf:"):
        spec = name[5:]
        m = re.fullmatch(r"C(\d+)", spec)
        if m and not os.path.exists(spec):
            return iv_mod.hopf_interval(group_algebra(k, int(m.group(1))))
        doc = ser.load_file(spec)
        reader = ser.Reader({"field": str(k), "hopf": {"H": doc}}, k)
        if "field" in doc and str(doc["field"]) != str(k):
            raise InputError(f"{spec} is over {doc['field']}, not {k}")
        try:
            return iv_mod.hopf_interval(reader.hopf("H"))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    raise InputError(f"unknown builtin interval {name!r}; expected chain, smod, cat or hopf:<file>")


def cmd_verify_interval(args) -> int:
    k = _field(args.field)
    if args.builtin:
        iv = _builtin_interval(args.builtin, k)
    elif args.interval:
        doc = ser.load_file(args.interval)
        reader = ser.Reader(doc, k)
        iv = reader.interval(args.name or reader.only("intervals"))
    else:
        raise InputError("give --builtin or an interval file")
    if args.ambient and args.ambient != iv.ambient:
        raise InputError(f"interval lives in {iv.ambient!r}, not {args.ambient!r}")
    cocat = iv_mod.verify_cocategory(iv, args.mode)
    cyl = iv_mod.verify_cylinder(iv)
    report = {
        "ambient": iv.ambient,
        "field": str(iv.field) if iv.field is not None else None,
        "mode": args.mode,
        "cocategory": cocat.to_dict(),
        "cylinder": cyl.to_dict(),
        "passed": cocat.passed and cyl.passed,
    }
    if iv.ambient == "hopf":
        report["h-linearity"] = iv_mod.hopf_linearity_report(iv)
    _emit(report, args.report)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _parse_key(text: str):
    try:
        return ser.from_name(json.loads(text))
    except json.JSONDecodeError:
        return text


def cmd_path_object(args) -> int:
    doc = ser.load_file(args.category)
    k = _field(args.field, doc.get("field"))
    if k is None:
        raise InputError("no field given")
    _require_prime(k, "path-object")
    reader = ser.Reader(doc, k)
    A = reader.category(args.name or reader.only("categories"))
    if A.ambient != en.CHAIN:
        raise InputError("path objects are built for chain-enriched categories")
    rep = en.validate_category(A)
    if not rep.valid:
        raise InputError(f"input is not an enriched category: {rep.witness}")
    interval = None
    if args.interval:
        ir = ser.Reader(ser.load_file(args.interval), k)
        interval = ir.interval(args.interval_name or ir.only("intervals"))
    n = po.ledger_size(A)
    if args.max_objects is not None and n > args.max_objects:
        raise InputError(f"P0 would have {n} objects, above the bound {args.max_objects}; raise --max-objects to proceed")
    try:
        bundle = po.build_bundle(A, interval, max_objects=None)
    except StructuralError as exc:
        _emit({"error": str(exc), "passed": False}, args.report)
        return EXIT_FAIL
    result = po.verify_path_object(bundle)
    report = {"bundle": bundle.summary(), "verification": result, "passed": result["passed"]}
    report["dk"] = {"i": en.dk_report(bundle.i), "(s,t)": en.dk_report(bundle.st_P)}
    if args.trace:
        keys = [_parse_key(t) for t in args.trace]
        missing = [key for key in keys if key not in bundle.builder.entries]
        if missing:
            raise InputError(f"unknown P0 object {missing[0]!r}")
        _, trace = bundle.builder.composition(*keys, trace=True)
        report["trace"] = trace.summary()
    if args.emit_functors:
        w = ser.Writer(k)
        w.category(A, "base")
        w.category(bundle.P, "P")
        w.category(en.product_category(A, A), "base-squared")
        w.functor(bundle.i, "i", "base", "P")
        w.functor(bundle.st_P, "st", "P", "base-squared")
        with open(args.emit_functors, "w", encoding="utf-8") as fh:
            fh.write(ser.dumps(w.doc))
    _emit(report, args.report)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_dk_check(args) -> int:
    doc = ser.load_file(args.functor)
    k = _field(args.field, doc.get("field"))
    if k is None:
        raise InputError("no field given")
    _require_prime(k, "dk-check")
    reader = ser.Reader(doc, k)
    F = reader.functor(args.name or reader.only("functors"))
    rep = en.validate_functor(F)
    if not rep.valid:
        raise InputError(f"input is not an enriched functor: {rep.witness}")
    verdicts = en.dk_report(F)
    required = [r for r in (args.require or "").split(",") if r]
    unknown = [r for r in required if r not in verdicts]
    if unknown:
        raise InputError(f"unknown predicate {unknown[0]!r}")
    failed = [r for r in required if verdicts[r] is not True]
    ok = verdicts["pair-equal"] and not failed
    _emit({"verdicts": verdicts, "required": required, "required-failing": failed, "passed": ok}, args.report)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_dold_kan(args) -> int:
    k = _field(args.field, "F7")
    if args.trials < 0 or args.max_degree < 0 or args.max_rank < 0:
        raise InputError("trials, degrees and ranks must be non-negative")
    res = suites.dold_kan_suite(args.trials, args.seed, args.max_degree, k, args.max_rank, args.inject_fault)
    _emit(res.to_dict(), args.report)
    return EXIT_OK if res.passed else EXIT_FAIL


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="Q or F<p>")
    common.add_argument("--report", help="also write the report to this file")
    common.add_argument("--seed", type=int, default=0)
    parser = argparse.ArgumentParser(prog="dkcat", description="Exact checks for enriched categories, intervals and path objects.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("verify-interval", parents=[common], help="check the cocategory and cylinder axioms")
    p.add_argument("interval", nargs="?", help="interval document")
    p.add_argument("--builtin", help="chain, smod, cat or hopf:<file or C<n>>")
    p.add_argument("--name", help="interval name inside the document")
    p.add_argument("--ambient", choices=["chain", "simplicial", "hopf", "cat"])
    p.add_argument("--mode", choices=["strict", "lax"], default="strict")
    p.set_defaults(func=cmd_verify_interval)

    p = sub.add_parser("path-object", parents=[common], help="build and verify the path-object factorization")
    p.add_argument("category", help="category document")
    p.add_argument("--name", help="category name inside the document")
    p.add_argument("--interval", help="interval document (default: the standard chain interval)")
    p.add_argument("--interval-name")
    p.add_argument("--max-objects", type=int, default=po.DEFAULT_MAX_OBJECTS)
    p.add_argument("--emit-functors", help="write i and (s,t) as a functor document")
    p.add_argument("--trace", nargs=3, metavar=("F0", "F1", "F2"), help="P0 objects as JSON, e.g. '[0,0,1]'")
    p.set_defaults(func=cmd_path_object)

    p = sub.add_parser("dk-check", parents=[common], help="DK-equivalence and DK-fibration verdicts")
    p.add_argument("functor", help="functor document")
    p.add_argument("--name", help="functor name inside the document")
    p.add_argument("--require", help="comma-separated verdicts that must hold, e.g. dk-equiv,dk-fib")
    p.set_defaults(func=cmd_dk_check)

    p = sub.add_parser("dold-kan", parents=[common], help="seeded Dold-Kan property suite")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--max-rank", type=int, default=3)
    p.add_argument("--inject-fault", choices=["shuffle-sign"], help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_dold_kan)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, ser.FormatError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except StructuralError as exc:
        sys.stderr.write(f"check failed: {exc}\n")
        return EXIT_FAIL
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        sys.stderr.write(f"error: malformed input ({exc})\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
