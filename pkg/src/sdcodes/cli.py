"""Command-line entry point: ``sdcodes <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import catalog, classify, cyclotomic, decomp, equiv, gf2core
from .perms import format_cycles

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_source(ref: str):
    """``catalog:NAME`` or a file path; returns the parsed payload."""
    if ref.startswith("catalog:"):
        try:
            return catalog.load(ref[len("catalog:"):])
        except catalog.CatalogError as exc:
            raise UsageError(str(exc))
    path = Path(ref)
    if not path.is_file():
        raise UsageError(f"{ref}: no such file")
    text = path.read_text()
    first = next((ln.split("#", 1)[0].split() for ln in text.splitlines() if ln.split("#", 1)[0].strip()), [])
    try:
        if len(first) == 3 and all(x.isdigit() for x in first):
            return cyclotomic.parse_module(text, str(path))
        return gf2core.parse_matrix(text, str(path))
    except gf2core.MatrixFormatError as exc:
        raise UsageError(str(exc))


def _code(ref: str) -> gf2core.BinaryCode:
    obj = _read_source(ref)
    if not isinstance(obj, gf2core.BinaryCode):
        raise UsageError(f"{ref}: expected a binary generator matrix")
    return obj


def _module(ref: str, p: int, c: int) -> cyclotomic.ModuleCode:
    obj = _read_source(ref)
    if isinstance(obj, gf2core.BinaryCode):
        try:
            return cyclotomic.ModuleCode.from_binary(obj, p, c)
        except ValueError as exc:
            raise UsageError(f"{ref}: {exc}")
    if not isinstance(obj, cyclotomic.ModuleCode):
        raise UsageError(f"{ref}: expected a module or binary matrix")
    return obj


def _spec(text: str) -> decomp.AutomorphismSpec:
    try:
        return decomp.AutomorphismSpec.parse(text)
    except decomp.SpecError as exc:
        raise UsageError(str(exc))


# --------------------------------------------------------------------------
# subcommands


def cmd_wenum(args) -> int:
    code = _code(args.code)
    try:
        wd = gf2core.weight_distribution(code, limit=args.limit)
    except gf2core.DimensionTooLarge as exc:
        raise UsageError(str(exc))
    for i, a in enumerate(wd):
        if a or args.all:
            print(f"A{i}\t{a}")
    d = next((i for i in range(1, len(wd)) if wd[i]), None)
    print(f"n={code.n} k={code.k} d={d if d is not None else '-'}")
    return EXIT_OK


def cmd_mindist(args) -> int:
    code = _code(args.code)
    w, witness = gf2core.min_weight_witness(code, early_exit_at=args.early_exit)
    if w is None:
        print("no nonzero codeword")
        return EXIT_OK
    print(f"d={w}")
    print(gf2core.vector_to_string(witness, code.n))
    return EXIT_OK


def cmd_canon(args) -> int:
    form = equiv.canonical_form(_code(args.code))
    print(form.key.hexdigest())
    print(format_cycles(form.relabelling))
    return EXIT_OK


def cmd_equiv(args) -> int:
    a, b = _code(args.a), _code(args.b)
    same = equiv.are_equivalent(a, b)
    print("EQUIVALENT" if same else "INEQUIVALENT")
    return EXIT_OK if same or not args.require else EXIT_FAIL


def cmd_aut(args) -> int:
    info = equiv.aut_order(_code(args.code))
    print(f"order={info.order}")
    if args.generators:
        for g in info.generators:
            print(format_cycles(g))
    return EXIT_OK


def cmd_split(args) -> int:
    spec = _spec(args.spec)
    code = _code(args.code)
    try:
        parts = decomp.split(code, spec)
    except decomp.NotAnAutomorphism as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except decomp.SpecError as exc:
        raise UsageError(str(exc))
    pi = decomp.project_pi(parts.fixed, spec)
    phi = decomp.map_phi(parts.even, spec)
    print(f"spec {spec}: dim F={parts.fixed.k} dim E={parts.even.k}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        gf2core.write_matrix(pi, out / "C_pi.gm")
        (out / "C_phi.mod").write_text(cyclotomic.format_module(phi))
        gf2core.write_matrix(parts.fixed, out / "fixed.gm")
        gf2core.write_matrix(parts.even, out / "even.gm")
        (out / "spec.txt").write_text(str(spec) + "\n")
    else:
        print("C_pi:")
        print(gf2core.format_matrix(pi), end="")
        print("C_phi:")
        print(cyclotomic.format_module(phi), end="")
    return EXIT_OK


def cmd_assemble(args) -> int:
    spec = _spec(args.spec)
    pi = _code(args.pi)
    phi = _module(args.phi, spec.p, spec.c)
    try:
        code = decomp.assemble(pi, phi, spec)
    except decomp.SelfDualityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except decomp.SpecError as exc:
        raise UsageError(str(exc))
    text = gf2core.format_matrix(code)
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    return EXIT_OK


def _target(text: str):
    """An automorphism type, or ``order=7`` for every type of that order."""
    m = re.fullmatch(r"\s*order\s*=\s*(\d+)\s*", text)
    return int(m.group(1)) if m else _spec(text)


def cmd_classify(args) -> int:
    target = _target(args.spec)
    inputs = {}
    if args.dataset:
        name = args.dataset_name or "sdo_23_10_8"
        try:
            inputs["dataset"] = catalog.import_dataset(args.dataset, name)
        except catalog.DatasetValidationError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
    if args.phi:
        inputs["phi"] = args.phi
    threads = args.threads or os.cpu_count() or 1
    try:
        report = classify.classify(target, inputs, checkpoint=args.checkpoint, threads=threads)
    except ValueError as exc:
        raise UsageError(str(exc))
    except classify.CheckpointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(report.profile_table(), end="")
    if args.out:
        classify.write_report(report, args.out)
    if args.expect:
        path = Path(args.expect)
        if not path.is_file():
            raise UsageError(f"{args.expect}: no such file")
        try:
            exp = classify.parse_expect(path.read_text(), str(path))
        except classify.ExpectError as exc:
            raise UsageError(str(exc))
        problems = classify.check_expectation(report, exp)
        for p in problems:
            print(f"EXPECT FAIL {p}", file=sys.stderr)
        if problems:
            return EXIT_FAIL
        print("EXPECT OK")
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in catalog.names():
            entry = catalog.get(name, verify=False)
            print(f"{name}\t{entry.kind}\t{entry.provenance}")
        return EXIT_OK
    if not args.name:
        raise UsageError("catalog show/export/check needs an entry name")
    try:
        entry = catalog.get(args.name)
    except catalog.ChecksumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except catalog.CatalogError as exc:
        raise UsageError(str(exc))
    if args.action == "show":
        print(entry.path.read_text(), end="")
    elif args.action == "export":
        if not args.out:
            raise UsageError("catalog export needs --out")
        catalog.export(entry, args.out)
    elif args.action == "check":
        problems = catalog.check_params(entry)
        for p in problems:
            print(p)
        print("OK" if not problems else "MISMATCH")
        return EXIT_OK if not problems else EXIT_FAIL
    return EXIT_OK


def cmd_import(args) -> int:
    try:
        ds = catalog.import_dataset(args.path, args.name, check_inequivalent=not args.no_equiv_check)
    except catalog.DatasetValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except catalog.CatalogError as exc:
        raise UsageError(str(exc))
    print(f"{ds.name}: {len(ds.entries)} codes validated ({ds.completeness})")
    for src, sha in zip(ds.sources, ds.checksums):
        print(f"{sha[:16]}\t{src}")
    return EXIT_OK


# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sdcodes", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("--threads", type=int, default=None, help="worker processes (default: all cores)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("wenum", help="weight distribution")
    p.add_argument("code")
    p.add_argument("--all", action="store_true", help="print zero coefficients too")
    p.add_argument("--limit", type=int, default=None, help="largest dimension for the exhaustive sweep")
    p.set_defaults(func=cmd_wenum)

    p = sub.add_parser("mindist", help="minimum weight and a witness")
    p.add_argument("code")
    p.add_argument("--early-exit", type=int, default=None)
    p.set_defaults(func=cmd_mindist)

    p = sub.add_parser("canon", help="canonical key digest and relabelling")
    p.add_argument("code")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("equiv", help="test two codes for equivalence")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--require", action="store_true", help="exit 1 when inequivalent")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("aut", help="automorphism group order")
    p.add_argument("code")
    p.add_argument("--generators", action="store_true")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("split", help="split along the automorphism of a given type")
    p.add_argument("code")
    p.add_argument("--spec", required=True, help="e.g. p=3,c=10,f=14")
    p.add_argument("--out")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("assemble", help="build a code from C_pi and C_phi")
    p.add_argument("pi")
    p.add_argument("phi")
    p.add_argument("--spec", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("classify", help="classify codes for an automorphism type")
    p.add_argument("spec_pos", nargs="?", metavar="SPEC")
    p.add_argument("--spec", dest="spec_opt")
    p.add_argument("--dataset", help="directory of [23,10,8] codes for p=7,c=3,f=23")
    p.add_argument("--dataset-name", help="manifest entry the dataset is checked against")
    p.add_argument("--phi", choices=["E10", "B10", "both"], help="C_phi for p=3,c=10,f=14")
    p.add_argument("--expect")
    p.add_argument("--out")
    p.add_argument("--checkpoint")
    p.add_argument("--threads", dest="threads_sub", type=int, default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("catalog", help="bundled matrices")
    p.add_argument("action", choices=["list", "show", "export", "check"])
    p.add_argument("name", nargs="?")
    p.add_argument("--out")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("import", help="validate an external dataset against the manifest")
    p.add_argument("path")
    p.add_argument("--name", required=True)
    p.add_argument("--no-equiv-check", action="store_true")
    p.set_defaults(func=cmd_import)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        if args.command == "classify":
            args.spec = args.spec_opt or args.spec_pos
            if not args.spec:
                raise UsageError("classify needs a spec such as p=7,c=6,f=2 or order=7")
            args.threads = args.threads_sub or args.threads
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be positive")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except gf2core.MatrixFormatError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
