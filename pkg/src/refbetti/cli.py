"""Command-line entry point: ``refbetti <subcommand> ...``.

Exit codes: 0 success or all checks passed, 1 a verification failed,
2 bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .complex import betti_numbers
from .configspace import MassMismatch, bottleneck_distance, to_polynomial
from .documents import (
    POLY_FORMAT,
    InputDocument,
    InputError,
    configuration_document,
    degree_entry,
    dumps,
    input_to_json,
    is_configuration_document,
    parse_configuration_document,
    parse_input,
    polynomial_to_json,
)
from .field import format_rational, make_field, parse_rational
from .persistence import build_image_tables, delta_from_table, hat_delta_from_table, ortho_from_table
from .plot import DiagramStyle, emit_diagram
from .verify import (
    PerturbationSpec,
    PreconditionError,
    default_epsilon,
    perturb,
    perturb_distinct,
    run_check,
)

NAMED_CHECKS = ("mass", "critical-support", "stability", "local-stability", "duality", "box-laws", "genericity")
EXTRA_CHECKS = ("direct-sum", "oracle", "polynomial")


class UsageError(Exception):
    pass


def corpus_names() -> list[str]:
    root = resources.files("refbetti") / "corpus_data"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def _read(path: str) -> bytes:
    if path.startswith("corpus:"):
        name = path[len("corpus:"):]
        res = resources.files("refbetti") / "corpus_data" / f"{name}.json"
        if not res.is_file():
            raise InputError(f"{path}: no such corpus item (have {', '.join(corpus_names())})")
        return res.read_bytes()
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load_input(path: str, args) -> InputDocument:
    try:
        doc = parse_input(_read(path))
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None
    fld = _field_override(args)
    if fld is not None:
        doc.field = fld
    return doc


def _field_override(args):
    spec = getattr(args, "field", None)
    p = getattr(args, "p", None)
    if spec is None and p is None:
        return None
    if spec is None or spec.upper() in ("GF", "F", "P", "PRIME"):
        if p is None:
            raise InputError("--field GF needs --p")
        spec = p
    elif p is not None and spec.upper() not in ("Q",):
        raise InputError("give the prime either inside --field or with --p, not both")
    try:
        return make_field(spec)
    except ValueError as exc:
        raise InputError(f"--field: {exc}") from None


def _functions(doc: InputDocument, label: str | None) -> list[tuple[str, tuple]]:
    if label is None:
        return list(doc.functions.items())
    return [(label, doc.function(label))]


def _emit(text: str | bytes, out: str | None):
    if isinstance(text, str):
        text = text.encode()
    if out is None or out == "-":
        sys.stdout.buffer.write(text)
        sys.stdout.buffer.flush()
    else:
        Path(out).write_bytes(text)


def _fraction_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# --- subcommands --------------------------------------------------------------


def _configuration_doc(doc: InputDocument, label: str, f, vectors: bool, ortho: bool) -> dict:
    fld = doc.field
    if ortho and not fld.is_rational:
        raise InputError("--ortho needs the rational field")
    betti = betti_numbers(doc.complex, fld)
    degrees = []
    for table in build_image_tables(doc.complex, f, fld):
        degrees.append(degree_entry(
            table.degree, betti[table.degree], delta_from_table(table), fld,
            hat=hat_delta_from_table(table) if vectors else None,
            ortho=ortho_from_table(table) if ortho else None,
        ))
    source = {"function": label}
    if "name" in doc.meta:
        source["name"] = doc.meta["name"]
    return configuration_document(fld, degrees, source)


def cmd_compute(args) -> int:
    doc = _load_input(args.input, args)
    label = doc.function_label(args.function)
    out = _configuration_doc(doc, label, doc.function(args.function), args.vectors, args.ortho)
    _emit(dumps(out), args.output)
    return 0


def cmd_poly(args) -> int:
    doc = _load_input(args.input, args)
    label = doc.function_label(args.function)
    f = doc.function(args.function)
    degrees = []
    for table in build_image_tables(doc.complex, f, doc.field):
        p = to_polynomial(delta_from_table(table))
        degrees.append({"degree": table.degree, "polynomial_degree": p.degree,
                        "coefficients": polynomial_to_json(p)})
    out = {"format": POLY_FORMAT, "field": str(doc.field), "source": {"function": label}, "degrees": degrees}
    _emit(dumps(out), args.output)
    return 0


def cmd_distance(args) -> int:
    c1 = parse_configuration_document(_read(args.first))
    c2 = parse_configuration_document(_read(args.second))
    if set(c1) != set(c2):
        raise InputError(f"degree sets differ: {sorted(c1)} vs {sorted(c2)}")
    degrees = []
    for r in sorted(c1):
        try:
            res = bottleneck_distance(c1[r], c2[r])
        except MassMismatch as exc:
            raise InputError(f"degree {r}: {exc}") from None
        degrees.append({
            "degree": r,
            "distance": format_rational(res.distance),
            "matching": [[[format_rational(x) for x in p], [format_rational(x) for x in q]] for p, q in res.witness],
        })
    total = max((Fraction(d["distance"]) for d in degrees), default=Fraction(0))
    _emit(dumps({"distance": format_rational(total), "degrees": degrees}), args.output)
    return 0


def _default_checks(doc: InputDocument) -> list[str]:
    meta = doc.meta
    checks = ["mass", "critical-support", "box-laws", "stability", "local-stability"]
    if meta.get("closed_manifold"):
        if not doc.field.is_rational or meta.get("orientable", True):
            checks.append("duality")
        checks.append("genericity")
    return checks


def cmd_verify(args) -> int:
    doc = _load_input(args.input, args)
    checks = args.check or _default_checks(doc)
    reports, failed = [], []
    for label, f in _functions(doc, args.function):
        eps = args.eps if args.eps is not None else default_epsilon(doc.complex, f)
        trials = args.trials if args.trials is not None else 100
        spec = PerturbationSpec(eps, trials, args.seed)
        for name in checks:
            try:
                rep = run_check(name, doc.complex, f, doc.field, spec=spec, meta=doc.meta)
            except PreconditionError as exc:
                raise InputError(f"check {name} on function {label!r}: {exc}") from None
            entry = {"function": label, **rep.to_json(timings=args.timings)}
            reports.append(entry)
            print(f"{'PASS' if rep.passed else 'FAIL'} {name} [{label}]", file=sys.stderr)
            if not rep.passed:
                failed.append(entry)
                print("  witness: " + json.dumps(entry["witnesses"][0]), file=sys.stderr)
    out = {"field": str(doc.field), "seed": args.seed, "passed": not failed, "reports": reports}
    _emit(dumps(out), args.output)
    return 1 if failed else 0


def cmd_plot(args) -> int:
    data = _read(args.input)
    if is_configuration_document(data):
        configs = parse_configuration_document(data)
    else:
        doc = _load_input(args.input, args)
        f = doc.function(args.function)
        configs = {t.degree: delta_from_table(t) for t in build_image_tables(doc.complex, f, doc.field)}
    degrees = args.degree if args.degree else sorted(configs)
    missing = [r for r in degrees if r not in configs]
    if missing:
        raise InputError(f"--degree: no degree {missing[0]} in the input")
    labeled = {f"degree {r}": configs[r] for r in degrees}
    target = labeled if len(labeled) > 1 else next(iter(labeled.values()))
    svg, table = emit_diagram(target, DiagramStyle(title=args.title or ""))
    if args.svg:
        Path(args.svg).write_bytes(svg)
    if args.csv:
        Path(args.csv).write_bytes(table)
    if not args.svg and not args.csv:
        _emit(table, None)
    return 0


def cmd_perturb(args) -> int:
    doc = _load_input(args.input, args)
    rng = random.Random(args.seed)
    label = doc.function_label(args.function)
    f = doc.function(args.function)
    eps = args.eps if args.eps is not None else default_epsilon(doc.complex, f)
    if eps <= 0:
        raise InputError("--eps must be positive")
    g = perturb_distinct(f, eps, rng) if args.distinct else perturb(f, eps, rng)
    doc.functions = {label: g}
    doc.meta = {**doc.meta, "perturbed_from": label, "seed": args.seed, "epsilon": format_rational(eps)}
    _emit(dumps(input_to_json(doc)), args.output)
    return 0


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="refbetti", description="Refined Betti configurations of PL maps.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add_input(sp, with_field=True):
        sp.add_argument("input", help="input document path, '-' for stdin, or corpus:NAME")
        sp.add_argument("--function", help="function label inside the document (default: first)")
        if with_field:
            sp.add_argument("--field", help="override the field: Q, GF(p), or GF together with --p")
            sp.add_argument("--p", type=int, help="prime for --field GF")
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")

    sp = sub.add_parser("compute", help="configurations per degree")
    add_input(sp)
    sp.add_argument("--vectors", action="store_true", help="include representative vectors")
    sp.add_argument("--ortho", action="store_true", help="include orthogonal bases (Q only)")
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("poly", help="monic polynomial per degree")
    add_input(sp)
    sp.set_defaults(func=cmd_poly)

    sp = sub.add_parser("distance", help="bottleneck distance of two configuration documents")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_distance)

    sp = sub.add_parser("verify", help="run named checks")
    add_input(sp)
    sp.add_argument("--check", action="append", choices=NAMED_CHECKS + EXTRA_CHECKS,
                    help="check to run (repeatable; default depends on the metadata)")
    sp.add_argument("--eps", type=_fraction_arg, help="perturbation size (default: min gap / 4)")
    sp.add_argument("--trials", type=int, help="perturbation trials (default 100)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--timings", action="store_true", help="include elapsed seconds (breaks byte determinism)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("plot", help="SVG diagram and CSV table")
    sp.add_argument("input", help="input or configuration document")
    sp.add_argument("--function")
    sp.add_argument("--field")
    sp.add_argument("--p", type=int)
    sp.add_argument("--degree", type=int, action="append", help="degree to draw (repeatable; default all)")
    sp.add_argument("--svg", help="SVG output path")
    sp.add_argument("--csv", help="CSV output path (stdout if neither path is given)")
    sp.add_argument("--title")
    sp.set_defaults(func=cmd_plot)

    sp = sub.add_parser("perturb", help="write a perturbed copy of the input document")
    add_input(sp)
    sp.add_argument("--eps", type=_fraction_arg, help="shift bound, strict (default: min gap / 4)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--distinct", action="store_true", help="make all vertex values pairwise distinct")
    sp.set_defaults(func=cmd_perturb)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
