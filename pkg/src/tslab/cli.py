"""Command line front end.

Exit status: 0 on success, 1 when the library raises a domain error, 2 on
usage errors.  JSON goes to stdout; exact rationals are emitted as strings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Optional, Sequence

from tslab import reproduce as repro
from tslab.distortion import LITERAL, SYMMETRIC, distortion, distortion_growth, phi
from tslab.errors import InvalidInput, TslabError
from tslab.norms import ITERATE, brute_force_iterate, norm, parse_spec, pointwise_limit, tsirelson_limit
from tslab.polyhedral import norming_set
from tslab.stability import (
    DEFAULT_TOLERANCE,
    double_limit_probe,
    gap_report,
    parse_sequence,
    phi_matrix,
    witness_search,
)
from tslab.vectors import SparseVector, format_rational, parse_rational


class UsageError(Exception):
    pass


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None


def _dims(text: str) -> list:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected dims like 3..8 or 3,4,5, got {text!r}") from None


def _matrix(text: str) -> list:
    try:
        raw = json.loads(text)
        return [[parse_rational(v) if isinstance(v, (int, str)) else float(v) for v in row] for row in raw]
    except (json.JSONDecodeError, TypeError, InvalidInput):
        raise argparse.ArgumentTypeError("expected a JSON list of rows of numbers") from None


def _flat_csv(obj: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for key, val in obj.items():
        w.writerow([key, json.dumps(val) if isinstance(val, (dict, list)) else val])
    return buf.getvalue()


def _emit(obj: dict, fmt: str, csv_text: Optional[str] = None) -> None:
    if fmt == "csv":
        sys.stdout.write(csv_text if csv_text is not None else _flat_csv(obj))
    else:
        sys.stdout.write(json.dumps(obj) + "\n")


def _value(v):
    return format_rational(v) if not isinstance(v, float) else v


# -- commands ------------------------------------------------------------------------


def cmd_norm(args) -> None:
    x = SparseVector.from_json(args.vector)
    spec = parse_spec(args.spec)
    if args.oracle and spec.kind == ITERATE:
        value = brute_force_iterate(x, spec.n)
    else:
        value = norm(x, spec)
    _emit({"value": _value(value)}, args.format)


def cmd_limit_norm(args) -> None:
    x = SparseVector.from_json(args.vector)
    if args.rows:
        rep = pointwise_limit(x, parse_sequence(args.rows).specs())
        _emit(rep.to_json_obj(), args.format)
        return
    value = brute_force_iterate(x, len(x)) if args.oracle else tsirelson_limit(x)
    _emit({"value": _value(value)}, args.format)


def cmd_norming_set(args) -> None:
    s = norming_set(parse_spec(args.spec), args.dim)
    obj = s.to_json_obj()
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"e{i}" for i in range(1, s.dim + 1)])
        for f in s.functionals:
            w.writerow([format_rational(f[i]) for i in range(1, s.dim + 1)])
        _emit(obj, "csv", buf.getvalue())
    else:
        _emit(obj, "json")


def cmd_distortion(args) -> None:
    res = distortion(parse_spec(args.num), parse_spec(args.den), args.dim, args.mode)
    _emit(res.to_json_obj(), args.format)


def cmd_growth(args) -> None:
    table = distortion_growth(parse_spec(args.num), parse_spec(args.den), args.dim, args.mode)
    _emit(table.to_json_obj(), args.format, table.to_csv())


def cmd_phi(args) -> None:
    val = phi(parse_spec(args.num), parse_spec(args.den), args.dim, args.mode)
    _emit(val.to_json_obj(), args.format)


def _build_matrix(args):
    if args.matrix is not None:
        return args.matrix
    if not (args.rows and args.cols and args.dim):
        raise UsageError("give --rows, --cols and --dim, or --matrix")
    return phi_matrix(parse_sequence(args.rows), parse_sequence(args.cols), args.dim)


def cmd_matrix(args) -> None:
    m = phi_matrix(parse_sequence(args.rows), parse_sequence(args.cols), args.dim)
    _emit(m.to_json_obj(), args.format, m.to_csv())


def cmd_gap(args) -> None:
    rep = gap_report(_build_matrix(args), args.tolerance)
    _emit(rep.to_json_obj(), args.format)


def cmd_probe(args) -> None:
    m = _build_matrix(args)
    window = args.window
    if window is None:
        window = min(len(m.cells), len(m.cells[0])) if hasattr(m, "cells") else min(len(m), len(m[0]))
    rep = double_limit_probe(m, args.tolerance, window)
    _emit(rep.to_json_obj(), args.format)


def cmd_witness(args) -> None:
    num, den = parse_spec(args.num), parse_spec(args.den)
    if num.kind != ITERATE or den.kind != ITERATE:
        raise UsageError("witness needs --num tsirelson:i --den tsirelson:j")
    res = witness_search(num.n, den.n, args.target, args.max_dim)
    _emit(res.to_json_obj() if res else {"found": False}, args.format)


def cmd_reproduce(args) -> int:
    summary = repro.reproduce(args.target)
    text = json.dumps(summary, indent=2) + "\n"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, f"{args.target}.json"), "w") as fh:
            fh.write(text)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "passed"])
        for c in summary["checks"]:
            w.writerow([c["name"], c["passed"]])
        sys.stdout.write(buf.getvalue())
    else:
        sys.stdout.write(text)
    return 0 if summary["passed"] else 1


# -- parser --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tslab", description="Exact Tsirelson norms, distortion and double-limit checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("norm", help="evaluate a norm")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--vector", required=True, help='e.g. {"coords":{"3":"1/2"}}')
    sp.add_argument("--oracle", action="store_true", help="use the brute-force recursion")
    common(sp)
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("limit-norm", help="Tsirelson norm, or pointwise limit along --rows")
    sp.add_argument("--vector", required=True)
    sp.add_argument("--rows", help="norm sequence, e.g. tsirelson:0..6")
    sp.add_argument("--oracle", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_limit_norm)

    sp = sub.add_parser("norming-set", help="export a norming set")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--dim", type=_int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_norming_set)

    for name, func, dim_type in (
        ("distortion", cmd_distortion, _int),
        ("phi", cmd_phi, _int),
        ("growth", cmd_growth, _dims),
    ):
        sp = sub.add_parser(name)
        sp.add_argument("--num", required=True)
        sp.add_argument("--den", required=True)
        sp.add_argument("--dim", type=dim_type, required=True)
        sp.add_argument("--mode", choices=(LITERAL, SYMMETRIC), default=LITERAL)
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("matrix", help="phi matrix of two norm sequences")
    sp.add_argument("--rows", required=True)
    sp.add_argument("--cols", required=True)
    sp.add_argument("--dim", type=_int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_matrix)

    for name, func in (("gap", cmd_gap), ("probe", cmd_probe)):
        sp = sub.add_parser(name)
        sp.add_argument("--rows")
        sp.add_argument("--cols")
        sp.add_argument("--dim", type=_int)
        sp.add_argument("--matrix", type=_matrix, help="JSON rows instead of norm sequences")
        sp.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
        if name == "probe":
            sp.add_argument("--window", type=_int)
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("witness", help="search x with |x|_i / |x|_j >= target")
    sp.add_argument("--num", required=True)
    sp.add_argument("--den", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--max-dim", type=_int, default=10)
    common(sp)
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("reproduce", help="run pinned reproduction checks")
    sp.add_argument("target", choices=repro.TARGETS)
    sp.add_argument("--out", help="directory for the JSON report")
    common(sp)
    sp.set_defaults(func=cmd_reproduce)
    return p


def run(argv: Sequence[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        status = args.func(args)
        return status or 0
    except (UsageError, InvalidInput) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except TslabError as exc:
        print(f"{exc.name}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
