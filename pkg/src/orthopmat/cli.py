"""Command-line front end: ``orthopmat {build,assemble,verify,sweep}``."""
from __future__ import annotations

import argparse
import sys

from .exactcheck import DEFAULT_LIMITS, verify_family
from .families import InvalidFamilyError, KINDS, parse_family
from .fields import Field, FieldError, format_scalar, parse_number
from .harness import TESTS, UnsupportedFamilyError, sweep, write_csv
from .operators import assemble_differential, assemble_integral, parse_operator_spec
from .opmatrix import (
    UnsupportedExplicitError, definite_integral_matrix, derivative_matrix,
    matrix_to_coo, matrix_to_csv, primitive_matrix, shift_matrix,
)


class UsageError(Exception):
    pass


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _number(text):
    try:
        return parse_number(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}")


def _add_family(p):
    p.add_argument("--family", required=True, choices=KINDS)
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--lambda", dest="lam")


def _add_field(p):
    p.add_argument("--field", choices=("double", "exact"), default="double",
                   help="float64 or exact rationals (default: double)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="orthopmat",
                                 description="Operational matrices for orthogonal polynomial bases.")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="emit M, N, O or O_a^x")
    _add_family(b)
    b.add_argument("--matrix", required=True, choices=("M", "N", "O", "Oax"))
    b.add_argument("--a", type=_number, help="lower limit for Oax")
    b.add_argument("--n", required=True, type=_positive_int)
    how = b.add_mutually_exclusive_group()
    how.add_argument("--explicit", action="store_const", dest="method", const="explicit")
    how.add_argument("--recursive", action="store_const", dest="method", const="recursive")
    b.add_argument("--format", choices=("csv", "coo"), default="csv")
    _add_field(b)

    a = sub.add_parser("assemble", help="matrix of an operator-spec file")
    _add_family(a)
    a.add_argument("--n", required=True, type=_positive_int)
    a.add_argument("--spec", required=True, help="operator spec file ('-' for stdin)")
    a.add_argument("--format", choices=("csv", "coo"), default="csv")
    _add_field(a)

    v = sub.add_parser("verify", help="compare builders with the exact oracle")
    vsub = v.add_subparsers(dest="what", required=True)
    o = vsub.add_parser("oracle")
    _add_family(o)
    o.add_argument("--n", required=True, type=_positive_int)

    s = sub.add_parser("sweep", help="residual experiment over n")
    s.add_argument("--test", required=True, choices=TESTS)
    _add_family(s)
    s.add_argument("--nmax", type=_positive_int, default=1000)
    s.add_argument("--step", type=_positive_int, default=20)
    s.add_argument("--nmin", type=_positive_int, help="first n (default: step)")
    s.add_argument("--k", type=_int_list, default=None,
                   help="comma-separated k values (moments: 0,1,2,10,50; genfun: 1,2,3)")
    s.add_argument("--z", type=_number, default=parse_number("1/10"))
    s.add_argument("--jobs", type=_positive_int, default=1)
    s.add_argument("--out", help="CSV path (default: stdout)")
    return ap


def _family(args):
    return parse_family(args.family, args.alpha, args.beta, args.lam)


def _emit(entries, fmt, out):
    out.write(matrix_to_coo(entries) if fmt == "coo" else matrix_to_csv(entries))


def _cmd_build(args, out):
    fam = _family(args)
    field = Field(args.field)
    method = args.method or "recursive"
    if args.matrix != "Oax" and args.a is not None:
        raise UsageError("--a only applies to --matrix Oax")
    if args.matrix == "M":
        m = shift_matrix(fam, args.n, field)
    elif args.matrix == "N":
        m = derivative_matrix(fam, args.n, field, method)
    elif args.matrix == "O":
        m = primitive_matrix(fam, args.n, field, method)
    else:
        if args.a is None:
            raise UsageError("--matrix Oax needs --a")
        m = definite_integral_matrix(fam, args.n, args.a, field, method)
    _emit(m.entries, args.format, out)
    return 0


def _cmd_assemble(args, out):
    fam = _family(args)
    field = Field(args.field)
    try:
        text = sys.stdin.read() if args.spec == "-" else open(args.spec).read()
    except OSError as exc:
        raise UsageError(f"cannot read spec: {exc}")
    try:
        dspec, ispec = parse_operator_spec(text, field)
    except ValueError as exc:
        raise UsageError(f"bad spec: {exc}")
    total = None
    if dspec is not None:
        total = assemble_differential(dspec, fam, args.n, field).entries
    if ispec is not None:
        s = assemble_integral(ispec, fam, args.n, field).entries
        total = s if total is None else total + s
    _emit(total, args.format, out)
    return 0


def _cmd_verify(args, out):
    fam = _family(args)
    failures = verify_family(fam, args.n, DEFAULT_LIMITS)
    if not failures:
        out.write(f"ok {fam.label()} n={args.n}\n")
        return 0
    name, mm = failures[0]
    if mm[0] == "shape":
        msg = f"shape {mm[1]} != oracle {mm[2]}"
    else:
        i, j, got, want = mm
        msg = f"entry ({i},{j}): built {format_scalar(got)}, oracle {format_scalar(want)}"
    print(f"FAIL {fam.label()} n={args.n} {name}: {msg}", file=sys.stderr)
    return 1


def _cmd_sweep(args, out):
    fam = _family(args)
    if args.nmin is not None and args.nmin > args.nmax:
        raise UsageError("--nmin exceeds --nmax")
    ns = range(args.nmin or args.step, args.nmax + 1, args.step)
    ks = args.k
    if ks is None:
        ks = [0, 1, 2, 10, 50] if args.test == "moments" else [1, 2, 3]
    if args.test == "genfun" and min(ks) < 1:
        raise UsageError("genfun needs k >= 1")
    if args.test == "moments" and min(ks) < 0:
        raise UsageError("moments needs k >= 0")
    rows = sweep(args.test, fam, ns, ks, float(args.z), jobs=args.jobs)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, out)
    return 0


COMMANDS = {"build": _cmd_build, "assemble": _cmd_assemble, "verify": _cmd_verify, "sweep": _cmd_sweep}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, InvalidFamilyError, FieldError, UnsupportedExplicitError,
            UnsupportedFamilyError) as exc:
        print(f"orthopmat: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
