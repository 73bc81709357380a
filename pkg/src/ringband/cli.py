"""``ringband`` command line: det, inv, selftest, bench.

Exit codes: 0 success, 1 malformed input or usage, 2 invalid field or
value (including float overflow), 3 singular matrix, 4 selftest
mismatch, 5 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

from . import selftest as selftest_mod
from .bench import OPS, run_bench, write_csv
from .circulant import CirculantMatrix
from .errors import (
    ConsistencyFailure,
    FieldError,
    GenerationExhausted,
    InvalidMatrix,
    NumericOverflow,
    SchemaError,
    SingularMatrix,
)
from .fields import parse_field
from .io import det_document, inverse_document, load_matrix
from .structured import det_uses_fallback, determinant, inverse

EXIT_OK = 0
EXIT_SCHEMA = 1
EXIT_VALUE = 2
EXIT_SINGULAR = 3
EXIT_MISMATCH = 4
EXIT_CONSISTENCY = 5


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with code 1 instead of argparse's 2 (2 means a bad value)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_SCHEMA, f"{self.prog}: error: {message}\n")


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _emit(doc, path):
    with _output(path) as out:
        json.dump(doc, out)
        out.write("\n")


def _fail(code, message):
    print(f"error: {message}", file=sys.stderr)
    return code


def _guarded(action):
    try:
        return action()
    except SchemaError as exc:
        return _fail(EXIT_SCHEMA, str(exc))
    except OSError as exc:
        return _fail(EXIT_SCHEMA, f"cannot read input: {exc}")
    except (FieldError, InvalidMatrix, NumericOverflow, ZeroDivisionError) as exc:
        return _fail(EXIT_VALUE, str(exc))
    except SingularMatrix as exc:
        return _fail(EXIT_SINGULAR, str(exc))
    except ConsistencyFailure as exc:
        return _fail(EXIT_CONSISTENCY, str(exc))


def cmd_det(args):
    def action():
        m = load_matrix(args.input)
        _emit(det_document(m.field, determinant(m), det_uses_fallback(m)), args.output)
        return EXIT_OK

    return _guarded(action)


def cmd_inv(args):
    def action():
        m = load_matrix(args.input)
        if args.format == "vector" and not isinstance(m, CirculantMatrix):
            raise SchemaError("$.type", "--format vector needs a kcm matrix; kcbm inverses are not circulant")
        _emit(inverse_document(m.field, inverse(m), args.format), args.output)
        return EXIT_OK

    return _guarded(action)


def cmd_selftest(args):
    try:
        fields = [parse_field(f) for f in (args.field or selftest_mod.DEFAULT_FIELDS)]
    except FieldError as exc:
        return _fail(EXIT_VALUE, str(exc))
    seed = args.seed if args.seed is not None else selftest_mod.default_seed()
    try:
        report = selftest_mod.run_selftest(args.max_k, args.max_n, args.cases, seed, fields)
    except (ValueError, GenerationExhausted) as exc:
        return _fail(EXIT_VALUE, str(exc))
    print(f"seed={seed}")
    for line in report.lines():
        print(line)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def _n_list(text):
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty n list")
    return values


def cmd_bench(args):
    try:
        field = parse_field(args.field)
    except FieldError as exc:
        return _fail(EXIT_VALUE, str(exc))
    try:
        records = run_bench(args.op, field, args.k, args.n_list, args.seed, args.repeat)
    except ValueError as exc:
        return _fail(EXIT_SCHEMA, str(exc))
    except (InvalidMatrix, NumericOverflow, GenerationExhausted) as exc:
        return _fail(EXIT_VALUE, str(exc))
    except ConsistencyFailure as exc:
        return _fail(EXIT_CONSISTENCY, str(exc))
    with _output(args.out) as out:
        write_csv(records, out)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="ringband", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("det", help="determinant of a matrix file")
    p.add_argument("input", help="JSON matrix file")
    p.add_argument("--output", "-o", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("inv", help="inverse of a matrix file")
    p.add_argument("input", help="JSON matrix file")
    p.add_argument("--output", "-o", help="write JSON here instead of stdout")
    p.add_argument("--format", choices=("full", "vector"), default="full",
                   help="full n x n grid, or the representing vector (kcm only)")
    p.set_defaults(func=cmd_inv)

    p = sub.add_parser("selftest", help="compare fast paths with the dense oracle")
    p.add_argument("--max-k", type=int, default=5)
    p.add_argument("--max-n", type=int, default=24)
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=None,
                   help=f"default: ${selftest_mod.SEED_ENV} or {selftest_mod.DEFAULT_SEED}")
    p.add_argument("--field", action="append",
                   help="field to test (repeatable); default: rational, zp:998244353, zp:7")
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("bench", help="scaling benchmark, CSV output")
    p.add_argument("--op", required=True, choices=tuple(OPS))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-list", type=_n_list, required=True, help="ascending comma-separated orders")
    p.add_argument("--field", default="zp:998244353")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeat", type=int, default=3, help="timing repetitions; best is reported")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
