"""Command-line front end: ``mzeta <command> [files] [options]``.

Results are printed as JSON on stdout with sorted keys.  Failures print
``{"error": <code>, "detail": ...}`` on stderr and exit with 1 (I/O or
parse errors) or 2 (domain errors).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from mzeta import serialize as ser
from mzeta.coeff_ring import to_completed
from mzeta.errors import MZetaError
from mzeta.hilbert_zeta import explint_coeff, goettsche_coeff, hilb_zeta, motivic_integral
from mzeta.monodromy import check_hilb_monodromy, check_monodromy, product_zeta
from mzeta.rational_series import (
    base_change,
    hadamard,
    partial_fractions,
    poles,
    quotient_series,
    rs_expand,
    sym_series,
)

DEFAULT_ORDER = 64
DEFAULT_PRECISION = 80

EXIT_IO = 1
EXIT_DOMAIN = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _series(args, path: str):
    F = ser.rs_from_json(_load(path), where=path)
    if args.quotient_table or args.quotient_default_identity:
        table = ser.quotient_table_from_json(_load(args.quotient_table)) if args.quotient_table else []
        F = quotient_series(F, table, default_identity=args.quotient_default_identity)
    return F


def _tables(args):
    return ser.sym_tables_from_json(_load(args.sym_tables)) if args.sym_tables else None


def _positive(name):
    def conv(s):
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be at least 1")
        return v

    return conv


def _non_negative(name):
    def conv(s):
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < 0:
            raise argparse.ArgumentTypeError(f"{name} must be non-negative")
        return v

    return conv


def _char_note(args, n: int, out: dict) -> dict:
    if args.char is not None:
        out["char"] = args.char
        out["valid"] = n < args.char
        out["validity_note"] = "identities hold modulo q^p in characteristic p; only n < p is covered"
    return out


# commands ---------------------------------------------------------------------


def cmd_expand(args):
    F = _series(args, args.series)
    order = args.order
    if args.char is not None:
        order = min(order, args.char - 1)
    coeffs = rs_expand(F, order)
    if args.completed:
        return {
            "precision": args.precision,
            "coefficients": [
                {
                    "precision": cc.precision,
                    "terms": [{"L": j, "c": str(c)} for j, c in sorted(cc.terms.items(), reverse=True)],
                }
                for cc in (to_completed(c, args.precision) for c in coeffs)
            ],
        }
    out = {"coefficients": ser.coeffs_to_json(coeffs)}
    return _char_note(args, order, out) if args.char is not None else out["coefficients"]


def cmd_pf(args):
    return ser.pf_to_json(partial_fractions(_series(args, args.series)))


def cmd_poles(args):
    return ser.poleset_to_json(poles(_series(args, args.series)))


def cmd_hadamard(args):
    return ser.rs_to_json(hadamard(_series(args, args.first), _series(args, args.second)))


def cmd_product(args):
    return ser.rs_to_json(product_zeta(_series(args, args.first), _series(args, args.second)))


def cmd_sym(args):
    return ser.rs_to_json(sym_series(_series(args, args.series), args.r, _tables(args)))


def cmd_basechange(args):
    return ser.rs_to_json(base_change(_series(args, args.series), args.l))


def cmd_hilb(args):
    result = ser.rs_to_json(hilb_zeta(_series(args, args.series), args.n, _tables(args)))
    if args.char is None:
        return result
    return _char_note(args, args.n, {"series": result})


def cmd_goettsche_check(args):
    I = ser.integrals_from_json(_load(args.integrals))
    tables = _tables(args)
    top = args.n if args.char is None else min(args.n, args.char - 1)
    rows = []
    for k in range(1, top + 1):
        a = explint_coeff(I, k, tables)
        b = goettsche_coeff(I, k, tables)
        rows.append({"n": k, "explicit": ser.gc_to_json(a), "product": ser.gc_to_json(b), "equal": a == b})
    out = {"n": args.n, "equal": all(r["equal"] for r in rows), "coefficients": rows}
    return _char_note(args, args.n, out)


def cmd_integral(args):
    return ser.gc_to_json(motivic_integral(ser.model_from_json(_load(args.model))))


def cmd_monodromy(args):
    F = _series(args, args.series)
    E = ser.exponents_from_json(_load(args.exponents))
    return ser.report_to_json(check_monodromy(F, E))


def cmd_hilb_monodromy(args):
    F = _series(args, args.series)
    E = ser.exponents_from_json(_load(args.exponents))
    out = ser.report_to_json(check_hilb_monodromy(F, E, args.n, _tables(args)))
    return _char_note(args, args.n, out)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--quotient-table", metavar="FILE", help="quotient table applied to series inputs")
    common.add_argument(
        "--quotient-default-identity",
        action="store_true",
        help="apply quotient_series to inputs, leaving untabled coefficients unchanged",
    )
    common.add_argument("--sym-tables", metavar="FILE", help="declared Sym^k of opaque generators")
    common.add_argument("--char", type=_positive("--char"), metavar="P", help="characteristic p: truncate and annotate validity")

    p = _Parser(prog="mzeta", description="Motivic zeta functions of Hilbert schemes of points.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("expand", parents=[common], help="coefficients of T^0..T^M")
    s.add_argument("series")
    s.add_argument("--order", "-M", type=_non_negative("--order"), default=DEFAULT_ORDER)
    s.add_argument("--completed", action="store_true", help="emit the coefficients in the completed ring")
    s.add_argument("--precision", "-P", type=_positive("--precision"), default=DEFAULT_PRECISION)
    s.set_defaults(func=cmd_expand)

    for name, func, helptext in (
        ("pf", cmd_pf, "partial-fraction (separated) form"),
        ("poles", cmd_poles, "poles with orders"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("series")
        s.set_defaults(func=func)

    for name, func, helptext in (
        ("hadamard", cmd_hadamard, "coefficientwise product"),
        ("product", cmd_product, "zeta function of a product variety"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("first")
        s.add_argument("second")
        s.set_defaults(func=func)

    s = sub.add_parser("sym", parents=[common], help="coefficientwise Sym^r")
    s.add_argument("series")
    s.add_argument("-r", type=_non_negative("-r"), required=True)
    s.set_defaults(func=cmd_sym)

    s = sub.add_parser("basechange", parents=[common], help="series of the degree-l base change")
    s.add_argument("series")
    s.add_argument("-l", type=_positive("-l"), required=True)
    s.set_defaults(func=cmd_basechange)

    s = sub.add_parser("hilb", parents=[common], help="zeta function of Hilb^n")
    s.add_argument("series")
    s.add_argument("-n", type=_positive("-n"), required=True)
    s.set_defaults(func=cmd_hilb)

    s = sub.add_parser("goettsche-check", parents=[common], help="explicit partition sum against the product formula")
    s.add_argument("integrals")
    s.add_argument("-n", type=_positive("-n"), required=True)
    s.set_defaults(func=cmd_goettsche_check)

    s = sub.add_parser("integral", parents=[common], help="motivic integral of model data")
    s.add_argument("model")
    s.set_defaults(func=cmd_integral)

    s = sub.add_parser("monodromy", parents=[common], help="check poles against eigenvalue exponents")
    s.add_argument("series")
    s.add_argument("exponents")
    s.set_defaults(func=cmd_monodromy)

    s = sub.add_parser("hilb-monodromy", parents=[common], help="monodromy check for Hilb^n")
    s.add_argument("series")
    s.add_argument("exponents")
    s.add_argument("-n", type=_positive("-n"), required=True)
    s.set_defaults(func=cmd_hilb_monodromy)
    return p


def _fail(code: str, detail: str, status: int) -> int:
    sys.stderr.write(ser.dumps({"error": code, "detail": detail}))
    return status


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail("E_USAGE", str(exc), EXIT_IO)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        result = args.func(args)
    except ser.SchemaError as exc:
        return _fail(exc.code, str(exc.detail), EXIT_IO)
    except MZetaError as exc:
        return _fail(exc.code, str(exc.detail), EXIT_DOMAIN)
    except json.JSONDecodeError as exc:
        return _fail("E_PARSE", f"invalid JSON: {exc}", EXIT_IO)
    except OSError as exc:
        return _fail("E_IO", str(exc), EXIT_IO)
    except Exception as exc:  # never leak a traceback
        return _fail("E_INTERNAL", f"{type(exc).__name__}: {exc}", EXIT_DOMAIN)
    sys.stdout.write(ser.dumps(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
