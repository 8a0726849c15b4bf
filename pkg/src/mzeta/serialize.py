"""JSON encoding of ring elements, series, pole sets and reports.

Integers inside classes are written as decimal strings so that arbitrarily
large coefficients survive any JSON reader.  Rationals are ``"p/q"`` in
lowest terms with a leading ``-`` when negative.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from mzeta.coeff_ring import GrothClass, LaurentPoly, Monomial
from mzeta.errors import MZetaError
from mzeta.hilbert_zeta import IntegralSequence, ModelData
from mzeta.monodromy import ExponentSet, HilbMonodromyReport, MonodromyReport
from mzeta.power_structure import SymTables
from mzeta.rational_series import PartialFractions, PoleSet, RationalSeries

POLE_DEFINITION = "separated-form (localized ring)"


class SchemaError(MZetaError, ValueError):
    """Input JSON does not match the expected layout."""

    code = "E_PARSE"


def _need(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"{where}: {key!r} must be {kind.__name__}")
    return val


def _int(x, where) -> int:
    if isinstance(x, bool):
        raise SchemaError(f"{where}: expected an integer")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise SchemaError(f"{where}: expected an integer, got {x!r}")


# rationals ------------------------------------------------------------------


def fraction_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(s) -> Fraction:
    if isinstance(s, bool):
        raise SchemaError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise SchemaError(f"not a rational: {s!r}")


# GrothClass -----------------------------------------------------------------


def gc_to_json(a: GrothClass) -> dict:
    num = [
        {"c": str(c), "L": m.l_exp, "gens": dict(m.gens)}
        for m, c in a.num.sorted_terms()
    ]
    return {"num": num, "den": [{"r": r, "e": e} for r, e in a.den]}


def gc_from_json(obj, where="class") -> GrothClass:
    if isinstance(obj, (int, str)) and not isinstance(obj, bool):
        return GrothClass(_int(obj, where))
    terms = []
    for i, t in enumerate(_need(obj, "num", list, where)):
        w = f"{where}.num[{i}]"
        gens = t.get("gens", {}) if isinstance(t, dict) else None
        if not isinstance(gens, dict):
            raise SchemaError(f"{w}: 'gens' must be an object")
        try:
            key = tuple((str(k), _int(v, w)) for k, v in gens.items())
            terms.append((Monomial(_int(t.get("L", 0), w), key), _int(_need(t, "c", None, w), w)))
        except ValueError as exc:
            raise SchemaError(f"{w}: {exc}") from None
    den = []
    for i, d in enumerate(obj.get("den", [])):
        w = f"{where}.den[{i}]"
        r, e = _int(_need(d, "r", None, w), w), _int(_need(d, "e", None, w), w)
        if r < 1 or e < 0:
            raise SchemaError(f"{w}: need r >= 1 and e >= 0")
        den.append((r, e))
    try:
        return GrothClass(LaurentPoly.from_terms(terms), den)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from None


# series ---------------------------------------------------------------------


def rs_to_json(F: RationalSeries) -> dict:
    return {
        "num": [{"t": t, "coeff": gc_to_json(c)} for t, c in sorted(F.num.items())],
        "den": [{"a": a, "b": b, "e": e} for (a, b), e in sorted(F.den.items())],
    }


def rs_from_json(obj, where="series") -> RationalSeries:
    num = {}
    for i, t in enumerate(_need(obj, "num", list, where)):
        w = f"{where}.num[{i}]"
        exp = _int(_need(t, "t", None, w), w)
        if exp < 0:
            raise SchemaError(f"{w}: T-exponent must be non-negative")
        c = gc_from_json(_need(t, "coeff", None, w), w + ".coeff")
        num[exp] = num[exp] + c if exp in num else c
    den = []
    for i, d in enumerate(obj.get("den", [])):
        w = f"{where}.den[{i}]"
        a, b, e = (_int(_need(d, k, None, w), w) for k in ("a", "b", "e"))
        if b < 1 or e < 1:
            raise SchemaError(f"{w}: need b >= 1 and e >= 1")
        den.append((a, b, e))
    return RationalSeries(num, den)


def coeffs_to_json(coeffs) -> list:
    return [gc_to_json(c) for c in coeffs]


def poleset_to_json(P: PoleSet) -> list:
    return [{"q": fraction_str(q), "order": o, "exact": P.exact[q]} for q, o in P.items()]


def pf_to_json(pf: PartialFractions) -> dict:
    return {
        "pole_definition": POLE_DEFINITION,
        "period": pf.period,
        "poly": [{"t": t, "coeff": gc_to_json(c)} for t, c in sorted(pf.poly.items())],
        "parts": [
            {
                "q": fraction_str(q),
                "order": part.order,
                "period": part.period,
                "num": [{"t": t, "coeff": gc_to_json(c)} for t, c in sorted(part.num.items())],
            }
            for q, part in sorted(pf.parts.items())
        ],
    }


# other inputs ---------------------------------------------------------------


def exponents_to_json(E) -> dict:
    return {"exponents": [fraction_str(q) for q in sorted(E)]}


def exponents_from_json(obj) -> ExponentSet:
    vals = [parse_fraction(s) for s in _need(obj, "exponents", list, "exponents")]
    for q in vals:
        if not 0 <= q < 1:
            raise SchemaError(f"exponent {q} is outside [0, 1)")
    return ExponentSet(vals)


def integrals_from_json(obj) -> IntegralSequence:
    vals = _need(obj, "integrals", list, "integrals")
    return IntegralSequence([gc_from_json(v, f"integrals[{i}]") for i, v in enumerate(vals)])


def model_from_json(obj) -> ModelData:
    comps = []
    for i, c in enumerate(_need(obj, "components", list, "components")):
        w = f"components[{i}]"
        comps.append((gc_from_json(_need(c, "class", None, w), w + ".class"), _int(_need(c, "ord", None, w), w)))
    return ModelData(comps)


def sym_tables_from_json(obj) -> SymTables:
    raw = _need(obj, "sym_tables", dict, "sym_tables")
    tables = {}
    for key, vals in raw.items():
        if not isinstance(vals, list):
            raise SchemaError(f"sym_tables[{key!r}] must be a list")
        tables[key] = [gc_from_json(v, f"sym_tables[{key!r}][{i}]") for i, v in enumerate(vals)]
    try:
        return SymTables(tables)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def quotient_table_from_json(obj) -> list[tuple[GrothClass, GrothClass]]:
    out = []
    for i, e in enumerate(_need(obj, "quotients", list, "quotients")):
        w = f"quotients[{i}]"
        out.append((gc_from_json(_need(e, "from", None, w), w + ".from"), gc_from_json(_need(e, "to", None, w), w + ".to")))
    return out


# reports --------------------------------------------------------------------


def report_to_json(rep: MonodromyReport) -> dict:
    out: dict[str, Any] = {
        "pole_definition": POLE_DEFINITION,
        "exponents": [fraction_str(q) for q in rep.exponents.sorted()],
        "poles": [
            {"q": fraction_str(v.q), "order": v.order, "exact": v.exact, "witnessed": v.witnessed}
            for v in rep.verdicts
        ],
        "overall": rep.overall,
    }
    if isinstance(rep, HilbMonodromyReport):
        out["n"] = rep.n
        out["expected_poles"] = [fraction_str(q) for q in sorted(rep.expected_poles)]
        out["contained"] = rep.contained
        out["equality_observed"] = rep.equality_observed
        out["exponents_note"] = "union of m-fold sums of the surface exponents, m = 1..n"
        if not rep.overall:
            out["implementation_bug"] = True
    return out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
