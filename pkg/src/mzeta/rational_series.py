"""Rational power series in ``T`` over the localized coefficient ring.

A :class:`RationalSeries` is ``num(T) / prod (1 - L^{-a} T^b)^e``.  The
structured operations (Hadamard product, coefficientwise ``Sym^r``, base
change) all follow the same pattern: derive a candidate denominator from the
pole sets of the inputs, expand the target coefficients far enough, multiply
by the candidate denominator and check that the product is a polynomial of
the expected degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, NamedTuple, Sequence

from mzeta.coeff_ring import (
    ONE,
    ZERO,
    GrothClass,
    LaurentPoly,
    _merge_max,
    gc,
)
from mzeta.errors import InvalidArgumentError, MissingQuotientError, ReconstructionError
from mzeta.power_structure import SymTables, sym

__all__ = [
    "DenFactor",
    "RationalSeries",
    "PoleSet",
    "PolePart",
    "PartialFractions",
    "rs_expand",
    "rs_add",
    "rs_mul",
    "rs_eq",
    "rs_scale",
    "common_period",
    "partial_fractions",
    "poles",
    "hadamard",
    "sym_series",
    "base_change",
    "quotient_series",
    "GUARD_TERMS",
]

GUARD_TERMS = 32
EXACTNESS_SEARCH_FACTOR = 4

_LP_ZERO = LaurentPoly.from_int(0)
_LP_ONE = LaurentPoly.from_int(1)


class DenFactor(NamedTuple):
    """The factor ``(1 - L^{-a} T^b)^e``; its pole sits at ``q = a/b``."""

    a: int
    b: int
    e: int

    @property
    def pole(self) -> Fraction:
        return Fraction(self.a, self.b)


# --------------------------------------------------------------------------
# T-polynomials over GrothClass (sparse dicts exponent -> coefficient)
# --------------------------------------------------------------------------


def _tp_clean(p: Mapping[int, GrothClass]) -> dict[int, GrothClass]:
    return {t: c for t, c in p.items() if not c.is_zero()}


def _tp_add(p, q):
    out = dict(p)
    for t, c in q.items():
        out[t] = out[t] + c if t in out else c
    return _tp_clean(out)


def _tp_sub(p, q):
    return _tp_add(p, {t: -c for t, c in q.items()})


def _tp_mul(p, q):
    out: dict[int, GrothClass] = {}
    for i, x in p.items():
        for j, y in q.items():
            k = i + j
            prod = x * y
            out[k] = out[k] + prod if k in out else prod
    return _tp_clean(out)


def _tp_scale(p, c: GrothClass):
    if c.is_zero():
        return {}
    return _tp_clean({t: x * c for t, x in p.items()})


def _tp_deg(p) -> int:
    return max(p) if p else -1


def _tp_divmod(p, d):
    """Division by ``d`` whose leading coefficient is a unit."""
    dd = _tp_deg(d)
    if dd < 0:
        raise ZeroDivisionError("division by the zero polynomial")
    lead_inv = d[dd].inverse()
    rem = dict(p)
    quot: dict[int, GrothClass] = {}
    for k in range(_tp_deg(p), dd - 1, -1):
        c = rem.get(k)
        if c is None or c.is_zero():
            continue
        f = c * lead_inv
        quot[k - dd] = f
        for j, y in d.items():
            t = j + k - dd
            v = rem.get(t, ZERO) - f * y
            if v.is_zero():
                rem.pop(t, None)
            else:
                rem[t] = v
    return _tp_clean(quot), _tp_clean(rem)


def _tp_eq(p, q) -> bool:
    keys = set(p) | set(q)
    return all(p.get(t, ZERO) == q.get(t, ZERO) for t in keys)


def _tp_pow(p, n: int):
    out = {0: ONE}
    for _ in range(n):
        out = _tp_mul(out, p)
    return out


def _factor_tp(a: int, b: int, e: int = 1):
    """``(1 - L^{-a} T^b)^e`` as a T-polynomial over GrothClass."""
    return {b * k: GrothClass.L(-a * k, (-1) ** k * math.comb(e, k)) for k in range(e + 1)}


def _den_lp(den: Mapping[tuple[int, int], int]) -> dict[int, LaurentPoly]:
    """Expanded denominator with LaurentPoly coefficients."""
    out = {0: _LP_ONE}
    for (a, b), e in sorted(den.items()):
        fac = {b * k: LaurentPoly.monomial(-a * k, (-1) ** k * math.comb(e, k)) for k in range(e + 1)}
        nxt: dict[int, LaurentPoly] = {}
        for i, x in out.items():
            for j, y in fac.items():
                v = x * y
                nxt[i + j] = nxt[i + j] + v if i + j in nxt else v
        out = {t: c for t, c in nxt.items() if not c.is_zero()}
    return out


def _den_tp(den) -> dict[int, GrothClass]:
    return {t: GrothClass(c) for t, c in _den_lp(den).items()}


def _den_degree(den) -> int:
    return sum(b * e for (_, b), e in den.items())


def _common_den(coeffs: Iterable[GrothClass]):
    """Merge denominators; returns (den tuple, list of numerators over it)."""
    coeffs = list(coeffs)
    common: tuple = ()
    for c in coeffs:
        if c.den and c.den != common:
            common, _, _ = _merge_max(common, c.den)
    nums = []
    for c in coeffs:
        if c.den == common:
            nums.append(c.num)
        else:
            _, cof, _ = _merge_max(c.den, common)
            nums.append(c.num * cof)
    return common, nums


# --------------------------------------------------------------------------
# RationalSeries
# --------------------------------------------------------------------------


def _canon_rs_den(den) -> dict[tuple[int, int], int]:
    if not den:
        return {}
    if isinstance(den, Mapping):
        items = [(a, b, e) for (a, b), e in den.items()]
    else:
        items = [tuple(f) for f in den]
    out: dict[tuple[int, int], int] = {}
    for a, b, e in items:
        a, b, e = int(a), int(b), int(e)
        if b < 1:
            raise InvalidArgumentError(f"denominator factor needs b >= 1, got b = {b}")
        if e < 0:
            raise InvalidArgumentError(f"denominator exponent must be non-negative, got {e}")
        if e:
            out[(a, b)] = out.get((a, b), 0) + e
    return out


class RationalSeries:
    """``num(T) / prod_{(a,b)} (1 - L^{-a} T^b)^{e}`` with GrothClass coefficients."""

    __slots__ = ("num", "den")

    def __init__(self, num: Mapping[int, object] | None = None, den=None):
        clean = {}
        for t, c in (num or {}).items():
            t = int(t)
            if t < 0:
                raise InvalidArgumentError("numerator exponents of T must be non-negative")
            c = gc(c)
            if not c.is_zero():
                clean[t] = clean[t] + c if t in clean else c
        self.num = _tp_clean(clean)
        self.den = _canon_rs_den(den) if self.num else {}

    @classmethod
    def zero(cls) -> "RationalSeries":
        return cls()

    @classmethod
    def single_pole(cls, coeff, a: int, b: int = 1, e: int = 1, shift: int = 0) -> "RationalSeries":
        """``coeff * T^shift / (1 - L^{-a} T^b)^e``."""
        return cls({shift: coeff}, {(a, b): e})

    @classmethod
    def geometric(cls) -> "RationalSeries":
        """``1/(1 - T)``: all coefficients 1, the identity of the Hadamard product."""
        return cls({0: ONE}, {(0, 1): 1})

    def factors(self) -> list[DenFactor]:
        return [DenFactor(a, b, e) for (a, b), e in sorted(self.den.items())]

    @property
    def period(self) -> int:
        return math.lcm(*(b for _, b in self.den)) if self.den else 1

    def num_degree(self) -> int:
        return _tp_deg(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def has_gens(self) -> bool:
        return any(c.has_gens() for c in self.num.values())

    def expand(self, order: int) -> list[GrothClass]:
        return rs_expand(self, order)

    def __add__(self, other):
        return rs_add(self, other)

    def __neg__(self):
        return RationalSeries({t: -c for t, c in self.num.items()}, self.den)

    def __sub__(self, other):
        return rs_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, RationalSeries):
            return rs_mul(self, other)
        return rs_scale(self, gc(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RationalSeries):
            return NotImplemented
        return rs_eq(self, other)

    __hash__ = None

    def __repr__(self):
        num = " + ".join(f"({c})*T^{t}" for t, c in sorted(self.num.items())) or "0"
        den = "*".join(
            f"(1 - L^{-a}*T^{b})" + (f"^{e}" if e > 1 else "") for (a, b), e in sorted(self.den.items())
        )
        return f"RationalSeries({num}" + (f" / {den})" if den else ")")


def _divide_by_factors(seq: list[LaurentPoly], den) -> None:
    """In place: ``seq <- seq / prod (1 - L^{-a} T^b)^e`` as truncated power series."""
    M = len(seq) - 1
    for (a, b), e in sorted(den.items()):
        for _ in range(e):
            for m in range(b, M + 1):
                prev = seq[m - b]
                if not prev.is_zero():
                    seq[m] = seq[m] + prev.shift(-a)


def _multiply_by_factors(seq: list[LaurentPoly], den) -> None:
    """In place: ``seq <- seq * prod (1 - L^{-a} T^b)^e`` truncated to the same length."""
    M = len(seq) - 1
    for (a, b), e in sorted(den.items()):
        for _ in range(e):
            for m in range(M, b - 1, -1):
                prev = seq[m - b]
                if not prev.is_zero():
                    seq[m] = seq[m] - prev.shift(-a)


def rs_expand(F: RationalSeries, order: int) -> list[GrothClass]:
    """Coefficients of ``T^0 .. T^order``."""
    if order < 0:
        raise InvalidArgumentError("expansion order must be non-negative")
    if not F.num:
        return [ZERO] * (order + 1)
    ts = sorted(F.num)
    common, nums = _common_den(F.num[t] for t in ts)
    seq = [_LP_ZERO] * (order + 1)
    for t, x in zip(ts, nums):
        if t <= order:
            seq[t] = x
    # each factor is a geometric series: c_m += L^{-a} c_{m-b}
    _divide_by_factors(seq, F.den)
    return [GrothClass(x, common) for x in seq]


def rs_scale(F: RationalSeries, c) -> RationalSeries:
    c = gc(c)
    return RationalSeries(_tp_scale(F.num, c), F.den)


def _den_cofactor(den, target):
    extra = {k: target[k] - den.get(k, 0) for k in target if target[k] > den.get(k, 0)}
    return _den_tp(extra) if extra else {0: ONE}


def rs_add(F: RationalSeries, G: RationalSeries) -> RationalSeries:
    if F.is_zero():
        return G
    if G.is_zero():
        return F
    if F.den == G.den:
        return RationalSeries(_tp_add(F.num, G.num), F.den)
    merged = {k: max(F.den.get(k, 0), G.den.get(k, 0)) for k in set(F.den) | set(G.den)}
    num = _tp_add(_tp_mul(F.num, _den_cofactor(F.den, merged)), _tp_mul(G.num, _den_cofactor(G.den, merged)))
    return RationalSeries(num, merged)


def rs_mul(F: RationalSeries, G: RationalSeries) -> RationalSeries:
    """Cauchy product of two series."""
    den = dict(F.den)
    for k, e in G.den.items():
        den[k] = den.get(k, 0) + e
    return RationalSeries(_tp_mul(F.num, G.num), den)


def rs_eq(F: RationalSeries, G: RationalSeries) -> bool:
    """Equality of the underlying power series, by cross-multiplication."""
    if F.den == G.den:
        return _tp_eq(F.num, G.num)
    return _tp_eq(_tp_mul(F.num, _den_tp(G.den)), _tp_mul(G.num, _den_tp(F.den)))


def common_period(F: RationalSeries) -> RationalSeries:
    """Rewrite every factor as ``(1 - L^{-a'} T^N)`` with ``N`` the lcm of the periods."""
    if not F.den:
        return F
    N = F.period
    num = F.num
    den: dict[tuple[int, int], int] = {}
    for (a, b), e in sorted(F.den.items()):
        k = N // b
        if k > 1:
            # (1 - x T^b)(1 + x T^b + ... + x^{k-1} T^{b(k-1)}) = 1 - x^k T^{bk}
            cof = {b * i: GrothClass.L(-a * i) for i in range(k)}
            num = _tp_mul(num, _tp_pow(cof, e))
        key = (a * k, N)
        den[key] = den.get(key, 0) + e
    return RationalSeries(num, den)


# --------------------------------------------------------------------------
# Partial fractions and poles
# --------------------------------------------------------------------------


@dataclass
class PolePart:
    """``num(T) / (1 - L^{-q*period} T^period)^order``."""

    num: dict[int, GrothClass]
    order: int
    period: int

    def factor(self, q: Fraction) -> tuple[int, int]:
        return int(q * self.period), self.period

    def to_series(self, q: Fraction) -> RationalSeries:
        return RationalSeries(self.num, {self.factor(q): self.order})


@dataclass
class PartialFractions:
    """Separated form ``poly(T) + sum_q f_q(T) / (1 - L^{-qN} T^N)^{a_q}``."""

    poly: dict[int, GrothClass] = field(default_factory=dict)
    parts: dict[Fraction, PolePart] = field(default_factory=dict)
    period: int = 1

    def to_series(self) -> RationalSeries:
        out = RationalSeries(self.poly)
        for q, part in sorted(self.parts.items()):
            out = rs_add(out, part.to_series(q))
        return out

    def expand(self, order: int) -> list[GrothClass]:
        """Re-expansion term by term, independent of recombining the fractions."""
        out = [ZERO] * (order + 1)
        for t, c in self.poly.items():
            if t <= order:
                out[t] = out[t] + c
        for q, part in self.parts.items():
            for m, c in enumerate(rs_expand(part.to_series(q), order)):
                if not c.is_zero():
                    out[m] = out[m] + c
        return out


def _local_part(rem, ai: int, ei: int, others, N: int):
    """Principal part of ``rem / prod (1 - L^-a T^N)^e`` at the factor ``ai``.

    With ``u = T^N`` and ``v = 1 - L^-ai u`` the other factors become
    ``(1 - L^k) + L^k v`` (``k = ai - aj``), so everything is expanded in ``v``
    to order ``ei``.  Residues of the T-exponent mod N are handled separately.
    """
    unit = [ONE] + [ZERO] * (ei - 1)
    for aj, ej in others:
        k = ai - aj
        B = GrothClass.inv_one_minus_L_power(k)
        w = B.shift(k)
        lead = B ** ej
        inv = [lead * ((-1) ** m * math.comb(ej + m - 1, m)) * w ** m for m in range(ei)]
        unit = [sum((unit[i] * inv[m - i] for i in range(m + 1)), ZERO) for m in range(ei)]
    by_residue: dict[int, dict[int, GrothClass]] = {}
    for t, c in rem.items():
        by_residue.setdefault(t % N, {})[t // N] = c
    out: dict[int, GrothClass] = {}
    for rho, coeffs in by_residue.items():
        # n(L^ai (1 - v)) mod v^ei
        s = [ZERO] * ei
        for k, c in coeffs.items():
            ck = c.shift(ai * k)
            for m in range(min(k, ei - 1) + 1):
                s[m] = s[m] + ck * ((-1) ** m * math.comb(k, m))
        h = [sum((s[i] * unit[m - i] for i in range(m + 1)), ZERO) for m in range(ei)]
        # back to u: sum_m h_m (1 - L^-ai u)^m
        for m, hm in enumerate(h):
            if hm.is_zero():
                continue
            for l in range(m + 1):
                t = rho + N * l
                term = hm.shift(-ai * l) * ((-1) ** l * math.comb(m, l))
                out[t] = out[t] + term if t in out else term
    return _tp_clean(out)


def partial_fractions(F: RationalSeries) -> PartialFractions:
    """Separate ``F`` into a polynomial and single-pole parts at a common period."""
    G = common_period(F)
    N = G.period
    if not G.den or not G.num:
        return PartialFractions(dict(G.num), {}, N)
    # decreasing q = a/N
    factors = sorted(((a, e) for (a, _), e in G.den.items()), key=lambda ae: -ae[0])
    full = {0: ONE}
    for a, e in factors:
        full = _tp_mul(full, _factor_tp(a, N, e))
    poly, rem = _tp_divmod(G.num, full)
    parts: dict[Fraction, PolePart] = {}
    if rem:
        for i, (ai, ei) in enumerate(factors):
            f = _local_part(rem, ai, ei, factors[:i] + factors[i + 1:], N)
            if f:
                parts[Fraction(ai, N)] = PolePart(f, ei, N)
    return PartialFractions(poly, parts, N)


class PoleSet:
    """Map from pole locations ``q`` to orders, with an exactness flag per pole."""

    def __init__(self, orders: Mapping[Fraction, int] | None = None, exact: Mapping[Fraction, bool] | None = None):
        self.orders: dict[Fraction, int] = {}
        self.exact: dict[Fraction, bool] = {}
        for q, o in (orders or {}).items():
            q = Fraction(q)
            if o < 1:
                raise InvalidArgumentError(f"pole orders must be positive, got {o} at {q}")
            self.orders[q] = int(o)
            self.exact[q] = bool((exact or {}).get(q, True))

    def locations(self) -> set[Fraction]:
        return set(self.orders)

    def __contains__(self, q):
        return Fraction(q) in self.orders

    def __iter__(self):
        return iter(sorted(self.orders))

    def __len__(self):
        return len(self.orders)

    def order(self, q) -> int:
        return self.orders[Fraction(q)]

    def items(self):
        return sorted(self.orders.items())

    def __eq__(self, other):
        if isinstance(other, PoleSet):
            return self.orders == other.orders
        if isinstance(other, Mapping):
            return self.orders == {Fraction(k): v for k, v in other.items()}
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return "PoleSet({" + ", ".join(f"{q}: {o}" for q, o in self.items()) + "})"


def _strip_part(q: Fraction, part: PolePart):
    """Cancel full factors ``(1 - L^{-qN} T^N)`` from the numerator."""
    a, N = part.factor(q)
    fac = _factor_tp(a, N)
    num, order = part.num, part.order
    while order and num:
        quo, rem = _tp_divmod(num, fac)
        if rem:
            break
        num, order = quo, order - 1
    if not num:
        order = 0
    return num, order


def _certified_exact(q: Fraction, num, N: int) -> bool:
    """No factor ``(1 - L^{-qN'} T^{N'})`` divides ``num`` for ``N' <= 4N``."""
    deg = _tp_deg(num)
    step = q.denominator
    for Np in range(step, EXACTNESS_SEARCH_FACTOR * N + 1, step):
        if Np > deg:
            break
        if not _tp_divmod(num, _factor_tp(int(q * Np), Np))[1]:
            return False
    return True


def _poles_of(pf: PartialFractions) -> PoleSet:
    orders, exact = {}, {}
    for q, part in pf.parts.items():
        num, order = _strip_part(q, part)
        if order:
            orders[q] = order
            exact[q] = _certified_exact(q, num, part.period)
    return PoleSet(orders, exact)


def poles(F: RationalSeries) -> PoleSet:
    """Poles of ``F`` in the localized (separated-form) sense, with orders."""
    return _poles_of(partial_fractions(F))


# --------------------------------------------------------------------------
# Reconstruction-based operations
# --------------------------------------------------------------------------


def _reconstruct(coeffs: Sequence[GrothClass], den: Mapping[tuple[int, int], int], bound: int) -> RationalSeries:
    """Numerator ``(C * D) mod T^{bound+1}``, verifying the rest of the window vanishes."""
    common, seq = _common_den(coeffs)
    _multiply_by_factors(seq, den)
    num: dict[int, GrothClass] = {}
    for m, acc in enumerate(seq):
        if acc.is_zero():
            continue
        if m > bound:
            raise ReconstructionError(
                f"reconstruction residual is non-zero at T^{m} (numerator bound {bound})"
            )
        num[m] = GrothClass(acc, common)
    return RationalSeries(num, den)


def _pole_data(F: RationalSeries):
    pf = partial_fractions(F)
    return pf, _poles_of(pf)


def _window(poly_degree: int, den) -> tuple[int, int]:
    dd = _den_degree(den)
    bound = max(poly_degree + dd, dd - 1)
    return bound, bound + dd + GUARD_TERMS


def hadamard(F: RationalSeries, G: RationalSeries) -> RationalSeries:
    """Coefficientwise product ``sum A_m B_m T^m``."""
    if F.is_zero() or G.is_zero():
        return RationalSeries()
    pfF, PF = _pole_data(F)
    pfG, PG = _pole_data(G)
    N = math.lcm(pfF.period, pfG.period)
    cand: dict[Fraction, int] = {}
    for q1, o1 in PF.items():
        for q2, o2 in PG.items():
            q = q1 + q2
            cand[q] = max(cand.get(q, 0), o1 + o2 - 1)
    den = {(int(q * N), N): o for q, o in cand.items()}
    bound, M = _window(max(_tp_deg(pfF.poly), _tp_deg(pfG.poly)), den)
    A = rs_expand(F, M)
    B = rs_expand(G, M)
    return _reconstruct([x * y for x, y in zip(A, B)], den, bound)


def _sum_orders(P: PoleSet, r: int) -> dict[Fraction, int]:
    """For each r-fold sum q of poles, the maximal ``1 - r + sum ord``."""
    out: dict[Fraction, int] = {}
    for combo in combinations_with_replacement(P.items(), r):
        q = sum((c[0] for c in combo), Fraction(0))
        o = 1 - r + sum(c[1] for c in combo)
        out[q] = max(out.get(q, 0), o)
    return out


def sym_series(F: RationalSeries, r: int, tables: SymTables | None = None) -> RationalSeries:
    """Coefficientwise ``Sym^r``: ``sum Sym^r(A_m) T^m``."""
    if r < 0:
        raise InvalidArgumentError("symmetric power index must be non-negative")
    if r == 0:
        return RationalSeries.geometric()
    if r == 1:
        return F
    if F.is_zero():
        return RationalSeries()
    pf, P = _pole_data(F)
    N = pf.period
    den = {(int(q * N), N): o for q, o in _sum_orders(P, r).items()}
    bound, M = _window(_tp_deg(pf.poly), den)
    A = rs_expand(F, M)
    return _reconstruct([sym(a, r, tables) if not a.is_zero() else ZERO for a in A], den, bound)


def base_change(F: RationalSeries, l: int) -> RationalSeries:
    """The series ``sum A_{lm} T^m``; poles scale by ``l``."""
    if l < 1:
        raise InvalidArgumentError("base-change degree must be positive")
    if l == 1 or F.is_zero():
        return F
    pf, P = _pole_data(F)
    N = pf.period // math.gcd(pf.period, l)
    den = {(int(l * q * N), N): o for q, o in P.items()}
    pdeg = _tp_deg(pf.poly)
    bound, M = _window(pdeg // l if pdeg >= 0 else -1, den)
    A = rs_expand(F, l * M)
    return _reconstruct(A[:: l], den, bound)


def quotient_series(
    F: RationalSeries,
    table: Iterable[tuple[object, object]] | Mapping,
    default_identity: bool = False,
) -> RationalSeries:
    """Apply a quotient table to the numerator coefficients of the separated form."""
    pairs = list(table.items()) if isinstance(table, Mapping) else list(table)
    pairs = [(gc(k), gc(v)) for k, v in pairs]

    def apply(c: GrothClass) -> GrothClass:
        for k, v in pairs:
            if k == c:
                return v
        if default_identity:
            return c
        raise MissingQuotientError(f"no quotient declared for coefficient {c}")

    pf = partial_fractions(F)
    out = RationalSeries({t: apply(c) for t, c in pf.poly.items()})
    for q, part in sorted(pf.parts.items()):
        mapped = PolePart({t: apply(c) for t, c in part.num.items()}, part.order, part.period)
        out = rs_add(out, mapped.to_series(q))
    return out
