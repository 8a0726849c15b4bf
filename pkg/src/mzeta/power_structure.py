"""Power structure ``F(t)^X`` and symmetric powers on the coefficient ring.

``Sym^r(x)`` is the coefficient of ``t^r`` in ``(1 - t)^(-x)``.  On Laurent
polynomials in ``L`` this is the product ``prod_a (1 - L^a t)^(-c_a)``; on
localized classes one denominator factor is peeled at a time using

    Sym^r(b) = (L^{nr} - 1)^{-1} * sum_{i=1..r} Sym^i(a) Sym^{r-i}(b),
    where b = a / (L^n - 1),

which follows from ``Sym^r(L^n b) = L^{nr} Sym^r(b)`` and ``L^n b = a + b``.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from mzeta.coeff_ring import (
    ONE,
    ZERO,
    CompletedClass,
    GrothClass,
    LaurentPoly,
    ext_binomial,
    gc,
    gens_key,
    gens_key_str,
)
from mzeta.errors import InvalidArgumentError, MissingSymTableError

__all__ = [
    "TruncSeries",
    "SymTables",
    "sigma_series",
    "sym",
    "power_series",
    "sym_completed",
]


class TruncSeries:
    """Power series in an auxiliary variable ``t`` known up to ``t^order``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        if not coeffs:
            raise ValueError("a truncated series needs at least the constant term")
        self.coeffs = list(coeffs)

    @classmethod
    def one(cls, order: int, zero=ZERO, one=ONE) -> "TruncSeries":
        return cls([one] + [zero] * order)

    @classmethod
    def geometric(cls, ratio, order: int) -> "TruncSeries":
        """``(1 - ratio*t)^(-1)`` truncated."""
        ratio = gc(ratio)
        out = [ONE]
        for _ in range(order):
            out.append(out[-1] * ratio)
        return cls(out)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise ValueError(f"series is only known to t^{self.order}")
        return TruncSeries(self.coeffs[: order + 1])

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        d = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for j in range(d + 1):
            acc = a[0] * b[j]
            for i in range(1, j + 1):
                if not _is_zero(a[i]) and not _is_zero(b[j - i]):
                    acc = acc + a[i] * b[j - i]
            out.append(acc)
        return TruncSeries(out)

    def inverse(self) -> "TruncSeries":
        """Multiplicative inverse; requires constant term 1."""
        if not self.coeffs[0] == 1:
            raise InvalidArgumentError("only series with constant term 1 are inverted")
        a = self.coeffs
        inv = [a[0]]
        for j in range(1, len(a)):
            acc = ZERO if isinstance(a[0], GrothClass) else a[0] * 0
            for i in range(1, j + 1):
                if not _is_zero(a[i]):
                    acc = acc + a[i] * inv[j - i]
            inv.append(-acc)
        return TruncSeries(inv)

    def __pow__(self, n: int) -> "TruncSeries":
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncSeries.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def substitute(self, n: int, order: int | None = None) -> "TruncSeries":
        """``F(t^n)``, truncated at ``t^order`` (default: the largest known order)."""
        if n < 1:
            raise ValueError("substitution exponent must be positive")
        known = n * (self.order + 1) - 1
        order = known if order is None else order
        if order > known:
            raise ValueError(f"F(t^{n}) is only known to t^{known}")
        zero = self.coeffs[0] * 0
        out = [zero] * (order + 1)
        for k, c in enumerate(self.coeffs):
            if n * k > order:
                break
            out[n * k] = c
        return TruncSeries(out)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries) or len(self) != len(other):
            return NotImplemented
        return all(x == y for x, y in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def __repr__(self):
        return "TruncSeries([" + ", ".join(str(c) for c in self.coeffs) + "])"


def _is_zero(c) -> bool:
    if isinstance(c, GrothClass):
        return c.num.is_zero()
    if isinstance(c, CompletedClass):
        return not c.terms
    return c == 0


class SymTables:
    """Declared symmetric powers of opaque generator monomials.

    Keys are monomial strings such as ``"U"``, ``"U^2"`` or ``"U*V"``; each
    value lists ``Sym^1, Sym^2, ..., Sym^R`` of that monomial.
    """

    def __init__(self, tables: Mapping[str, Sequence] | None = None):
        self._tables: dict[tuple, list[GrothClass]] = {}
        for key, values in (tables or {}).items():
            self._tables[self.parse_key(key)] = [gc(v) for v in values]

    @staticmethod
    def parse_key(key: str) -> tuple:
        gens = {}
        for factor in key.split("*"):
            factor = factor.strip()
            name, _, exp = factor.partition("^")
            gens[name] = gens.get(name, 0) + (int(exp) if exp else 1)
        return gens_key(gens)

    def items(self):
        return ((gens_key_str(k), v) for k, v in sorted(self._tables.items()))

    def series(self, key: tuple, d: int) -> TruncSeries:
        """``(1 - t)^(-m)`` for the generator monomial ``m`` with this key."""
        values = self._tables.get(key)
        name = gens_key_str(key)
        if values is None:
            raise MissingSymTableError(f"no symmetric-power table declared for monomial {name!r}")
        if len(values) < d:
            raise MissingSymTableError(f"table for {name!r} stops at Sym^{len(values)}, Sym^{d} required")
        return TruncSeries([ONE] + values[:d])

    def __bool__(self):
        return bool(self._tables)


def _sigma_product(lp: LaurentPoly, d: int) -> list[LaurentPoly]:
    """``prod_a (1 - L^a t)^(-c_a)`` for a generator-free ``lp = sum c_a L^a``."""
    zero = LaurentPoly.from_int(0)
    res = [LaurentPoly.from_int(1)] + [zero] * d
    for mono, c in lp.terms().items():
        a = mono.l_exp
        factor = [(ext_binomial(c, k), a * k) for k in range(d + 1)]
        new = []
        for j in range(d + 1):
            acc = res[j]
            for k in range(1, j + 1):
                coef, sh = factor[k]
                if coef and not res[j - k].is_zero():
                    acc = acc + res[j - k].scale_shift(coef, sh)
            new.append(acc)
        res = new
    return res


def _sigma_newton(lp: LaurentPoly, d: int) -> list[LaurentPoly]:
    """Same product, through ``k h_k = sum_i psi^i(x) h_{k-i}`` with ``psi^i: L -> L^i``.

    Taking the logarithmic derivative of the product gives the power sums
    ``sum_a c_a L^{ia}``, so each step is a handful of polynomial products
    instead of one pass per monomial.
    """
    h = [LaurentPoly.from_int(1)]
    p = [None] + [lp.psi(i) for i in range(1, d + 1)]
    for k in range(1, d + 1):
        acc = LaurentPoly.from_int(0)
        for i in range(1, k + 1):
            if not h[k - i].is_zero():
                acc = acc + p[i] * h[k - i]
        h.append(acc.divexact_int(k) if k > 1 else acc)
    return h


def _sigma_laurent(num: LaurentPoly, d: int, tables: SymTables | None) -> list[GrothClass]:
    blocks = num.gens_blocks()
    lp = blocks.pop((), None)
    res = _sigma_newton(lp, d) if lp is not None else [LaurentPoly.from_int(1)] + [LaurentPoly.from_int(0)] * d
    out = [GrothClass(x) for x in res]
    if not blocks:
        return out
    series = TruncSeries(out)
    for key, block in sorted(blocks.items()):
        if tables is None:
            raise MissingSymTableError(f"no symmetric-power table declared for monomial {gens_key_str(key)!r}")
        base = tables.series(key, d)
        # Sym^k(L^a m) = L^{ak} Sym^k(m); then raise to the integer multiplicity c
        for mono, c in block.terms().items():
            twisted = TruncSeries([v.shift(mono.l_exp * k) for k, v in enumerate(base)])
            series = series * (twisted ** c)
    return series.coeffs


def sigma_series(x, d: int, tables: SymTables | None = None) -> TruncSeries:
    """``(1 - t)^(-x)`` truncated at ``t^d``."""
    if d < 0:
        raise InvalidArgumentError("truncation order must be non-negative")
    x = gc(x)
    if x.is_zero():
        return TruncSeries.one(d)
    if not x.den:
        return TruncSeries(_sigma_laurent(x.num, d, tables))
    # peel one copy of the factor with the largest r
    n, e = x.den[-1]
    rest = x.den[:-1] + (((n, e - 1),) if e > 1 else ())
    alpha = GrothClass(x.num, rest)
    s_alpha = sigma_series(alpha, d, tables).coeffs
    s_beta = [ONE]
    for r in range(1, d + 1):
        acc = ZERO
        for i in range(1, r + 1):
            if not s_alpha[i].is_zero() and not s_beta[r - i].is_zero():
                acc = acc + s_alpha[i] * s_beta[r - i]
        s_beta.append(acc.div_cyclotomic(n * r) if not acc.is_zero() else ZERO)
    return TruncSeries(s_beta)


def sym(x, r: int, tables: SymTables | None = None) -> GrothClass:
    """``Sym^r(x)`` in the localized ring."""
    if r < 0:
        raise InvalidArgumentError("symmetric power index must be non-negative")
    if r == 0:
        return ONE
    x = gc(x)
    if r == 1:
        return x
    return sigma_series(x, r, tables)[r]


def power_series(base: TruncSeries, x, d: int, tables: SymTables | None = None) -> TruncSeries:
    """``base(t)^x`` truncated at ``t^d``.

    ``base`` is factored greedily as ``prod_k (1 - t^k)^(-b_k)``; the result is
    ``prod_k (1 - t^k)^(-b_k x)``, each factor obtained from :func:`sigma_series`
    and the substitution ``t -> t^k``.
    """
    if d < 0:
        raise InvalidArgumentError("truncation order must be non-negative")
    if not base[0] == 1:
        raise InvalidArgumentError("the base series must have constant term 1")
    if base.order < d:
        raise InvalidArgumentError(f"base series is only known to t^{base.order}")
    x = gc(x)
    rest = TruncSeries([gc(c) for c in base.coeffs[: d + 1]])
    exponents = []
    for k in range(1, d + 1):
        b = rest[k]
        exponents.append(b)
        if not b.is_zero():
            rest = rest * sigma_series(-b, d // k, tables).substitute(k, d)
    result = TruncSeries.one(d)
    for k, b in enumerate(exponents, start=1):
        if not b.is_zero():
            result = result * sigma_series(b * x, d // k, tables).substitute(k, d)
    return result


def sym_completed(x: CompletedClass, r: int) -> CompletedClass:
    """``Sym^r`` of a truncated ``L^{-1}``-series via the monomial product formula.

    Precision of the result is ``x.precision - (r-1) * d+``.
    """
    if r < 0:
        raise InvalidArgumentError("symmetric power index must be non-negative")
    if r == 0:
        return CompletedClass({0: 1}, x.precision)
    if r == 1:
        return x
    top = x.top()
    prec = x.precision - (r - 1) * top
    cut = -prec - r * top
    res: list[dict[int, int]] = [{0: 1}] + [{} for _ in range(r)]
    for a, c in sorted(x.terms.items()):
        new = []
        for j in range(r + 1):
            acc = dict(res[j])
            for k in range(1, j + 1):
                coef = ext_binomial(c, k)
                if not coef:
                    continue
                sh = a * k
                for e, v in res[j - k].items():
                    ee = e + sh
                    if ee > cut:
                        acc[ee] = acc.get(ee, 0) + coef * v
            new.append({e: v for e, v in acc.items() if v})
        res = new
    return CompletedClass(res[r], prec)
