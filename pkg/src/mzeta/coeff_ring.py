"""Exact arithmetic for classes in the Grothendieck-ring model.

Three layers live here:

* :class:`LaurentPoly` -- integer Laurent polynomials in ``L`` with optional
  opaque generator symbols (``U``, ``V``, ...).  The L-dependence of every
  generator block is stored densely in a FLINT ``fmpz_poly`` together with a
  valuation offset, which keeps the long series expansions fast.
* :class:`GrothClass` -- a Laurent polynomial divided by a product of
  cyclotomic-type factors ``(L^r - 1)^e``.  This is the localized ring in
  which every formula of the package is evaluated.
* :class:`CompletedClass` -- a truncated Laurent series in ``L^{-1}``.  It is
  implemented with plain dictionaries and is used as an independent oracle
  for the localized arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, NamedTuple

from flint import fmpz_poly

from mzeta.errors import OpaqueClassError, SpecializePoleError

__all__ = [
    "Monomial",
    "LaurentPoly",
    "GrothClass",
    "CompletedClass",
    "L",
    "gc",
    "gc_add",
    "gc_sub",
    "gc_mul",
    "gc_eq",
    "specialize_L",
    "to_completed",
    "cc_add",
    "cc_mul",
    "gens_key",
    "gens_key_str",
    "ext_binomial",
]


def ext_binomial(c: int, k: int) -> int:
    """Coefficient of ``y^k`` in ``(1 - y)^(-c)`` for any integer ``c``."""
    if k < 0:
        return 0
    if c > 0:
        return math.comb(c + k - 1, k)
    if c == 0:
        return 1 if k == 0 else 0
    return (-1) ** k * math.comb(-c, k)


# --------------------------------------------------------------------------
# Generator keys
# --------------------------------------------------------------------------


def gens_key(gens) -> tuple:
    """Canonical hashable form of a generator-exponent map (zero exponents dropped)."""
    if not gens:
        return ()
    items = gens.items() if isinstance(gens, Mapping) else gens
    out = {}
    for name, exp in items:
        if not isinstance(name, str) or not name:
            raise ValueError(f"generator names must be non-empty strings, got {name!r}")
        exp = int(exp)
        if exp < 0:
            raise ValueError(f"generator exponents must be non-negative, got {name}^{exp}")
        if exp:
            out[name] = out.get(name, 0) + exp
    return tuple(sorted(out.items()))


def gens_key_str(key: tuple) -> str:
    """``(('U', 2), ('V', 1))`` -> ``'U^2*V'``; used as sym-table key."""
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in key)


def _merge_keys(k1: tuple, k2: tuple) -> tuple:
    if not k1:
        return k2
    if not k2:
        return k1
    d = dict(k1)
    for name, e in k2:
        d[name] = d.get(name, 0) + e
    return tuple(sorted(d.items()))


class Monomial(NamedTuple):
    """``L^l_exp`` times a product of opaque generators."""

    l_exp: int
    gens: tuple = ()


# --------------------------------------------------------------------------
# Laurent polynomials
# --------------------------------------------------------------------------


def _normalize(val: int, p: fmpz_poly):
    """Strip low zero coefficients so that ``p(0) != 0``; ``None`` for zero."""
    if p.is_zero():
        return None
    if p[0] != 0:
        return val, p
    k = 1
    while p[k] == 0:
        k += 1
    return val + k, p.right_shift(k)


def _part_add(a, b):
    va, pa = a
    vb, pb = b
    if va == vb:
        return _normalize(va, pa + pb)
    if va < vb:
        return _normalize(va, pa + pb.left_shift(vb - va))
    return _normalize(vb, pa.left_shift(va - vb) + pb)


class LaurentPoly:
    """Immutable element of ``Z[L, L^-1][gens]``.

    Internally a map ``gens-key -> (valuation, fmpz_poly)`` where the FLINT
    polynomial has a non-zero constant term.
    """

    __slots__ = ("_parts", "_hash")

    def __init__(self, parts: dict | None = None):
        self._parts = parts or {}
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def from_int(cls, c: int) -> "LaurentPoly":
        c = int(c)
        if c == 0:
            return _ZERO_LP
        return cls({(): (0, fmpz_poly([c]))})

    @classmethod
    def monomial(cls, l_exp: int = 0, coeff: int = 1, gens=()) -> "LaurentPoly":
        if coeff == 0:
            return _ZERO_LP
        return cls({gens_key(gens): (int(l_exp), fmpz_poly([int(coeff)]))})

    @classmethod
    def from_terms(cls, terms) -> "LaurentPoly":
        """Build from ``{Monomial | int | (l_exp, gens): coeff}`` or an iterable of pairs."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        blocks: dict[tuple, dict[int, int]] = {}
        for mono, c in items:
            if isinstance(mono, int):
                l_exp, key = mono, ()
            else:
                l_exp, key = int(mono[0]), gens_key(mono[1])
            blk = blocks.setdefault(key, {})
            blk[l_exp] = blk.get(l_exp, 0) + int(c)
        parts = {}
        for key, blk in blocks.items():
            blk = {e: c for e, c in blk.items() if c}
            if not blk:
                continue
            lo = min(blk)
            coeffs = [0] * (max(blk) - lo + 1)
            for e, c in blk.items():
                coeffs[e - lo] = c
            parts[key] = (lo, fmpz_poly(coeffs))
        return cls(parts)

    @classmethod
    def from_poly(cls, p: fmpz_poly, val: int = 0) -> "LaurentPoly":
        part = _normalize(val, p)
        return cls({(): part}) if part else _ZERO_LP

    # inspection ---------------------------------------------------------
    def terms(self) -> dict[Monomial, int]:
        out = {}
        for key, (val, p) in self._parts.items():
            for i, c in enumerate(p.coeffs()):
                if c:
                    out[Monomial(val + i, key)] = int(c)
        return out

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms().items(), key=lambda kv: (kv[0].gens, kv[0].l_exp))

    def is_zero(self) -> bool:
        return not self._parts

    def has_gens(self) -> bool:
        return any(self._parts)

    def gens_blocks(self) -> dict[tuple, "LaurentPoly"]:
        return {k: LaurentPoly({(): v}) for k, v in self._parts.items()}

    def l_part(self):
        """The generator-free block as ``(valuation, fmpz_poly)`` or ``None``."""
        return self._parts.get(())

    def degree(self) -> int:
        """Highest power of ``L`` (``-inf`` style sentinel: raises on zero)."""
        if not self._parts:
            raise ValueError("degree of the zero polynomial")
        return max(v + p.degree() for v, p in self._parts.values())

    def valuation(self) -> int:
        if not self._parts:
            raise ValueError("valuation of the zero polynomial")
        return min(v for v, _ in self._parts.values())

    def as_int(self):
        """The integer value if this is a constant without generators, else ``None``."""
        if not self._parts:
            return 0
        if len(self._parts) == 1 and () in self._parts:
            v, p = self._parts[()]
            if v == 0 and p.degree() == 0:
                return int(p[0])
        return None

    def as_unit_monomial(self):
        """``(sign, k)`` if this equals ``sign * L^k``, else ``None``."""
        if len(self._parts) != 1 or () not in self._parts:
            return None
        v, p = self._parts[()]
        if p.degree() == 0 and p[0] in (1, -1):
            return int(p[0]), v
        return None

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, int):
                other = LaurentPoly.from_int(other)
            else:
                return NotImplemented
        if not other._parts:
            return self
        if not self._parts:
            return other
        parts = dict(self._parts)
        for key, part in other._parts.items():
            mine = parts.get(key)
            if mine is None:
                parts[key] = part
            else:
                s = _part_add(mine, part)
                if s is None:
                    del parts[key]
                else:
                    parts[key] = s
        return LaurentPoly(parts)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: (v, -p) for k, (v, p) in self._parts.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.from_int(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return _ZERO_LP
            return LaurentPoly({k: (v, p * other) for k, (v, p) in self._parts.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self._parts or not other._parts:
            return _ZERO_LP
        if len(self._parts) == 1 and len(other._parts) == 1:
            (k1, (v1, p1)), = self._parts.items()
            (k2, (v2, p2)), = other._parts.items()
            return LaurentPoly({_merge_keys(k1, k2): (v1 + v2, p1 * p2)})
        acc: dict = {}
        for k1, (v1, p1) in self._parts.items():
            for k2, (v2, p2) in other._parts.items():
                key = _merge_keys(k1, k2)
                part = (v1 + v2, p1 * p2)
                if key in acc:
                    s = _part_add(acc[key], part)
                    if s is None:
                        del acc[key]
                    else:
                        acc[key] = s
                else:
                    acc[key] = part
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined in LaurentPoly")
        result = _ONE_LP
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``L^k``."""
        if k == 0:
            return self
        return LaurentPoly({key: (v + k, p) for key, (v, p) in self._parts.items()})

    def scale_shift(self, c: int, k: int) -> "LaurentPoly":
        """Multiply by ``c * L^k``."""
        if c == 0 or not self._parts:
            return _ZERO_LP
        if c == 1:
            return self.shift(k)
        return LaurentPoly({key: (v + k, p * c) for key, (v, p) in self._parts.items()})

    def divexact_int(self, c: int) -> "LaurentPoly":
        out = {}
        for key, (v, p) in self._parts.items():
            try:
                out[key] = (v, p / c)
            except Exception:
                raise ArithmeticError(f"not divisible by {c}") from None
        return LaurentPoly(out)

    def div_cyclotomic(self, r: int):
        """Exact quotient by ``L^r - 1`` or ``None`` when it does not divide."""
        if not self._parts:
            return self
        d = _cyclo_fmpz(r)
        out = {}
        for key, (v, p) in self._parts.items():
            # L^r - 1 vanishes at 1: a cheap necessary condition
            if p.degree() < r or p(1) != 0:
                return None
            q, rem = divmod(p, d)
            if not rem.is_zero():
                return None
            out[key] = (v, q)
        return LaurentPoly(out)

    def psi(self, k: int) -> "LaurentPoly":
        """Substitute ``L -> L^k`` (k >= 1) in a generator-free polynomial."""
        if self.has_gens():
            raise OpaqueClassError("L-substitution is undefined on opaque generators")
        part = self._parts.get(())
        if part is None:
            return _ZERO_LP
        v, p = part
        return LaurentPoly({(): (v * k, p.inflate(k))})

    def evaluate(self, v: Fraction) -> Fraction:
        if self.has_gens():
            raise OpaqueClassError("cannot specialize a class with opaque generators")
        part = self._parts.get(())
        if part is None:
            return Fraction(0)
        val, p = part
        acc = Fraction(0)
        for c in reversed(p.coeffs()):
            acc = acc * v + int(c)
        if val:
            if v == 0:
                raise SpecializePoleError("L = 0 is not admissible: L is a unit")
            acc *= v ** val
        return acc

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.from_int(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._parts == other._parts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                tuple(sorted((k, v, tuple(int(c) for c in p.coeffs())) for k, (v, p) in self._parts.items()))
            )
        return self._hash

    def __bool__(self):
        return bool(self._parts)

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self._parts:
            return "0"
        pieces = []
        for mono, c in sorted(self.terms().items(), key=lambda kv: (kv[0].gens, -kv[0].l_exp)):
            factors = [gens_key_str(mono.gens)] if mono.gens else []
            if mono.l_exp == 1:
                factors.append("L")
            elif mono.l_exp:
                factors.append(f"L^{mono.l_exp}")
            body = "*".join(factors)
            if not body:
                pieces.append(str(c))
            elif c == 1:
                pieces.append(body)
            elif c == -1:
                pieces.append("-" + body)
            else:
                pieces.append(f"{c}*{body}")
        return " + ".join(pieces).replace("+ -", "- ")


_ZERO_LP = LaurentPoly({})
_ONE_LP = LaurentPoly({(): (0, fmpz_poly([1]))})


@lru_cache(maxsize=None)
def _cyclo_fmpz(r: int) -> fmpz_poly:
    return fmpz_poly([-1] + [0] * (r - 1) + [1])


@lru_cache(maxsize=None)
def cyclo_poly(r: int) -> LaurentPoly:
    """``L^r - 1`` as a Laurent polynomial."""
    if r < 1:
        raise ValueError("cyclotomic factor index must be positive")
    return LaurentPoly({(): (0, _cyclo_fmpz(r))})


@lru_cache(maxsize=4096)
def den_poly(den: tuple) -> LaurentPoly:
    """Expand ``prod (L^r - 1)^e`` for a canonical denominator tuple."""
    acc = fmpz_poly([1])
    for r, e in den:
        acc *= _cyclo_fmpz(r) ** e
    return LaurentPoly({(): (0, acc)})


# --------------------------------------------------------------------------
# Localized classes
# --------------------------------------------------------------------------


def _canon_den(den) -> tuple:
    if not den:
        return ()
    items = den.items() if isinstance(den, Mapping) else den
    merged: dict[int, int] = {}
    for r, e in items:
        r, e = int(r), int(e)
        if r < 1 or e < 0:
            raise ValueError(f"invalid denominator factor (L^{r}-1)^{e}")
        if e:
            merged[r] = merged.get(r, 0) + e
    return tuple(sorted(merged.items()))


def _merge_max(d1: tuple, d2: tuple):
    """Common denominator with per-r maximal exponent and the two cofactors."""
    if d1 == d2:
        return d1, _ONE_LP, _ONE_LP
    m1, m2 = dict(d1), dict(d2)
    merged = {r: max(m1.get(r, 0), m2.get(r, 0)) for r in set(m1) | set(m2)}
    c1 = tuple(sorted((r, e - m1.get(r, 0)) for r, e in merged.items() if e > m1.get(r, 0)))
    c2 = tuple(sorted((r, e - m2.get(r, 0)) for r, e in merged.items() if e > m2.get(r, 0)))
    return tuple(sorted(merged.items())), den_poly(c1), den_poly(c2)


def _reduce(num: LaurentPoly, den: tuple):
    if not den:
        return num, den
    if num.is_zero():
        return num, ()
    out = []
    changed = False
    for r, e in reversed(den):
        while e:
            q = num.div_cyclotomic(r)
            if q is None:
                break
            num = q
            e -= 1
            changed = True
        if e:
            out.append((r, e))
    if not changed:
        return num, den
    return num, tuple(sorted(out))


class GrothClass:
    """Element ``num / prod (L^r - 1)^e`` of the localized Grothendieck ring.

    Fractions are kept in a best-effort reduced form: a factor ``L^r - 1`` is
    cancelled only when it divides the numerator exactly.  Equality is decided
    by cross-multiplication, so two different representations of the same
    class compare equal.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=(), *, reduce: bool = True):
        if isinstance(num, int):
            num = LaurentPoly.from_int(num)
        elif not isinstance(num, LaurentPoly):
            raise TypeError(f"numerator must be LaurentPoly or int, got {type(num).__name__}")
        den = _canon_den(den)
        if reduce:
            num, den = _reduce(num, den)
        elif num.is_zero():
            den = ()
        self.num = num
        self.den = den

    # constructors -------------------------------------------------------
    @classmethod
    def L(cls, k: int = 1, coeff: int = 1) -> "GrothClass":
        return cls(LaurentPoly.monomial(k, coeff))

    @classmethod
    def gen(cls, name: str, exp: int = 1) -> "GrothClass":
        return cls(LaurentPoly.monomial(0, 1, {name: exp}))

    @classmethod
    def from_terms(cls, terms, den=()) -> "GrothClass":
        return cls(LaurentPoly.from_terms(terms), den)

    @classmethod
    def inv_cyclotomic(cls, r: int, e: int = 1) -> "GrothClass":
        """``(L^r - 1)^(-e)``."""
        return cls(_ONE_LP, ((r, e),))

    @classmethod
    def inv_one_minus_L_power(cls, k: int) -> "GrothClass":
        """``1 / (1 - L^k)`` for ``k != 0``."""
        if k == 0:
            raise ZeroDivisionError("1 - L^0 = 0 is not invertible")
        if k > 0:
            return cls(LaurentPoly.from_int(-1), ((k, 1),))
        return cls(LaurentPoly.monomial(-k), ((-k, 1),))

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def has_gens(self) -> bool:
        return self.num.has_gens()

    def is_polynomial(self) -> bool:
        return not self.den

    def den_multiset(self) -> dict[int, int]:
        return dict(self.den)

    def as_int(self):
        if self.den:
            return None
        return self.num.as_int()

    def inverse(self) -> "GrothClass":
        """Inverse of a unit of the form ``+-L^k / prod (L^r-1)^e``."""
        unit = self.num.as_unit_monomial()
        if unit is None:
            raise ZeroDivisionError(f"{self} is not a recognised unit")
        sign, k = unit
        return GrothClass(den_poly(self.den).scale_shift(sign, -k))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return gc_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return gc_add(self, -other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return gc_add(other, -self)

    def __neg__(self):
        return GrothClass(-self.num, self.den, reduce=False)

    def __mul__(self, other):
        if isinstance(other, int):
            return GrothClass(self.num * other, self.den, reduce=False)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return gc_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int) -> "GrothClass":
        """Multiply by ``L^k`` (never changes the denominator)."""
        return GrothClass(self.num.shift(k), self.den, reduce=False)

    def div_cyclotomic(self, r: int, e: int = 1) -> "GrothClass":
        """Divide by ``(L^r - 1)^e``."""
        return GrothClass(self.num, self.den + ((r, e),))

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return gc_eq(self, other)

    __hash__ = None

    def __repr__(self):
        return f"GrothClass({self})"

    def __str__(self):
        if not self.den:
            return str(self.num)
        den = "*".join(f"(L^{r}-1)" + (f"^{e}" if e > 1 else "") for r, e in self.den)
        return f"({self.num})/({den})"


def _coerce(x):
    if isinstance(x, GrothClass):
        return x
    if isinstance(x, int):
        return GrothClass(LaurentPoly.from_int(x))
    if isinstance(x, LaurentPoly):
        return GrothClass(x)
    return None


def gc(x) -> GrothClass:
    """Coerce an int, LaurentPoly or GrothClass."""
    out = _coerce(x)
    if out is None:
        raise TypeError(f"cannot interpret {x!r} as a GrothClass")
    return out


ZERO = GrothClass(0)
ONE = GrothClass(1)
L = GrothClass.L(1)


def gc_add(a: GrothClass, b: GrothClass) -> GrothClass:
    if a.num.is_zero():
        return b
    if b.num.is_zero():
        return a
    if a.den == b.den:
        return GrothClass(a.num + b.num, a.den)
    den, ca, cb = _merge_max(a.den, b.den)
    return GrothClass(a.num * ca + b.num * cb, den)


def gc_sub(a: GrothClass, b: GrothClass) -> GrothClass:
    return gc_add(a, -b)


def gc_mul(a: GrothClass, b: GrothClass) -> GrothClass:
    if a.num.is_zero() or b.num.is_zero():
        return ZERO
    if not b.den:
        return GrothClass(a.num * b.num, a.den, reduce=bool(a.den))
    if not a.den:
        return GrothClass(a.num * b.num, b.den)
    return GrothClass(a.num * b.num, a.den + b.den)


def gc_eq(a: GrothClass, b: GrothClass) -> bool:
    if a.den == b.den:
        return a.num == b.num
    _, ca, cb = _merge_max(a.den, b.den)
    return a.num * ca == b.num * cb


def specialize_L(a: GrothClass, v) -> Fraction:
    """Evaluate a generator-free class at ``L = v`` exactly."""
    a = gc(a)
    v = Fraction(v)
    if a.has_gens():
        raise OpaqueClassError(f"cannot specialize {a}: opaque generators present")
    dval = Fraction(1)
    for r, e in a.den:
        f = v ** r - 1
        if f == 0:
            raise SpecializePoleError(f"L^{r} - 1 vanishes at L = {v}")
        dval *= f ** e
    return a.num.evaluate(v) / dval


# --------------------------------------------------------------------------
# Completed ring (oracle)
# --------------------------------------------------------------------------


class CompletedClass:
    """Truncated Laurent series in ``L^{-1}``.

    ``terms`` maps exponents of ``L`` to integers; the value is known modulo
    the span of ``L^j`` with ``j <= -precision``.
    """

    __slots__ = ("terms", "precision")

    def __init__(self, terms: Mapping[int, int] | None = None, precision: int = 0):
        self.precision = int(precision)
        cut = -self.precision
        self.terms = {int(j): int(c) for j, c in (terms or {}).items() if c and j > cut}

    def top(self) -> int:
        """``d+``: highest retained exponent, or 0 if all exponents are negative."""
        return max(0, max(self.terms)) if self.terms else 0

    def truncate(self, precision: int) -> "CompletedClass":
        return CompletedClass(self.terms, min(precision, self.precision))

    def __add__(self, other):
        if isinstance(other, int):
            other = CompletedClass({0: other}, self.precision)
        return cc_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return CompletedClass({j: -c for j, c in self.terms.items()}, self.precision)

    def __sub__(self, other):
        return cc_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CompletedClass({j: c * other for j, c in self.terms.items()}, self.precision)
        return cc_mul(self, other)

    __rmul__ = __mul__

    def agrees_with(self, other: "CompletedClass", precision: int | None = None) -> bool:
        """Equality of all terms above ``-precision`` (default: common precision)."""
        p = min(self.precision, other.precision) if precision is None else precision
        if p > min(self.precision, other.precision):
            raise ValueError("comparison window exceeds the known precision")
        cut = -p
        a = {j: c for j, c in self.terms.items() if j > cut}
        b = {j: c for j, c in other.terms.items() if j > cut}
        return a == b

    def __eq__(self, other):
        if not isinstance(other, CompletedClass):
            return NotImplemented
        return self.precision == other.precision and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"{c}*L^{j}" for j, c in sorted(self.terms.items(), reverse=True)) or "0"
        return f"CompletedClass({body} + O(L^{-self.precision}))"


def cc_add(a: CompletedClass, b: CompletedClass) -> CompletedClass:
    terms = dict(a.terms)
    for j, c in b.terms.items():
        terms[j] = terms.get(j, 0) + c
    return CompletedClass(terms, min(a.precision, b.precision))


def cc_mul(a: CompletedClass, b: CompletedClass) -> CompletedClass:
    prec = min(a.precision - b.top(), b.precision - a.top())
    cut = -prec
    terms: dict[int, int] = {}
    for i, x in a.terms.items():
        for j, y in b.terms.items():
            k = i + j
            if k > cut:
                terms[k] = terms.get(k, 0) + x * y
    return CompletedClass(terms, prec)


def _series_inv_cyclo(r: int, e: int, depth: int) -> dict[int, int]:
    """``(L^r - 1)^(-e)`` as a series in ``L^{-1}``, keeping exponents > -depth."""
    # (L^r-1)^-1 = L^-r / (1 - L^-r); raised to e this is sum_k C(k+e-1, e-1) L^{-r(k+e)}.
    out = {}
    k = 0
    while True:
        exp = -r * (k + e)
        if exp <= -depth:
            break
        out[exp] = math.comb(k + e - 1, e - 1)
        k += 1
    return out


def to_completed(a: GrothClass, precision: int) -> CompletedClass:
    """Image of ``a`` in the completed ring, exact above ``L^{-precision}``."""
    a = gc(a)
    if a.has_gens():
        raise OpaqueClassError(f"cannot embed {a} in the completed ring: opaque generators present")
    num = {m.l_exp: c for m, c in a.num.terms().items()}
    if not a.den:
        return CompletedClass(num, precision)
    top = max(num) if num else 0
    depth = precision + max(top, 0) + 1
    series = {0: 1}
    for r, e in a.den:
        factor = _series_inv_cyclo(r, e, depth)
        nxt: dict[int, int] = {}
        for i, x in series.items():
            for j, y in factor.items():
                k = i + j
                if k > -depth:
                    nxt[k] = nxt.get(k, 0) + x * y
        series = nxt
    cut = -precision
    terms: dict[int, int] = {}
    for i, x in num.items():
        for j, y in series.items():
            k = i + j
            if k > cut:
                terms[k] = terms.get(k, 0) + x * y
    return CompletedClass(terms, precision)
