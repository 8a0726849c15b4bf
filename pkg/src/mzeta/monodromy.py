"""Pole sumsets, eigenvalue exponents and the monodromy-conjecture checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable

from mzeta.errors import PremiseError
from mzeta.hilbert_zeta import hilb_zeta
from mzeta.power_structure import SymTables
from mzeta.rational_series import PoleSet, RationalSeries, hadamard, poles

__all__ = [
    "ExponentSet",
    "PoleVerdict",
    "MonodromyReport",
    "HilbMonodromyReport",
    "sumset",
    "eigen_exponents_hilb",
    "check_monodromy",
    "check_hilb_monodromy",
    "product_zeta",
]


class ExponentSet(frozenset):
    """Rationals in ``[0, 1)``; ``q`` stands for the eigenvalue ``exp(2 pi i q)``."""

    def __new__(cls, exps: Iterable = ()):
        return super().__new__(cls, (Fraction(e) % 1 for e in exps))

    def sorted(self) -> list[Fraction]:
        return sorted(self)


def sumset(P: Iterable, n: int) -> set[Fraction]:
    """All sums of ``n`` elements of ``P`` with repetition."""
    if n < 1:
        raise ValueError("n must be positive")
    pts = sorted({Fraction(p) for p in P})
    return {sum(c, Fraction(0)) for c in combinations_with_replacement(pts, n)}


def eigen_exponents_hilb(E: Iterable, n: int) -> ExponentSet:
    """Union over ``m <= n`` of the ``m``-fold sumsets of ``E``, mod 1."""
    if n < 1:
        raise ValueError("n must be positive")
    out: set[Fraction] = set()
    for m in range(1, n + 1):
        out |= {q % 1 for q in sumset(E, m)}
    return ExponentSet(out)


@dataclass
class PoleVerdict:
    q: Fraction
    order: int
    exact: bool
    witnessed: bool


@dataclass
class MonodromyReport:
    verdicts: list[PoleVerdict]
    exponents: ExponentSet

    @property
    def overall(self) -> bool:
        return all(v.witnessed for v in self.verdicts)


@dataclass
class HilbMonodromyReport(MonodromyReport):
    n: int = 1
    expected_poles: set[Fraction] = field(default_factory=set)
    contained: bool = True
    hilb_poles: PoleSet | None = None

    @property
    def equality_observed(self) -> bool:
        """Whether every sum of ``n`` poles actually occurs as a pole."""
        return {v.q for v in self.verdicts} == self.expected_poles

    @property
    def overall(self) -> bool:
        return self.contained and all(v.witnessed for v in self.verdicts)


def _verdicts(P: PoleSet, E: ExponentSet) -> list[PoleVerdict]:
    return [PoleVerdict(q, o, P.exact[q], (q % 1) in E) for q, o in P.items()]


def check_monodromy(Z: RationalSeries, E: Iterable) -> MonodromyReport:
    """Each pole ``q`` of ``Z`` must have ``q mod 1`` in ``E``."""
    E = E if isinstance(E, ExponentSet) else ExponentSet(E)
    return MonodromyReport(_verdicts(poles(Z), E), E)


def check_hilb_monodromy(
    Z_X: RationalSeries, E_X: Iterable, n: int, tables: SymTables | None = None
) -> HilbMonodromyReport:
    """Check the conjecture for ``Hilb^n`` given that it holds for the surface."""
    E_X = E_X if isinstance(E_X, ExponentSet) else ExponentSet(E_X)
    P_X = poles(Z_X)
    base = MonodromyReport(_verdicts(P_X, E_X), E_X)
    if not base.overall:
        bad = ", ".join(str(v.q) for v in base.verdicts if not v.witnessed)
        raise PremiseError(f"the surface zeta function fails the check at poles {bad}")
    if n == 1:
        return HilbMonodromyReport(base.verdicts, E_X, 1, set(P_X.locations()), True, P_X)
    Z_H = hilb_zeta(Z_X, n, tables)
    P_H = poles(Z_H)
    E_n = eigen_exponents_hilb(E_X, n)
    expected = sumset(P_X.locations(), n)
    return HilbMonodromyReport(
        _verdicts(P_H, E_n), E_n, n, expected, P_H.locations() <= expected, P_H
    )


def product_zeta(Z_Y: RationalSeries, Z_Z: RationalSeries) -> RationalSeries:
    """Zeta function of a product: the Hadamard product of the factors."""
    return hadamard(Z_Y, Z_Z)
