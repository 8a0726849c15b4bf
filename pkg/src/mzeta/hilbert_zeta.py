"""Partition sums for Hilbert schemes of points and the motivic-integral bookkeeping."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from mzeta.coeff_ring import ONE, ZERO, GrothClass, gc
from mzeta.errors import InvalidArgumentError, NotDivisibleError, SequenceTooShortError
from mzeta.power_structure import SymTables, TruncSeries, power_series, sym
from mzeta.rational_series import RationalSeries, base_change, hadamard, rs_add, sym_series

__all__ = [
    "Partition",
    "ModelData",
    "IntegralSequence",
    "partitions",
    "hilb_zeta",
    "hilb_zeta_terms",
    "goettsche_coeff",
    "explint_coeff",
    "hilb_class",
    "motivic_integral",
    "n_tilde",
    "conductor_hilb",
    "ord_weak_neron",
    "ord_hilb_point",
]


@dataclass(frozen=True)
class Partition:
    """Exponent vector: ``alpha[j]`` is the number of parts equal to ``j``."""

    alpha: tuple[tuple[int, int], ...]

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "Partition":
        items = []
        for j, c in sorted(counts.items()):
            if j < 1 or c < 0:
                raise InvalidArgumentError(f"invalid partition entry {j}^{c}")
            if c:
                items.append((int(j), int(c)))
        return cls(tuple(items))

    @property
    def n(self) -> int:
        return sum(j * c for j, c in self.alpha)

    def count(self, j: int) -> int:
        return dict(self.alpha).get(j, 0)

    def counts(self) -> dict[int, int]:
        return dict(self.alpha)

    def __str__(self):
        if not self.alpha:
            return "()"
        return "(" + ",".join(f"{j}^{c}" for j, c in self.alpha) + ")"


def partitions(n: int) -> list[Partition]:
    """All partitions of ``n``; ordered by ``(alpha_1, alpha_2, ...)`` descending."""
    if n < 0:
        raise InvalidArgumentError("n must be non-negative")
    out: list[Partition] = []

    def rec(j: int, left: int, acc: dict[int, int]):
        if left == 0:
            out.append(Partition.from_counts(acc))
            return
        if j > left:
            return
        for c in range(left // j, -1, -1):
            if c:
                acc[j] = c
            rec(j + 1, left - j * c, acc)
            acc.pop(j, None)

    rec(1, n, {})
    return out


def _max_workers() -> int:
    raw = os.environ.get("MZETA_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise InvalidArgumentError(f"MZETA_THREADS must be an integer, got {raw!r}")
    return 1


def _partition_term(Z: RationalSeries, alpha: Partition, tables: SymTables | None) -> RationalSeries:
    term = None
    twist = 0
    for j, c in alpha.alpha:
        twist += (j - 1) * c
        factor = sym_series(base_change(Z, j), c, tables)
        term = factor if term is None else hadamard(term, factor)
    return term * GrothClass.L(twist)


def hilb_zeta_terms(Z: RationalSeries, n: int, tables: SymTables | None = None) -> list[tuple[Partition, RationalSeries]]:
    """The summands of :func:`hilb_zeta`, one per partition of ``n``."""
    if n < 1:
        raise InvalidArgumentError("n must be at least 1")
    parts = partitions(n)
    workers = min(_max_workers(), len(parts))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            terms = list(pool.map(lambda a: _partition_term(Z, a, tables), parts))
    else:
        terms = [_partition_term(Z, a, tables) for a in parts]
    return list(zip(parts, terms))


def hilb_zeta(Z: RationalSeries, n: int, tables: SymTables | None = None) -> RationalSeries:
    """Zeta function of ``Hilb^n`` from the zeta function ``Z`` of the surface.

    The coefficient of ``T^m`` is ``sum_alpha prod_j L^{(j-1)alpha_j} Sym^{alpha_j}(A_{jm})``
    where ``A_k`` are the coefficients of ``Z``; products over ``j`` are taken
    coefficientwise.
    """
    out = RationalSeries()
    for _, term in hilb_zeta_terms(Z, n, tables):
        out = rs_add(out, term)
    return out


class IntegralSequence:
    """Values ``I_1, ..., I_M``; indexing is 1-based and never zero-filled."""

    def __init__(self, values: Iterable):
        self.values = [gc(v) for v in values]

    def __len__(self):
        return len(self.values)

    def __getitem__(self, m: int) -> GrothClass:
        if m < 1:
            raise InvalidArgumentError("integrals are indexed from 1")
        if m > len(self.values):
            raise SequenceTooShortError(f"integral I_{m} requested, only {len(self.values)} given")
        return self.values[m - 1]

    def require(self, n: int):
        if len(self.values) < n:
            raise SequenceTooShortError(f"coefficient {n} needs {n} integrals, only {len(self.values)} given")


def _as_seq(I) -> IntegralSequence:
    return I if isinstance(I, IntegralSequence) else IntegralSequence(I)


def goettsche_coeff(I, n: int, tables: SymTables | None = None) -> GrothClass:
    """Coefficient of ``q^n`` in ``prod_m (1 - L^{m-1} q^m)^(-I_m)``."""
    I = _as_seq(I)
    if n < 0:
        raise InvalidArgumentError("n must be non-negative")
    I.require(n)
    result = TruncSeries.one(n)
    for m in range(1, n + 1):
        d = n // m
        base = TruncSeries.geometric(GrothClass.L(m - 1), d)
        result = result * power_series(base, I[m], d, tables).substitute(m, n)
    return result[n]


def explint_coeff(I, n: int, tables: SymTables | None = None) -> GrothClass:
    """``sum_{alpha |- n} prod_j L^{(j-1)alpha_j} Sym^{alpha_j}(I_j)``."""
    I = _as_seq(I)
    if n < 0:
        raise InvalidArgumentError("n must be non-negative")
    I.require(n)
    total = ZERO
    for alpha in partitions(n):
        term = ONE
        for j, c in alpha.alpha:
            term = term * sym(I[j], c, tables).shift((j - 1) * c)
        total = total + term
    return total


def hilb_class(s, n: int, tables: SymTables | None = None) -> GrothClass:
    """Class of ``Hilb^n`` of a surface of class ``s``."""
    if n < 0:
        raise InvalidArgumentError("n must be non-negative")
    return explint_coeff([s] * n, n, tables)


@dataclass
class ModelData:
    """Components ``(class, ord)`` of the special fibre of a weak Neron model."""

    components: list[tuple[GrothClass, int]]

    def __post_init__(self):
        self.components = [(gc(c), int(o)) for c, o in self.components]


def motivic_integral(model: ModelData | Sequence[tuple[object, int]]) -> GrothClass:
    """``sum_C [C] L^{-ord_C}``."""
    comps = model.components if isinstance(model, ModelData) else ModelData(list(model)).components
    total = ZERO
    for cls, o in comps:
        total = total + cls.shift(-o)
    return total


def n_tilde(a: int, n: int) -> int:
    if a < 1 or n < 1:
        raise InvalidArgumentError("a and n must be positive")
    return a * math.lcm(*range(1, n + 1))


def conductor_hilb(n_tilde: int, alpha: Partition) -> int:
    return n_tilde * sum((j - 1) * c for j, c in alpha.alpha)


def ord_weak_neron(ord_prime: int, c: int, d: int) -> int:
    """Order on the original model from the order after a degree-``d`` extension with conductor ``c``."""
    if d < 1:
        raise InvalidArgumentError("extension degree must be positive")
    q, r = divmod(ord_prime - c, d)
    if r:
        raise NotDivisibleError(f"{ord_prime} - {c} is not divisible by {d}")
    return q


def ord_hilb_point(alpha: Partition, ords: Mapping[int, int]) -> int:
    """``sum_j ((j-1) alpha_j + ord_j)`` over the parts present in ``alpha``."""
    total = 0
    for j, c in alpha.alpha:
        if j not in ords:
            raise InvalidArgumentError(f"no order given for j = {j}")
        total += (j - 1) * c + int(ords[j])
    return total
