"""Random generators and independent oracles shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from mzeta.coeff_ring import GrothClass, LaurentPoly, specialize_L
from mzeta.hilbert_zeta import partitions
from mzeta.power_structure import sym
from mzeta.rational_series import RationalSeries, rs_expand


def rand_laurent(rng: random.Random, lo=-3, hi=3, cmax=5, terms=3, gens=()) -> LaurentPoly:
    out = {}
    for _ in range(rng.randint(1, terms)):
        key = ()
        if gens and rng.random() < 0.5:
            key = ((rng.choice(gens), 1),)
        mono = (rng.randint(lo, hi), key)
        out[mono] = out.get(mono, 0) + rng.choice([c for c in range(-cmax, cmax + 1) if c])
    return LaurentPoly.from_terms(out.items())


def rand_poly_class(rng, lo=0, hi=3, cmax=5, terms=3) -> GrothClass:
    return GrothClass(rand_laurent(rng, lo, hi, cmax, terms))


def rand_class(rng, lo=-3, hi=3, cmax=5, max_factors=2, rmax=3) -> GrothClass:
    den = [(rng.randint(1, rmax), 1) for _ in range(rng.randint(0, max_factors))]
    num = rand_laurent(rng, lo, hi, cmax)
    while num.is_zero():
        num = rand_laurent(rng, lo, hi, cmax)
    return GrothClass(num, den)


def rand_series(rng, max_poles=3, max_order=3, max_deg=4, periods=(1, 2, 3), alow=-2, ahigh=4, coeff=None) -> RationalSeries:
    coeff = coeff or (lambda: rand_class(rng, -2, 2, 4, 1, 2))
    den = {}
    for _ in range(rng.randint(1, max_poles)):
        b = rng.choice(periods)
        a = rng.randint(alow * b, ahigh * b)
        den[(a, b)] = rng.randint(1, max_order)
    num = {}
    while not num:
        for t in range(rng.randint(0, max_deg) + 1):
            if rng.random() < 0.7:
                num[t] = coeff()
    return RationalSeries(num, den)


# numeric oracle at L = v -----------------------------------------------------


def numeric_series(F: RationalSeries, v):
    """Specialize numerator and denominator factors separately."""
    v = Fraction(v)
    num = {t: specialize_L(c, v) for t, c in F.num.items()}
    den = [(v ** (-a), b, e) for (a, b), e in F.den.items()]
    return num, den


def numeric_expand(num, den, order):
    """Power-series expansion over Q by repeated multiplication with geometric series."""
    coeffs = [num.get(m, Fraction(0)) for m in range(order + 1)]
    for x, b, e in den:
        for _ in range(e):
            # multiply by 1/(1 - x T^b): c_m += x c_{m-b}
            for m in range(b, order + 1):
                coeffs[m] += x * coeffs[m - b]
    return coeffs


def partition_sum_coeffs(Z: RationalSeries, n: int, order: int, tables=None):
    """Brute-force ``sum_alpha prod_j L^{(j-1)a_j} Sym^{a_j}(A_{jm})`` on expansions."""
    A = rs_expand(Z, n * order)
    out = []
    for m in range(order + 1):
        total = GrothClass(0)
        for alpha in partitions(n):
            term = GrothClass(1)
            for j, c in alpha.alpha:
                term = term * sym(A[j * m], c, tables).shift((j - 1) * c)
            total = total + term
        out.append(total)
    return out


def euler_product_coeffs(e: int, n: int) -> list[int]:
    """Coefficients of ``prod_m (1 - q^m)^{-e}`` up to ``q^n`` by direct multiplication."""
    coeffs = [1] + [0] * n
    for m in range(1, n + 1):
        for _ in range(e):
            for k in range(m, n + 1):
                coeffs[k] += coeffs[k - m]
    return coeffs
