import random
from fractions import Fraction

import pytest

from helpers import numeric_expand, numeric_series, rand_class, rand_series
from mzeta.coeff_ring import ONE, ZERO, GrothClass, specialize_L
from mzeta.errors import InvalidArgumentError, MissingQuotientError
from mzeta.power_structure import sym
from mzeta.rational_series import (
    RationalSeries,
    base_change,
    common_period,
    hadamard,
    partial_fractions,
    poles,
    quotient_series,
    rs_add,
    rs_eq,
    rs_expand,
    rs_mul,
    sym_series,
)

L = GrothClass.L
one_minus = GrothClass.inv_one_minus_L_power


def geo(a, b=1, e=1, coeff=ONE, shift=0):
    return RationalSeries.single_pole(coeff, a, b, e, shift)


def coeffs_equal(xs, ys):
    return len(xs) == len(ys) and all(x == y for x, y in zip(xs, ys))


def test_expand_examples():
    assert coeffs_equal(rs_expand(geo(0), 3), [ONE] * 4)
    assert coeffs_equal(rs_expand(geo(1), 2), [ONE, L(-1), L(-2)])
    assert coeffs_equal(rs_expand(geo(1, e=2), 2), [ONE, L(-1, 2), L(-2, 3)])
    assert coeffs_equal(rs_expand(RationalSeries(), 2), [ZERO] * 3)
    with pytest.raises(InvalidArgumentError):
        rs_expand(geo(0), -1)


def test_common_period_examples():
    F = RationalSeries({0: ONE}, {(1, 1): 1, (1, 2): 1})
    G = common_period(F)
    assert G.den == {(2, 2): 1, (1, 2): 1}
    assert G.num[0] == ONE and G.num[1] == L(-1) and len(G.num) == 2
    assert rs_eq(F, G)
    assert common_period(geo(3, 2)).den == {(3, 2): 1}
    assert common_period(RationalSeries({0: ONE})).den == {}


def test_partial_fractions_two_poles():
    F = RationalSeries({0: ONE}, {(1, 1): 1, (2, 1): 1})
    pf = partial_fractions(F)
    assert pf.poly == {}
    assert set(pf.parts) == {Fraction(1), Fraction(2)}
    assert pf.parts[Fraction(2)].num[0] == one_minus(1)
    assert pf.parts[Fraction(1)].num[0] == -L(1) * one_minus(1)
    assert rs_eq(pf.to_series(), F)


def test_partial_fractions_single_and_polynomial_part():
    pf = partial_fractions(geo(1))
    assert pf.poly == {} and pf.parts[Fraction(1)].num[0] == ONE
    pf = partial_fractions(RationalSeries({2: ONE}, {(0, 1): 1}))
    assert pf.poly[0] == -ONE and pf.parts.keys() == {Fraction(0)}
    assert pf.poly[1] == -ONE and pf.parts[Fraction(0)].num == {0: ONE}


def test_poles_examples():
    assert poles(geo(1)) == {Fraction(1): 1}
    F = RationalSeries({0: ONE, 2: -L(-2)}, {(1, 1): 2})
    assert poles(F) == {Fraction(1): 1}
    assert poles(RationalSeries({0: ONE}, {(0, 1): 1, (1, 1): 1})) == {Fraction(0): 1, Fraction(1): 1}
    assert len(poles(RationalSeries({0: L(2), 3: ONE}))) == 0


def test_poles_cancel_against_full_period_factor():
    # (1 + L^-1 T)/(1 - L^-2 T^2) = 1/(1 - L^-1 T)
    F = RationalSeries({0: ONE, 1: L(-1)}, {(2, 2): 1})
    P = poles(F)
    assert P == {Fraction(1): 1}
    # 1/(1 + L^-1 T) = (1 - L^-1 T)/(1 - L^-2 T^2) keeps its pole at 1
    G = RationalSeries({0: ONE, 1: -L(-1)}, {(2, 2): 1})
    assert poles(G) == {Fraction(1): 1}


def test_exact_flag():
    P = poles(RationalSeries({0: ONE, 1: L(-1)}, {(1, 1): 1}))
    assert P.order(1) == 1 and P.exact[Fraction(1)]
    # (1 - L^-1 T)/(1 - L^-2 T^2): the numerator is divisible by the period-1 factor,
    # so the order at q = 1 is only certified as an upper bound
    P = poles(RationalSeries({0: ONE, 1: -L(-1)}, {(2, 2): 1}))
    assert P.order(1) == 1 and not P.exact[Fraction(1)]


def test_hadamard_examples():
    G = RationalSeries({0: L(1) + 1, 1: L(-1)}, {(1, 1): 1, (3, 2): 2})
    assert rs_eq(hadamard(geo(0), G), G)
    assert rs_eq(hadamard(geo(1), geo(1)), geo(2))
    H = hadamard(geo(1, e=2), geo(1))
    assert poles(H).order(2) <= 2
    assert coeffs_equal(rs_expand(H, 30), [x * y for x, y in zip(rs_expand(geo(1, e=2), 30), rs_expand(geo(1), 30))])


def test_sym_series_examples():
    F = RationalSeries({0: L(1) + 1, 1: L(-1)}, {(1, 1): 1, (3, 2): 1})
    assert sym_series(F, 1) is F
    assert rs_eq(sym_series(F, 0), geo(0))
    alpha = L(2) - 3
    h, N, qN = 2, 3, 2
    S = sym_series(RationalSeries({h: alpha}, {(qN, N): 1}), 2)
    P = poles(S)
    assert set(P.locations()) <= {Fraction(2 * qN, N)} and all(o <= 1 for _, o in P.items())
    A = rs_expand(RationalSeries({h: alpha}, {(qN, N): 1}), 200)
    assert coeffs_equal(rs_expand(S, 200), [sym(a, 2) for a in A])
    # coefficientwise Sym keeps the T-support of F, so the numerator lives on T^h residues
    assert S.num and all(t % N == h % N for t in S.num)


def test_base_change_examples():
    F = RationalSeries({0: L(1) + 1, 1: L(-1)}, {(1, 1): 1, (3, 2): 1})
    assert base_change(F, 1) is F
    assert rs_eq(base_change(geo(1), 2), geo(2))
    assert base_change(RationalSeries({1: ONE}, {(0, 2): 1}), 2).is_zero()
    with pytest.raises(InvalidArgumentError):
        base_change(F, 0)


def test_quotient_series_examples():
    alpha, beta = L(1) + 1, L(3)
    F = RationalSeries({0: alpha}, {(1, 1): 1})
    assert rs_eq(quotient_series(F, [(alpha, alpha)]), F)
    assert rs_eq(quotient_series(F, [(alpha, beta)]), RationalSeries({0: beta}, {(1, 1): 1}))
    G = F + RationalSeries({0: ONE}, {(2, 1): 1})
    # alpha sits in the part at q = 1 after separation; send it to 0
    pf = partial_fractions(G)
    table = [(pf.parts[Fraction(1)].num[0], ZERO), (pf.parts[Fraction(2)].num[0], ONE)]
    assert poles(quotient_series(G, table)) == {Fraction(2): 1}
    with pytest.raises(MissingQuotientError):
        quotient_series(F, [])
    assert rs_eq(quotient_series(F, [], default_identity=True), F)


def test_field_operations():
    F = RationalSeries({0: L(1), 2: ONE}, {(1, 1): 1})
    assert rs_eq(rs_add(F, RationalSeries()), F)
    one_minus_T = RationalSeries({0: ONE, 1: -ONE})
    assert rs_eq(rs_mul(one_minus_T, geo(0)), RationalSeries({0: ONE}))
    assert rs_eq(F - F, RationalSeries())
    G = geo(2, 3)
    assert coeffs_equal(rs_expand(F * G, 20), [
        sum((a * b for a, b in zip(rs_expand(F, m), reversed(rs_expand(G, m)))), ZERO) for m in range(21)
    ])


def test_roundtrip_partial_fractions_random():
    rng = random.Random(2024)
    for _ in range(20):
        F = rand_series(rng)
        pf = partial_fractions(F)
        assert coeffs_equal(pf.expand(200), rs_expand(F, 200))
        assert rs_eq(pf.to_series(), F)


def test_hadamard_and_sym_soundness_random():
    rng = random.Random(99)
    for _ in range(10):
        F, G = rand_series(rng, 2, 2), rand_series(rng, 2, 2)
        A, B = rs_expand(F, 100), rs_expand(G, 100)
        assert coeffs_equal(rs_expand(hadamard(F, G), 100), [x * y for x, y in zip(A, B)])
        r = rng.randint(2, 3)
        assert coeffs_equal(rs_expand(sym_series(F, r), 60), [sym(a, r) for a in A[:61]])
        l = rng.randint(2, 4)
        Al = rs_expand(F, 50 * l)
        assert coeffs_equal(rs_expand(base_change(F, l), 50), Al[::l])


def test_numeric_expansion_matches_specialization():
    rng = random.Random(5)
    for _ in range(10):
        F = rand_series(rng)
        num, den = numeric_series(F, 2)
        assert numeric_expand(num, den, 40) == [specialize_L(c, 2) for c in rs_expand(F, 40)]


def test_series_with_class_denominators():
    rng = random.Random(8)
    c = rand_class(rng)
    F = RationalSeries({0: c, 1: c * c}, {(1, 1): 2, (0, 2): 1})
    assert rs_eq(partial_fractions(F).to_series(), F)
