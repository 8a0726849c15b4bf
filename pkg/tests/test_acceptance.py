"""Acceptance criteria 1-9.

Each criterion prints one ``CRITERION k: PASS|FAIL`` line (also under pytest's
output capture) and then asserts.  Run directly with ``python3 tests/test_acceptance.py``
for the summary alone.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from helpers import (  # noqa: E402
    euler_product_coeffs,
    numeric_expand,
    numeric_series,
    partition_sum_coeffs,
    rand_class,
    rand_poly_class,
    rand_series,
)
from mzeta.coeff_ring import GrothClass, specialize_L, to_completed  # noqa: E402
from mzeta.hilbert_zeta import IntegralSequence, explint_coeff, goettsche_coeff, hilb_class, hilb_zeta  # noqa: E402
from mzeta.monodromy import check_hilb_monodromy, check_monodromy, product_zeta, sumset  # noqa: E402
from mzeta.power_structure import sym, sym_completed  # noqa: E402
from mzeta.rational_series import (  # noqa: E402
    RationalSeries,
    base_change,
    hadamard,
    partial_fractions,
    poles,
    rs_expand,
    sym_series,
)

L = GrothClass.L
one_minus = GrothClass.inv_one_minus_L_power
PRECISION = 80


def _same(xs, ys) -> bool:
    return len(xs) == len(ys) and all(x == y for x, y in zip(xs, ys))


# -- criteria -------------------------------------------------------------------


def criterion_1():
    rng = random.Random(101)
    start = time.perf_counter()
    checks = bad = 0
    for _ in range(200):
        x = rand_class(rng, -3, 3, 5, 2, 3)
        cx = to_completed(x, PRECISION)
        for r in range(5):
            got = sym_completed(cx, r)
            checks += 1
            if not to_completed(sym(x, r), PRECISION).agrees_with(got, got.precision):
                bad += 1
    elapsed = time.perf_counter() - start
    return bad == 0 and elapsed <= 30, f"{checks} checks, {bad} mismatches, {elapsed:.1f}s (limit 30s)"


def criterion_2():
    rng = random.Random(202)
    bad = 0
    for _ in range(100):
        U, V = rand_poly_class(rng, 0, 4), rand_poly_class(rng, 0, 4)
        if sym(U - V, 2) != sym(U, 2) - sym(V, 2) + V * V - U * V:
            bad += 1
    closed = 0
    for n in (1, 2, 3):
        for _ in range(20):
            U = rand_poly_class(rng, 0, 4)
            alpha = U * one_minus(n)
            lhs = sym(alpha, 2)
            rhs = sym(U, 2) * one_minus(2 * n) + L(n) * U * U * one_minus(n) * one_minus(2 * n)
            oracle = sym_completed(to_completed(alpha, PRECISION), 2)
            closed += 1
            if lhs != rhs or not to_completed(rhs, PRECISION).agrees_with(oracle, oracle.precision):
                bad += 1
    return bad == 0, f"100 difference identities + {closed} closed-form checks, {bad} failures"


def criterion_3():
    rng = random.Random(303)
    bad = 0
    for _ in range(100):
        F = rand_series(rng, 3, 3, 4)
        if not _same(partial_fractions(F).expand(200), rs_expand(F, 200)):
            bad += 1
    return bad == 0, f"100 series, 200 terms each, {bad} mismatches"


def _order_bound_ok(P, bounds) -> bool:
    return all(q in bounds and o <= bounds[q] for q, o in P.items())


def criterion_4():
    rng = random.Random(404)
    violations = {"hadamard": 0, "sym single pole": 0, "sym sumset": 0, "base change": 0}
    for _ in range(100):
        F, G = rand_series(rng, 3, 3), rand_series(rng, 3, 3)
        PF, PG = poles(F), poles(G)
        bounds: dict[Fraction, int] = {}
        for q1, o1 in PF.items():
            for q2, o2 in PG.items():
                bounds[q1 + q2] = max(bounds.get(q1 + q2, 0), o1 + o2 - 1)
        if not _order_bound_ok(poles(hadamard(F, G)), bounds):
            violations["hadamard"] += 1
    for _ in range(100):
        N = rng.randint(1, 3)
        q = Fraction(rng.randint(-2 * N, 4 * N), N)
        e, h, r = rng.randint(1, 3), rng.randint(0, N - 1), rng.randint(2, 3)
        F = RationalSeries({h: rand_class(rng, -2, 2, 4, 1, 2)}, {(int(q * N), N): e})
        if not _order_bound_ok(poles(sym_series(F, r)), {r * q: r * (e - 1) + 1}):
            violations["sym single pole"] += 1
    for _ in range(100):
        F = rand_series(rng, 3, 2, 3)
        r = rng.randint(2, 3)
        if not poles(sym_series(F, r)).locations() <= sumset(poles(F).locations(), r):
            violations["sym sumset"] += 1
    for _ in range(100):
        F, l = rand_series(rng, 3, 3), rng.randint(2, 5)
        if not poles(base_change(F, l)).locations() <= {l * q for q in poles(F).locations()}:
            violations["base change"] += 1
    total = sum(violations.values())
    return total == 0, ", ".join(f"{k}: {v} violations / 100" for k, v in violations.items())


def criterion_5():
    rng = random.Random(505)
    start = time.perf_counter()
    bad = 0
    for _ in range(100):
        I = IntegralSequence([rand_class(rng, -2, 3, 5, 1, 3) for _ in range(5)])
        for n in range(1, 6):
            if explint_coeff(I, n) != goettsche_coeff(I, n):
                bad += 1
    for _ in range(50):
        s = rand_class(rng, -2, 3, 5, 1, 3)
        if hilb_class(s, 2) != sym(s, 2) + L(1) * s:
            bad += 1
    elapsed = time.perf_counter() - start
    return bad == 0 and elapsed <= 60, f"500 coefficient pairs + 50 class checks, {bad} failures, {elapsed:.1f}s (limit 60s)"


def criterion_6():
    rng = random.Random(606)
    bad = checked = 0
    for _ in range(25):
        Z = rand_series(rng, 2, 2, 3)
        for n in (1, 2, 3):
            checked += 1
            if not _same(rs_expand(hilb_zeta(Z, n), 60), partition_sum_coeffs(Z, n, 60)):
                bad += 1
    return bad == 0, f"{checked} (Z, n) pairs, 61 coefficients each, {bad} mismatches"


def criterion_7():
    rng = random.Random(707)
    contained = equal = 0
    trials = 25
    for _ in range(trials):
        while True:
            (a1, b1), (a2, b2) = [(rng.randint(-2, 8), rng.randint(1, 3)) for _ in range(2)]
            q1, q2 = Fraction(a1, b1), Fraction(a2, b2)
            if q1 != q2:
                break
        Z = RationalSeries(
            {t: rand_class(rng, -2, 3, 9, 0) for t in range(rng.randint(1, 3))}, {(a1, b1): 1}
        ) + RationalSeries({t: rand_class(rng, -2, 3, 9, 0) for t in range(rng.randint(1, 3))}, {(a2, b2): 1})
        if poles(Z).locations() != {q1, q2}:
            continue
        expected = {2 * q1, q1 + q2, 2 * q2}
        found = poles(hilb_zeta(Z, 2)).locations()
        contained += found <= expected
        equal += found == expected
    ok = contained == trials
    return ok, f"{contained}/{trials} contained in {{2q1, q1+q2, 2q2}}; equality observed in {equal}/{trials}"


def criterion_8():
    rng = random.Random(808)
    hilb_fail = prod_fail = 0
    for _ in range(50):
        Z = rand_series(rng, 2, 2, 3)
        E = {q % 1 for q in poles(Z).locations()}
        for n in (1, 2, 3):
            rep = check_hilb_monodromy(Z, E, n)
            if not (rep.overall and rep.contained):
                hilb_fail += 1
    for _ in range(50):
        Y, Zz = rand_series(rng, 2, 2, 3), rand_series(rng, 2, 2, 3)
        PY, PZ = poles(Y).locations(), poles(Zz).locations()
        E = {(p + q) % 1 for p in PY for q in PZ}
        P = product_zeta(Y, Zz)
        if not (check_monodromy(P, E).overall and poles(P).locations() <= {p + q for p in PY for q in PZ}):
            prod_fail += 1
    return hilb_fail + prod_fail == 0, f"Hilb^n (n<=3): {hilb_fail} failures / 150; products: {prod_fail} failures / 50"


def _at_L2(coeffs, v=2):
    return [specialize_L(c, v) for c in coeffs]


def _numeric_sym2(c: GrothClass) -> Fraction:
    # Sym^2 x = (x^2 + psi^2 x)/2 with psi^2: L -> L^2, evaluated at L = 2
    return (specialize_L(c, 2) ** 2 + specialize_L(c, 4)) / 2


def criterion_9():
    rng = random.Random(909)
    M = 40
    bad = []
    for i in range(50):
        F, G = rand_series(rng, 3, 2), rand_series(rng, 3, 2)
        nF = numeric_expand(*numeric_series(F, 2), M * 3)
        nG = numeric_expand(*numeric_series(G, 2), M)
        if _at_L2(rs_expand(F, M * 3)) != nF:
            bad.append(f"expand#{i}")
        if _at_L2(rs_expand(hadamard(F, G), M)) != [x * y for x, y in zip(nF, nG)]:
            bad.append(f"hadamard#{i}")
        if _at_L2(rs_expand(base_change(F, 3), M)) != nF[::3][: M + 1]:
            bad.append(f"basechange#{i}")
        pf = partial_fractions(F)
        total = numeric_expand({t: specialize_L(c, 2) for t, c in pf.poly.items()}, [], M)
        for q, part in pf.parts.items():
            piece = numeric_expand(*numeric_series(part.to_series(q), 2), M)
            total = [x + y for x, y in zip(total, piece)]
        if total != nF[: M + 1]:
            bad.append(f"pf#{i}")
        if _at_L2(rs_expand(sym_series(F, 2), M)) != [_numeric_sym2(c) for c in rs_expand(F, M)]:
            bad.append(f"sym2#{i}")
    s = L(2) + L(1) + 1
    euler = euler_product_coeffs(3, 4)
    for n in range(5):
        if specialize_L(hilb_class(s, n), 1) != euler[n]:
            bad.append(f"euler n={n}")
    detail = "expand/hadamard/base_change/partial_fractions/sym2 on 50 inputs at L=2 + Euler check n<=4"
    return not bad, detail + (f"; failures: {bad[:5]}" if bad else "; all equal")


CRITERIA = [
    (1, "Sym oracle equivalence", criterion_1),
    (2, "worked Sym^2 examples", criterion_2),
    (3, "partial-fraction roundtrip", criterion_3),
    (4, "pole bounds", criterion_4),
    (5, "Goettsche identity", criterion_5),
    (6, "Hilbert zeta brute force", criterion_6),
    (7, "three-pole structure", criterion_7),
    (8, "monodromy property", criterion_8),
    (9, "numeric cross-check", criterion_9),
]


def _run(k, title, fn):
    ok, detail = fn()
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} [{title}] {detail}"
    return ok, line


def _check(capsys, k):
    _, title, fn = CRITERIA[k - 1]
    ok, line = _run(k, title, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def test_criterion_1(capsys):
    _check(capsys, 1)


def test_criterion_2(capsys):
    _check(capsys, 2)


def test_criterion_3(capsys):
    _check(capsys, 3)


def test_criterion_4(capsys):
    _check(capsys, 4)


def test_criterion_5(capsys):
    _check(capsys, 5)


def test_criterion_6(capsys):
    _check(capsys, 6)


def test_criterion_7(capsys):
    _check(capsys, 7)


def test_criterion_8(capsys):
    _check(capsys, 8)


def test_criterion_9(capsys):
    _check(capsys, 9)


if __name__ == "__main__":
    results = [_run(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
