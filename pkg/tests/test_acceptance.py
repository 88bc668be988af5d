"""Acceptance criteria 1-14, one recorded pass/fail line per criterion.

Lines are printed and echoed in the terminal summary (see conftest.py).
Criterion 11 is split in two lines because its halves have different outcomes.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from divisum import precision
from divisum.identities import verify
from divisum.numtheory import build_tables, divisors, euler_phi, gcd_sum, weighted_mobius_invert
from divisum.seriescore import (CoeffSeq, TruncationPolicy, lambert_sum, mobius_transform,
                                prop3_pair, record_depths, taylor_eval, weighted_product)
from divisum.specialfn import rrcf, rrcf_product, theta2, theta3, theta4
from divisum.specs import parse_coeff

from .conftest import ACCEPTANCE_LINES

_START = time.perf_counter()


def record(label, ok, detail):
    line = f"criterion {label}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def run_grid(ident, points, err="rel", tol=None):
    """verify each point; return (all passed, worst error, reports)."""
    reps = [verify(ident, p, tol=tol) for p in points]
    worst = max(getattr(r, f"{err}_err") for r in reps)
    return all(r.status == "pass" for r in reps), worst, reps


def test_criterion_01_theorem1():
    worst, slowest, ok = 0.0, 0.0, True
    for f in ("poly:1", "poly:0,1", "poly:1,0,1"):
        for a, b in ((1, 2), (0.5, 3)):
            t0 = time.perf_counter()
            r = verify("THM1", {"f": f, "a": a, "b": b}, tol=1e-10)
            slowest = max(slowest, time.perf_counter() - t0)
            worst = max(worst, r.rel_err)
            ok &= r.status == "pass" and r.rel_err <= 1e-10
    ok &= slowest < 1.0
    assert record(1, ok, f"THM1 6 points, max rel_err {worst:.2e} <= 1e-10, slowest {slowest:.3f}s < 1s")


def test_criterion_02_random_polynomials():
    rng = random.Random(20240601)
    worst, ok = 0.0, True
    for _ in range(100):
        deg = rng.randint(1, 6)
        coeffs = [Fraction(rng.randint(-20, 20), rng.randint(1, 10)) for _ in range(deg)]
        f = "poly:" + ",".join(map(str, coeffs))
        for ident in ("PROP1", "PROP2"):
            for x in (0.5, 1, 2):
                r = verify(ident, {"f": f, "x": x}, tol=1e-10)
                worst = max(worst, r.abs_err)
                ok &= r.status == "pass"
    assert record(2, ok, f"PROP1/PROP2 100 random polynomials x 3 x, max abs_err {worst:.2e} <= 1e-10")


def _fd_oracle(A, v, x):
    """Central differences of the v = 0 series, at 50 digits."""
    with precision("high") as B:
        h = B.ctx.mpf("1e-12")
        xb = B.num(x)
        S = lambda y: lambert_sum(mobius_transform(A), -1, y, TruncationPolicy(1e-40))
        if v == 1:
            return (S(xb + h) - S(xb - h)) / (2 * h)
        return (S(xb + h) - 2 * S(xb) + S(xb - h)) / h**2


def test_criterion_03_prop3():
    worst_abs, worst_fd, ok = 0.0, 0.0, True
    for spec in ("delta", "id", "phi"):
        A = parse_coeff(spec)
        for v in (1, 2):
            for x in (0.7, 1.3):
                r = verify("PROP3", {"A": spec, "v": v, "x": x}, tol=1e-9)
                worst_abs = max(worst_abs, r.abs_err)
                ok &= r.status == "pass"
                lhs, _ = prop3_pair(A, v, x)
                fd = _fd_oracle(A, v, x)
                rel = abs(lhs - float(fd)) / abs(float(fd))
                worst_fd = max(worst_fd, rel)
                ok &= rel <= 1e-6
    assert record(3, ok, f"PROP3 12 points, max abs_err {worst_abs:.2e} <= 1e-9; "
                         f"finite-difference max rel_err {worst_fd:.2e} <= 1e-6")


def test_criterion_04_prop45_lemma7():
    configs = [
        ("PROP4", {"X": "mu", "f": "id", "g": "delta", "x": 1}),
        ("PROP4", {"X": "phi", "f": "one", "g": "id", "x": 1}),
        ("PROP4", {"X": "mu", "f": "poly:0", "g": "delta", "x": 1}),
        ("PROP5", {"X": "mu", "f": "id", "g": "delta", "x": 1}),
        ("PROP5", {"X": "phi", "f": "one", "g": "id", "x": 1}),
        ("PROP5", {"X": "mu", "f": "poly:0", "g": "delta", "x": 1}),
        ("LEMMA7", {"X": "delta", "x": 1}),
        ("LEMMA7", {"X": "phi", "x": 1}),
        ("LEMMA7", {"X": "poly:0", "x": 1}),
    ]
    reps = [verify(i, p, tol=1e-9) for i, p in configs]
    ok = all(r.status == "pass" for r in reps)
    ok &= abs(reps[0].lhs - 0.9206735942077923) < 1e-9 and abs(reps[6].lhs - 1 / (math.e + 1)) < 1e-9
    worst = max(r.abs_err for r in reps)
    assert record(4, ok, f"PROP4/PROP5/LEMMA7 9 configurations, max abs_err {worst:.2e} <= 1e-9")


def test_criterion_05_gcd_weighted_sums():
    pts = [{"f": f"power:{s}", "x": x} for s in (2, 3) for x in (0.5, 1)]
    ok, worst = True, 0.0
    for ident in ("EQ10", "EQ13B", "EQ12"):
        good, w, _ = run_grid(ident, pts, tol=1e-8)
        ok &= good
        worst = max(worst, w)
    assert record(5, ok, f"EQ10/EQ13B/EQ12 12 points, max rel_err {worst:.2e} <= 1e-8")


def test_criterion_06_zeta_reproduction():
    ok, lines = True, []
    for s, target in ((2, 1.6449340668), (4, 1.0823232337)):
        good, worst, reps = run_grid("EQ11", [{"s": s, "x": x} for x in (0.5, 1, 2)], tol=1e-8)
        spread = max(r.lhs for r in reps) - min(r.lhs for r in reps)
        ok &= good and spread < 1e-8 and abs(reps[0].lhs - target) < 1e-10
        lines.append(f"zeta({s}) max rel_err {worst:.2e}, x-spread {spread:.2e}")
    assert record(6, ok, "EQ11 " + "; ".join(lines))


def test_criterion_07_products():
    ok, worst = True, 0.0
    for q in (0.1, 0.2, 0.4):
        for t in (0.1, 0.3):
            for ident, p in (("THETA_PRODUCT", {"q": q, "t": t}), ("THM2_1", {"f": f"cos:{t}", "q": q})):
                r = verify(ident, p, tol=1e-8)
                ok &= r.status == "pass"
                worst = max(worst, r.rel_err)
        r = verify("THM2_1", {"f": "id", "q": q}, tol=1e-8)
        ok &= r.status == "pass"
        worst = max(worst, r.rel_err)
    assert record(7, ok, f"THM2_1/THETA_PRODUCT 15 points, max rel_err {worst:.2e} <= 1e-8")


def test_criterion_08_self_reciprocal():
    pts = [{"a": a, "x": x} for a in ("1", "sqrt(2*pi)", "3") for x in (0.5, 1, 2)]
    ok2, w2, _ = run_grid("THM2_2", pts, tol=1e-8)
    ok3, w3, _ = run_grid("THM2_3", pts, tol=1e-8)
    assert record(8, ok2 and ok3, f"THM2_2/THM2_3 (Gaussian, ab = 2 pi) 18 points, "
                                  f"max rel_err {max(w2, w3):.2e} <= 1e-8")


def test_criterion_09_mellin_closed_forms():
    ok, worst, slowest = True, 0.0, 0.0
    for s in (2.5, 3, 4):
        pts = [("MELLIN_EX1", {"s": s})]
        pts += [(i, {"X": X, "s": s}) for i in ("MELLIN_PROP21", "MELLIN_EX2")
                for X in ("one", "alt", "x2:5,1,2")]
        for ident, p in pts:
            t0 = time.perf_counter()
            r = verify(ident, p, tol=1e-5)
            slowest = max(slowest, time.perf_counter() - t0)
            ok &= r.status == "pass"
            worst = max(worst, r.rel_err)
    ok &= slowest < 10
    assert record(9, ok, f"Mellin 21 points, max rel_err {worst:.2e} <= 1e-5, slowest {slowest:.2f}s < 10s")


def test_criterion_10_theta_quotients_and_rrcf():
    xs = (0.5, 1, 2)
    ok, worst, _ = run_grid("THM2_4", [{"p": p, "a": a, "b": b, "x": x}
                                       for p, a, b in ((5, 1, 2), (7, 1, 2), (7, 1, 3)) for x in xs], tol=1e-8)
    ok5, w5, _ = run_grid("RRCF_EX3", [{"x": x} for x in xs], tol=1e-8)
    cf = max(abs(rrcf(q, 2000) - rrcf_product(q)) for q in (0.01, 0.3, 0.5))
    good = ok and ok5 and cf <= 1e-10
    assert record(10, good, f"THM2_4 9 points + RRCF_EX3 3 points, max rel_err {max(worst, w5):.2e} <= 1e-8; "
                            f"fraction vs product {cf:.2e} <= 1e-10")


def test_criterion_11a_example4():
    ok, worst, _ = run_grid("MELLIN_EX4", [{"s": s} for s in (1.1, 1.5, 1.9, 2.5, 3)], tol=1e-5)
    assert record("11a", ok, f"MELLIN_EX4 s in {{1.1,1.5,1.9,2.5,3}}, max rel_err {worst:.2e} <= 1e-5")


@pytest.mark.xfail(strict=True, reason="displayed closed form is a factor 4 too small; see notes in report")
def test_criterion_11b_theta_quotient_transform():
    pts = [{"p": p, "a": a, "b": b, "s": s} for p, a, b in ((5, 1, 2), (7, 1, 2), (7, 1, 3)) for s in (1, 1.5)]
    ok, worst, reps = run_grid("THM2_5", pts, tol=1e-5)
    ratios = [r.lhs / r.rhs for r in reps]
    record("11b", ok, f"THM2_5 6 points, max rel_err {worst:.2e} > 1e-5; lhs/rhs in "
                      f"[{min(ratios):.12f}, {max(ratios):.12f}] (displayed constant off by 4)")
    assert ok


def test_criterion_12_jtp_alt():
    pts = []
    for a in (1, 1.5):
        lim = 0.4 * a * math.pi  # 2|t| < 0.8 a pi
        pts += [{"a": a, "t": t} for t in (0, 0.3, -0.7, 0.99 * lim, -0.99 * lim)]
    ok, worst, _ = run_grid("JTP_ALT", pts, err="abs", tol=1e-10)
    assert record(12, ok, f"JTP_ALT 10 points, max abs_err {worst:.2e} <= 1e-10")


def _depth_doubling():
    """Each truncated evaluation vs the explicit partial sum to twice its depth."""
    tol = 1e-10
    pol = TruncationPolicy(tol)
    worst = 0.0
    for spec in ("phi", "mu", "id", "one", "power:2"):
        c = parse_coeff(spec)
        for sign in (-1, 1):
            for x in (0.1, 0.5, 2.0):
                with record_depths() as log:
                    v = lambert_sum(c, sign, x, pol)
                N = log["series"]
                den = (lambda n: math.expm1(n * x)) if sign < 0 else (lambda n: math.exp(n * x) + 1)
                twice = math.fsum(float(c(n)) / den(n) for n in range(1, 2 * N + 1))
                worst = max(worst, abs(v - twice) / tol)
    for spec in ("invfact", "phi", "exp:0.1"):
        c = parse_coeff(spec)
        for q in (0.2, 0.9):
            with record_depths() as log:
                v = taylor_eval(c, q, pol)
            N = log["series"]
            twice = math.fsum(float(c(n)) * q**n for n in range(1, 2 * N + 1))
            worst = max(worst, abs(v - twice) / tol)
    for spec in ("one", "id", "mu"):
        w = parse_coeff(spec)
        for sign in (-1, 1):
            for q in (0.3, 0.8):
                with record_depths() as log:
                    v = weighted_product(q, w, sign, pol)
                N = log["product"]
                twice = math.exp(math.fsum(float(w(n)) * math.log1p(sign * q**n) for n in range(1, 2 * N + 1)))
                worst = max(worst, abs(v - twice) / tol)
    for q in (0.1, 0.5, 0.9):
        worst = max(worst, abs(theta4(0.3, q, tol) - theta4(0.3, q, tol * tol)) / tol)
    return worst


def test_criterion_13_properties():
    rng = random.Random(13)
    # Moebius round trip on 500 random integer sequences
    round_trip = True
    for _ in range(500):
        n_max = rng.randint(1, 60)
        vals = [rng.randint(-10**9, 10**9) for _ in range(n_max)]
        X = [weighted_mobius_invert(lambda d: vals[d - 1], n) for n in range(1, n_max + 1)]
        round_trip &= all(sum(d * X[d - 1] for d in divisors(n)) == vals[n - 1] for n in range(1, n_max + 1))
    # gcd-sum equals the phi convolution for n <= 2000
    table = [rng.randint(-100, 100) for _ in range(2001)]
    f = lambda m: table[m]
    gcd_ok = all(gcd_sum(f, n) == sum(euler_phi(d) * f(n // d) for d in divisors(n)) for n in range(1, 2001))
    # divisor laws for n <= 1e5
    N = 100_000
    t = build_tables(N)
    mu_sum = np.zeros(N + 1, dtype=np.int64)
    phi_sum = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, N + 1):
        mu_sum[d::d] += int(t.mu[d])
        phi_sum[d::d] += int(t.phi[d])
    laws = mu_sum[1] == 1 and not mu_sum[2:].any() and np.array_equal(phi_sum[1:], np.arange(1, N + 1))
    # quartic theta identity
    quartic = max(abs(theta3(q) ** 4 - theta2(q) ** 4 - theta4(0, q) ** 4) for q in (0.1, math.exp(-math.pi), 0.7))
    doubling = _depth_doubling()
    ok = round_trip and gcd_ok and laws and quartic <= 1e-10 and doubling < 2
    assert record(13, ok, f"round trip 500/500 {round_trip}; gcd-sum n<=2000 {gcd_ok}; "
                          f"divisor laws n<=1e5 {bool(laws)}; theta quartic {quartic:.1e}; "
                          f"depth doubling max change {doubling:.2f} tol < 2 tol")


def test_criterion_14_runtime():
    # runs last in this module: elapsed time covers criteria 1-13
    elapsed = time.perf_counter() - _START
    assert record(14, elapsed < 300, f"acceptance suite {elapsed:.1f}s < 300s at standard precision")
