"""Numerical Mellin transforms on (0, inf) and the matching closed forms.

The transform is split at t = 1.  On (0, 1] the substitution t = e^{-u}
absorbs the t^{s-1} endpoint behaviour; [1, inf) is truncated where the
declared exponential decay makes the remainder negligible.  Known power
singularities c t^{-beta} at the origin may be subtracted on (0, 1] and
added back as c / (s - beta), which also continues the transform to s
below the raw convergence abscissa.

Lattice sums sum_n X(n) g(n x) with periodic X are needed for x -> 0 where
direct summation is hopeless; they are evaluated per residue class with
Euler-Maclaurin summation, which is scale invariant in x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from ._backend import backend
from .errors import DomainError, SaturationError
from .numtheory import PeriodicChar, constant_character, x2_character
from .quadrature import integrate
from .seriescore import bernoulli_even, choose_depth, dirichlet_series, lambert_derivative_poly, note_depth
from .specialfn import gamma, log_theta_quotient, periodic_L, theta2, theta3, zeta

__all__ = [
    "MellinIntegrand", "MellinResult", "mellin_transform", "csch2_lattice", "log1mexp_lattice",
    "csch2_series_integrand", "log_theta_quotient_integrand", "example4_integrand",
    "prop21_rhs", "thm25_rhs", "thm25_rhs_corrected", "example4_rhs", "example4_pair",
]


# -- lattice sums ----------------------------------------------------------------

def _csch2_deriv_polys(kmax: int) -> list[list[int]]:
    """Coefficient lists in c = coth(y) of d^k/dy^k csch(y)^2, k = 0..kmax."""
    polys = [[-1, 0, 1]]
    for _ in range(kmax):
        p = polys[-1]
        d = [j * p[j] for j in range(1, len(p))]  # P'(c), coefficient of c^{j-1}
        nxt = [0] * (len(d) + 2)
        for j, cj in enumerate(d):  # times (1 - c^2)
            nxt[j] += cj
            nxt[j + 2] -= cj
        polys.append(nxt)
    return polys


_EM_TERMS = 60
_CSCH2_POLYS = _csch2_deriv_polys(2 * _EM_TERMS)
_W_POLYS = [lambert_derivative_poly(k) for k in range(2 * _EM_TERMS)]


def _em_params():
    B = backend()
    if B.name == "standard":
        return 10, 0.25
    return 30, 0.25


def _scaled_poly(coeffs, z, h, k):
    """sum_j coeffs[j] * (h*var)^j * h^{k-j}, given z = h*var."""
    B = backend()
    out = B.num(0)
    for j, cj in enumerate(coeffs):
        if cj:
            out += cj * z**j * h ** (k - j)
    return out


def _em_corrections(X: PeriodicChar, h, ys, scaled_deriv, ref) -> object:
    """- sum_i B_{2i}/(2i)! h^{2i-1} g^{(2i-1)}(y) summed over residues, to resolution."""
    B = backend()
    total = B.num(0)
    scale = B.num(0)
    for i in range(1, _EM_TERMS + 1):
        k = 2 * i - 1
        bc = B.num(bernoulli_even(i)) / math.factorial(2 * i)
        t = -bc * B.fsum(B.num(xr) * scaled_deriv(k, y) for xr, y in ys)
        total += t
        scale = max(scale, abs(t), abs(ref))
        if i >= 3 and abs(t) <= B.eps * 1e-3 * max(scale, B.tiny):
            return total, i
    raise SaturationError("Euler-Maclaurin corrections did not settle", partial=total)


def csch2_lattice(X: PeriodicChar, x):
    """sum_{n>=1} X(n) / sinh(n x)^2 for periodic X and any x > 0."""
    if not x > 0:
        raise DomainError("x must be > 0")
    B = backend()
    xb = B.num(x)
    p = X.period
    J, hmax = _em_params()
    h = p * xb
    if h > hmax:
        xmax = max(abs(float(v)) for v in X.values)
        # csch^2 y <= 4 e^{-2y} / (1 - e^{-2x})^2 for y >= x
        C = 4 * xmax / (-math.expm1(-2 * float(x))) ** 2
        N, _ = choose_depth(C, 0.0, 2 * float(x), B.eps * 1e-3, 10**7)
        note_depth("series", N)
        return B.fsum(B.num(X(n)) / B.sinh(n * xb) ** 2 for n in range(1, N + 1) if X(n))
    head = B.num(0)
    ys = []
    integ = B.num(0)
    for r, xr in X.residue_values():
        if not xr:
            continue
        xr_b = B.num(xr)
        head += xr_b * B.fsum(1 / B.sinh((j * p + r) * xb) ** 2 for j in range(J))
        y = (J * p + r) * xb
        ys.append((xr, y))
        # (1/h) * int_y^inf csch^2 = (coth y - 1)/h ; plus G(J)/2
        integ += xr_b * (2 / B.expm1(2 * y) / h + 1 / B.sinh(y) ** 2 / 2)

    def scaled_deriv(k, y):
        z = h / B.tanh(y)
        return _scaled_poly(_CSCH2_POLYS[k], z, h, k)
    corr, m = _em_corrections(X, h, ys, scaled_deriv, head + integ)
    note_depth("series", J * p + 2 * m)
    return head + integ + corr


def _log1mexp(y):
    B = backend()
    return B.log(-B.expm1(-y))


def _head_integral_log1mexp(y):
    """int_0^y log(1 - e^{-t}) dt = Li_2(e^{-y}) - pi^2/6.

    Series about 0 for y <= 2 (no cancellation against the constant, which
    matters once the result is divided by a small step), dilogarithm beyond.
    """
    B = backend()
    if y <= 2:
        total = y * B.log(y) - y - y * y / 4
        y2 = y * y
        yp = y**3
        for k in range(1, 200):
            t = B.num(bernoulli_even(k)) * yp / (2 * k * (2 * k + 1) * math.factorial(2 * k))
            total += t
            if abs(t) <= B.eps * 1e-3 * (1 + abs(total)):
                break
            yp *= y2
        return total
    e = B.exp(-y)
    total = B.num(0)
    ek = e
    for k in range(1, 10_000):
        t = ek / (k * k)
        total += t
        if t <= B.eps * 1e-3 * total:
            break
        ek *= e
    return total - B.pi**2 / 6


def log1mexp_lattice(X: PeriodicChar, x):
    """sum_{n>=1} X(n) log(1 - e^{-n x}) for periodic X with zero period sum."""
    if not x > 0:
        raise DomainError("x must be > 0")
    if not X.mean_zero:
        raise DomainError("log1mexp_lattice needs a mean-zero periodic sequence")
    B = backend()
    xb = B.num(x)
    p = X.period
    J, hmax = _em_params()
    h = p * xb
    if h > hmax:
        xmax = max(abs(float(v)) for v in X.values)
        C = xmax / -math.expm1(-float(x))
        N, _ = choose_depth(C, 0.0, float(x), B.eps * 1e-3, 10**7)
        note_depth("series", N)
        return B.fsum(B.num(X(n)) * _log1mexp(n * xb) for n in range(1, N + 1) if X(n))
    head = B.num(0)
    ys = []
    integ = B.num(0)
    for r, xr in X.residue_values():
        if not xr:
            continue
        xr_b = B.num(xr)
        head += xr_b * B.fsum(_log1mexp((j * p + r) * xb) for j in range(J))
        y = (J * p + r) * xb
        ys.append((xr, y))
        # mean-zero X: (1/h) sum_r X(r) int_y^inf g = -(1/h) sum_r X(r) int_0^y g
        integ += xr_b * (-_head_integral_log1mexp(y) / h + _log1mexp(y) / 2)

    def scaled_deriv(k, y):
        # g^{(k)} = P_{k-1}(w), w = 1/(e^y - 1)
        z = h / B.expm1(y)
        return _scaled_poly(_W_POLYS[k - 1], z, h, k)
    corr, m = _em_corrections(X, h, ys, scaled_deriv, head + integ)
    note_depth("series", J * p + 2 * m)
    return head + integ + corr


# -- transform -------------------------------------------------------------------

@dataclass(frozen=True)
class MellinIntegrand:
    """f on (0, inf) with its behaviour at both ends.

    After subtracting ``singular`` terms c x^{-beta}, the remainder obeys
    |r(x)| <= small_x_const * x^{-small_x_exponent} on (0, 1].  For x >= 1,
    |f(x)| <= decay_const * exp(-decay * x).
    """

    eval: Callable
    small_x_exponent: float
    decay: float
    small_x_const: float = 1.0
    decay_const: float = 1.0
    singular: tuple[tuple[float, float], ...] = ()
    description: str = ""


@dataclass(frozen=True)
class MellinResult:
    value: object
    error: float
    intervals: int
    cut_low: float
    cut_high: float


def _upper_cut(K: float, lam: float, s: float, tol: float) -> float:
    """T >= 1 with K int_T^inf e^{-lam t} t^{s-1} dt <= tol."""
    def bound(T):
        if lam * T <= s - 1:
            return math.inf
        return K * math.exp(-lam * T + (s - 1) * math.log(T)) / (lam - (s - 1) / T)
    T = 1.0
    while bound(T) > tol:
        T *= 1.25
        if T > 1e6:
            raise DomainError("decay too slow for the requested tolerance")
    return T


def _panels(hi: float) -> list[float]:
    pts = [0.0]
    v = 0.5
    while v < hi:
        pts.append(v)
        v *= 2
    pts.append(hi)
    return pts


def mellin_transform(f: MellinIntegrand, s, tol: float = 1e-11, max_intervals: int = 4000,
                     full_output: bool = False):
    """(Mf)(s) = int_0^inf f(t) t^{s-1} dt for real s above the small-x exponent."""
    s_f = float(s)
    alpha = f.small_x_exponent
    if not s_f > alpha:
        raise DomainError(f"Mellin transform diverges at 0 for s = {s} (needs s > {alpha})")
    for _, beta in f.singular:
        if s_f == beta:
            raise DomainError(f"s = {s} hits the singular exponent {beta}")
    B = backend()
    sb = B.num(s)
    gap = s_f - alpha
    U = math.log(max(4 * f.small_x_const / (gap * tol), 1.0)) / gap
    U = min(max(U, 1.0), 650.0)
    T = _upper_cut(f.decay_const, f.decay, s_f, tol / 4)

    def low(u):
        ub = B.num(u)
        xx = B.exp(-ub)
        r = f.eval(xx)
        for c, beta in f.singular:
            r -= B.num(c) * xx ** (-B.num(beta))
        return r * B.exp(-sb * ub)

    def high(t):
        tb = B.num(t)
        return f.eval(tb) * tb ** (sb - 1)

    low_pts = _panels(U)
    high_pts = [1.0 + v for v in _panels(T - 1.0)]
    if B.name == "standard":
        r1 = integrate(low, low_pts, tol / 4, max_intervals)
        r2 = integrate(high, high_pts, tol / 4, max_intervals)
        value = r1.value + r2.value
        err = r1.error + r2.error
        intervals = r1.intervals + r2.intervals
        if not (r1.converged and r2.converged):
            raise SaturationError(
                f"adaptive quadrature budget exhausted (error estimate {err:.3g} > {tol / 2:.3g})",
                partial=value, bound=err, depth=intervals)
    else:
        ctx = B.ctx
        v1, e1 = ctx.quad(low, low_pts, error=True, maxdegree=8)
        v2, e2 = ctx.quad(high, high_pts, error=True, maxdegree=8)
        value = v1 + v2
        err = float(e1 + e2)
        intervals = len(low_pts) + len(high_pts) - 2
    value += B.fsum(B.num(c) / (sb - B.num(beta)) for c, beta in f.singular)
    note_depth("quadrature", intervals)
    if full_output:
        return MellinResult(value, err, intervals, math.exp(-U), T)
    return value


# -- integrands ------------------------------------------------------------------------

def csch2_series_integrand(X: PeriodicChar) -> MellinIntegrand:
    """x -> sum_n X(n) / sinh(n x)^2."""
    xmax = max(abs(float(v)) for v in X.values)
    # csch^2 y <= 1/y^2 ; for x >= 1: csch^2(nx) <= 4 e^{-2nx}/(1-e^{-2})^2
    return MellinIntegrand(
        eval=lambda x: csch2_lattice(X, x),
        small_x_exponent=2.0,
        small_x_const=xmax * math.pi**2 / 6,
        decay=2.0,
        decay_const=4 * xmax / (1 - math.exp(-2)) ** 3,
        description=f"sum {X.label}(n)/sinh(nx)^2",
    )


def log_theta_quotient_integrand(p: int, a: int, b: int) -> MellinIntegrand:
    """x -> log of the theta_4 quotient with nome e^{-px/2}.

    Summed as a theta series where that is well conditioned (p x >= 1.2);
    below, through the triple-product expansion sum X2(n) log(1 - e^{-nx}).
    """
    X = x2_character(p, a, b)

    def ev(x):
        if p * x >= 1.2:
            return log_theta_quotient(p, a, b, x)
        return log1mexp_lattice(X, x)
    m = min(a, b)
    # the limit at 0 is finite for this even character
    probe = abs(float(log1mexp_lattice(X, 1e-9)))
    return MellinIntegrand(
        eval=ev,
        small_x_exponent=0.0,
        small_x_const=2 * probe + 1,
        decay=float(m),
        decay_const=1 / (1 - math.exp(-1)) ** 2,
        description=f"log theta4 quotient ({p},{a},{b})",
    )


def example4_integrand() -> MellinIntegrand:
    """x -> 1 - theta_2(e^{-pi x})^4 - theta_3(e^{-pi x})^4.

    Behaves like -2 x^{-2} + 1 at the origin (up to e^{-2 pi/x} terms); those
    two terms are subtracted on (0, 1] so the transform continues to 0 < s < 2.
    """
    def ev(x):
        B = backend()
        q = B.exp(-B.pi * x)
        return 1 - theta2(q) ** 4 - theta3(q) ** 4
    return MellinIntegrand(
        eval=ev,
        small_x_exponent=-8.0,
        small_x_const=1.0,
        decay=math.pi,
        decay_const=32.0,
        singular=((-2.0, 2.0), (1.0, 0.0)),
        description="1 - theta2^4 - theta3^4 at e^{-pi x}",
    )


# -- closed forms ----------------------------------------------------------------------

def prop21_rhs(X, s, via: str = "direct"):
    """4 * 2^{-s} Gamma(s) zeta(s-1) L(X, s).

    ``via="direct"`` sums the Dirichlet series; ``via="hurwitz"`` uses the
    Hurwitz-zeta combination over one period.
    """
    if not s > 1:
        raise DomainError("prop21_rhs needs s > 1")
    B = backend()
    if s == 2:
        raise DomainError("prop21_rhs has a pole at s = 2")
    if all(v == 0 for v in X.values):
        return B.num(0)
    sb = B.num(s)
    L = dirichlet_series(X, s) if via == "direct" else periodic_L(X, s)
    return 4 * B.num(2) ** (-sb) * gamma(sb) * zeta(sb - 1) * L


def thm25_rhs(p, a, b, s):
    """-Gamma(s) zeta(s+1) / (4 p^s) * sum_{r=1}^p X2(r) zeta(s, r/p), as displayed."""
    return thm25_rhs_corrected(p, a, b, s) / 4


def thm25_rhs_corrected(p, a, b, s):
    """-Gamma(s) zeta(s+1) L(X2, s): the transform of sum X2(n) log(1 - e^{-nx})."""
    if not s > 0:
        raise DomainError("thm25_rhs needs s > 0")
    B = backend()
    X = x2_character(p, a, b)
    sb = B.num(s)
    return -gamma(sb) * zeta(sb + 1) * periodic_L(X, s)


def example4_rhs(s):
    """24 pi^{-s} Gamma(s) zeta(s-1) (2^{1-s} - 1) zeta(s)."""
    if not s > 1:
        raise DomainError("example4_rhs needs s > 1")
    B = backend()
    sb = B.num(s)
    return 24 * B.pi ** (-sb) * gamma(sb) * zeta(sb - 1) * (B.num(2) ** (1 - sb) - 1) * zeta(sb)


def example4_pair(s, tol: float = 1e-11):
    if not s > 1 or s == 2:
        raise DomainError("example4_pair needs s > 1, s != 2")
    lhs = mellin_transform(example4_integrand(), s, tol)
    return lhs, example4_rhs(s)
