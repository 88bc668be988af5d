"""Gamma, Riemann/Hurwitz zeta, periodic L-series, Jacobi theta functions,
the Euler product f(-q), the Rogers-Ramanujan continued fraction, and
second log-derivatives of theta quotients."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from ._backend import backend
from .errors import DomainError, PoleError, SaturationError
from .numtheory import PeriodicChar, legendre_character
from .seriescore import CoeffSeq, TruncationPolicy, bernoulli_even, note_depth, weighted_product

__all__ = [
    "ThetaArg", "theta4", "theta4_product", "theta2", "theta3", "eta_product",
    "rrcf", "rrcf_product", "rrcf_log_d2", "gamma", "zeta", "hurwitz_zeta",
    "hurwitz_zeta_regular", "periodic_L", "log_theta_quotient", "log_theta_quotient_d2",
    "theta4_jet",
]


def _check_nome(q) -> None:
    if not 0 < q < 1:
        raise DomainError(f"nome must satisfy 0 < q < 1, got {q}")


@dataclass(frozen=True)
class ThetaArg:
    """First argument of theta_4: real (imag == 0) or purely imaginary (real == 0)."""

    real: float = 0.0
    imag: float = 0.0

    def __post_init__(self):
        if self.real != 0 and self.imag != 0:
            raise DomainError("theta argument must be real or purely imaginary")

    @classmethod
    def coerce(cls, z) -> "ThetaArg":
        if isinstance(z, ThetaArg):
            return z
        if isinstance(z, complex):
            return cls(z.real, z.imag)
        return cls(real=z)


def _theta_terms_needed(log_q: float, growth: float, tol: float) -> int:
    """Smallest K with q^{k^2} e^{growth k} <= tol for all k >= K, geometric beyond."""
    # exponent -lam k^2 + growth k with lam = -log q
    lam = -log_q
    k = max(1, math.ceil(growth / lam))
    while -lam * k * k + growth * k > math.log(tol) or lam * (2 * k + 1) - growth < math.log(2):
        k += 1
    return k


def theta4(z, q, tol: float | None = None):
    """theta_4(z, q) = sum_k (-1)^k q^{k^2} e^{2ikz}, z real or z = i t."""
    _check_nome(q)
    arg = ThetaArg.coerce(z)
    B = backend()
    tol = tol or B.eps * 1e-2
    qb = B.num(q)
    t = abs(arg.imag)
    if arg.imag != 0 and not q * math.exp(2 * t) < 1:
        raise DomainError(f"theta4(it, q) needs q e^(2|t|) < 1; got q={q}, t={arg.imag}")
    K = _theta_terms_needed(math.log(q), 2 * t, tol / 4)
    note_depth("series", K)
    total = B.num(0)
    if arg.imag != 0:
        tb = B.num(arg.imag)
        for k in range(1, K + 1):
            # q^{k^2} cosh(2kt) without overflow
            lq = k * k * B.log(qb)
            total += (-1) ** k * (B.exp(lq + 2 * k * tb) + B.exp(lq - 2 * k * tb)) / 2
    else:
        zb = B.num(arg.real)
        for k in range(1, K + 1):
            total += (-1) ** k * qb ** (k * k) * B.cos(2 * k * zb)
    return 1 + 2 * total


def theta4_product(z, q, tol: float | None = None):
    """Jacobi triple product prod (1-q^{2n})(1 - 2 q^{2n-1} cos 2z + q^{4n-2})."""
    _check_nome(q)
    arg = ThetaArg.coerce(z)
    B = backend()
    tol = tol or B.eps * 1e-2
    qb = B.num(q)
    e2 = math.exp(2 * abs(arg.imag))
    if not q * e2 < 1:
        raise DomainError("theta4_product needs q e^(2|t|) < 1")
    lam = -math.log(q * e2)
    N = max(2, math.ceil(math.log(4 / (tol * (1 - q * e2))) / lam / 2) + 2)
    note_depth("product", N)
    log_total = B.num(0)
    if arg.imag != 0:
        u = B.exp(2 * B.num(arg.imag))
        for n in range(1, N + 1):
            qo = qb ** (2 * n - 1)
            log_total += B.log1p(-qb ** (2 * n)) + B.log1p(-qo * u) + B.log1p(-qo / u)
    else:
        c2 = B.cos(2 * B.num(arg.real))
        for n in range(1, N + 1):
            qo = qb ** (2 * n - 1)
            log_total += B.log1p(-qb ** (2 * n)) + B.log1p(-2 * qo * c2 + qo * qo)
    return B.exp(log_total)


def theta2(q, tol: float | None = None):
    """2 sum_{k>=0} q^{(k+1/2)^2}."""
    _check_nome(q)
    B = backend()
    tol = tol or B.eps * 1e-2
    qb = B.num(q)
    lq = B.log(qb)
    K = _theta_terms_needed(math.log(q), 0.0, tol / 4)
    note_depth("series", K)
    return 2 * B.fsum(B.exp(lq * (k + B.num(0.5)) ** 2) for k in range(0, K + 1))


def theta3(q, tol: float | None = None):
    """1 + 2 sum_{k>=1} q^{k^2}."""
    _check_nome(q)
    B = backend()
    tol = tol or B.eps * 1e-2
    qb = B.num(q)
    K = _theta_terms_needed(math.log(q), 0.0, tol / 4)
    note_depth("series", K)
    return 1 + 2 * B.fsum(qb ** (k * k) for k in range(1, K + 1))


_ONES = CoeffSeq(lambda n: 1, (1.0, 0.0), "one")


def eta_product(q, policy: TruncationPolicy | None = None):
    """f(-q) = prod_{n>=1} (1 - q^n), accumulated in log space."""
    _check_nome(q)
    return weighted_product(q, _ONES, -1, policy)


def rrcf(q, depth: int):
    """1/(1 + q/(1 + q^2/(1 + ... + q^depth))), evaluated bottom-up.

    This is the fraction without the customary q^{1/5} prefactor.
    """
    if not 0 <= q < 1:
        raise DomainError(f"rrcf needs 0 <= q < 1, got {q}")
    if depth < 0:
        raise DomainError("depth must be >= 0")
    B = backend()
    qb = B.num(q)
    t = B.num(1)
    for k in range(depth, 0, -1):
        t = 1 + qb**k / t
    note_depth("series", depth)
    return 1 / t


_LEGENDRE5 = legendre_character(5)


def rrcf_product(q, policy: TruncationPolicy | None = None):
    """prod (1 - q^n)^{(n|5)}; equals :func:`rrcf` in the infinite-depth limit."""
    _check_nome(q)
    chi = CoeffSeq(_LEGENDRE5, (1.0, 0.0), "legendre5")
    return weighted_product(q, chi, -1, policy)


class _Jet(NamedTuple):
    """Value with first and second derivative."""

    v: object
    d1: object
    d2: object

    def __add__(self, o):
        if isinstance(o, _Jet):
            return _Jet(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
        return _Jet(self.v + o, self.d1, self.d2)

    __radd__ = __add__

    def __mul__(self, o):
        return _Jet(self.v * o.v, self.d1 * o.v + self.v * o.d1,
                    self.d2 * o.v + 2 * self.d1 * o.d1 + self.v * o.d2)

    def __truediv__(self, o):
        inv_v = 1 / o.v
        r1 = -o.d1 * inv_v * inv_v
        r2 = (2 * o.d1 * o.d1 * inv_v - o.d2) * inv_v * inv_v
        return self * _Jet(inv_v, r1, r2)

    def log_d2(self):
        return self.d2 / self.v - (self.d1 / self.v) ** 2


def rrcf_log_d2(x, depth: int | None = None):
    """d^2/dx^2 log R(e^{-x}) from the continued fraction, by forward-mode
    differentiation through the bottom-up recursion."""
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x}")
    B = backend()
    xb = B.num(x)
    if depth is None:
        # q^depth below resolution
        depth = max(8, math.ceil(-math.log(B.eps * 1e-4) / float(x)) + 2)
    one = B.num(1)
    zero = B.num(0)
    t = _Jet(one, zero, zero)
    for k in range(depth, 0, -1):
        e = B.exp(-k * xb)
        qk = _Jet(e, -k * e, k * k * e)
        t = qk / t + 1
    note_depth("series", depth)
    return -t.log_d2()


# -- Gamma and zeta -------------------------------------------------------------

def gamma(s):
    if s <= 0 and float(s) == math.floor(float(s)):
        raise PoleError(f"gamma has a pole at s = {s}")
    B = backend()
    return B.gamma(B.num(s))


def _hurwitz_em(s, a, regular: bool):
    """Euler-Maclaurin for zeta(s, a), optionally minus the pole part 1/(s-1)."""
    B = backend()
    sb, ab = B.num(s), B.num(a)
    N = 16 if B.name == "standard" else 48
    N = max(N, math.ceil(abs(float(s))) + 4)
    head = B.fsum((n + ab) ** (-sb) for n in range(N))
    M = N + ab
    L = B.log(M)
    if regular:
        if s == 1:
            pole_part = -L
        else:
            pole_part = B.expm1((1 - sb) * L) / (sb - 1)
    else:
        pole_part = M ** (1 - sb) / (sb - 1)
    total = head + pole_part + M ** (-sb) / 2
    rising = sb
    power = M ** (-sb - 1)
    last = None
    for j in range(1, 80):
        t = B.num(bernoulli_even(j)) / math.factorial(2 * j) * rising * power
        total += t
        if j >= 8 and abs(t) <= B.eps * 1e-2 * max(abs(total), B.eps):
            note_depth("series", N)
            return total
        if last is not None and abs(t) > abs(last) and j > 8:
            break
        last = t
        rising *= (sb + 2 * j - 1) * (sb + 2 * j)
        power /= M * M
    raise SaturationError(f"Euler-Maclaurin did not converge for s={s}, a={a}", partial=total)


def _check_hurwitz(s, a):
    if not 0 < a <= 1:
        raise DomainError(f"Hurwitz parameter a must lie in (0, 1], got {a}")
    if not s > 0:
        raise DomainError(f"zeta evaluated only for s > 0, got {s}")


def hurwitz_zeta(s, a=1):
    """zeta(s, a) = sum_{n>=0} (n + a)^{-s} for s > 0, s != 1, 0 < a <= 1."""
    _check_hurwitz(s, a)
    if s == 1:
        raise PoleError("zeta(s, a) has a pole at s = 1")
    return _hurwitz_em(s, a, regular=False)


def hurwitz_zeta_regular(s, a=1):
    """zeta(s, a) - 1/(s - 1); finite at s = 1 (where it equals -digamma(a))."""
    _check_hurwitz(s, a)
    return _hurwitz_em(s, a, regular=True)


def zeta(s):
    return hurwitz_zeta(s, 1)


def periodic_L(X: PeriodicChar, s):
    """sum X(n) n^{-s} = p^{-s} sum_{r=1}^p X(r) zeta(s, r/p).

    For s <= 1 the period sum of X must vanish; s = 1 is then the finite
    limit of the Hurwitz combination.
    """
    B = backend()
    p = X.period
    total_x = X.period_sum
    if not s > 0:
        raise DomainError(f"periodic_L needs s > 0, got {s}")
    if s <= 1 and total_x != 0:
        if s == 1:
            raise PoleError("periodic_L has a pole at s = 1 unless the period sum vanishes")
        raise DomainError("periodic_L for s < 1 needs a mean-zero sequence")
    sb = B.num(s)
    acc = B.fsum(B.num(xr) * hurwitz_zeta_regular(s, B.num(r) / p)
                 for r, xr in X.residue_values() if xr)
    if total_x != 0:
        acc += B.num(total_x) / (sb - 1)
    return B.num(p) ** (-sb) * acc


# -- theta quotients -----------------------------------------------------------------

def theta4_jet(p, shift, x, tol: float | None = None) -> _Jet:
    """theta_4(i c x, e^{-p x / 2}) with c = shift / 4, and its first two x-derivatives.

    Each term (-1)^k e^{-p k^2 x / 2} cosh(k shift x / 2) is differentiated
    exactly.
    """
    B = backend()
    tol = tol or B.eps * 1e-2
    xb = B.num(x)
    fx = float(x)
    lam = p * fx / 2
    growth = abs(shift) * fx / 2
    if not growth < lam:
        raise DomainError("theta4 with imaginary argument diverges: need |shift| < p")
    K = _theta_terms_needed(-lam, growth, tol / 16) + 2
    note_depth("series", K)
    v = B.num(0)
    d1 = B.num(0)
    d2 = B.num(0)
    for k in range(1, K + 1):
        A = B.num(-p * k * k) / 2
        Bk = B.num(k * shift) / 2
        ep = B.exp((A + Bk) * xb)
        em = B.exp((A - Bk) * xb)
        ch = (ep + em) / 2
        sh = (ep - em) / 2
        sgn = -1 if k % 2 else 1
        v += sgn * ch
        d1 += sgn * (A * ch + Bk * sh)
        d2 += sgn * ((A * A + Bk * Bk) * ch + 2 * A * Bk * sh)
    return _Jet(1 + 2 * v, 2 * d1, 2 * d2)


def _check_pab(p, a, b):
    if min(p, a, b) < 1 or not (p > 2 * a and p > 2 * b):
        raise DomainError(f"need integers p > 2a, p > 2b >= 2; got ({p},{a},{b})")


def log_theta_quotient(p, a, b, x):
    """log( theta_4((p-2a) i x/4, e^{-px/2}) / theta_4((p-2b) i x/4, e^{-px/2}) )."""
    _check_pab(p, a, b)
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x}")
    B = backend()
    ta = theta4_jet(p, p - 2 * a, x).v
    tb = theta4_jet(p, p - 2 * b, x).v
    return B.log(ta) - B.log(tb)


def log_theta_quotient_d2(p, a, b, x):
    """-4 d^2/dx^2 log of the theta_4 quotient above (both arguments move with x)."""
    _check_pab(p, a, b)
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x}")
    ja = theta4_jet(p, p - 2 * a, x)
    jb = theta4_jet(p, p - 2 * b, x)
    return -4 * (ja.log_d2() - jb.log_d2())
