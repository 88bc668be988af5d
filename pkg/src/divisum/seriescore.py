"""Truncation-controlled Lambert series, power series and exponent-weighted
products, plus the paired evaluators for the general product/Lambert
theorems.

Every infinite sum is cut at a depth N chosen so that a proven bound on the
discarded tail is at most ``policy.tol``.  Bounds come from a declared
growth |c(n)| <= C n^k of the coefficient sequence.  If the bound cannot be
met within ``policy.max_terms`` a :class:`SaturationError` is raised
carrying the partial sum.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from ._backend import backend
from .errors import DomainError, InputContractError, SaturationError
from .numtheory import divisors, mobius_numerator, shared_tables, weighted_mobius_invert

__all__ = [
    "CoeffSeq", "TruncationPolicy", "record_depths", "tail_bound", "choose_depth",
    "lambert_sum", "taylor_eval", "weighted_product", "theorem1_pair", "prop1_pair",
    "prop2_pair", "prop3_pair", "prop45_pair", "lemma7_pair", "mobius_transform",
    "lambert_derivative_poly", "power_tail", "dirichlet_series",
]


@dataclass(frozen=True, eq=False)
class CoeffSeq:
    """Coefficient sequence c(n), n >= 1, with |c(n)| <= C * n**k.

    ``closed_form`` optionally evaluates the generating series
    y -> sum c(n) y^n; ``tail_sum(N)`` optionally returns sum_{n>N} c(n)
    for slowly decaying sequences; ``support`` marks c(n) = 0 for n > support.
    """

    eval: Callable[[int], object]
    growth: tuple[float, float] = (1.0, 0.0)
    description: str = ""
    closed_form: Callable | None = None
    tail_sum: Callable[[int], object] | None = None
    support: int | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __call__(self, n: int):
        try:
            return self._cache[n]
        except KeyError:
            v = self._cache[n] = self.eval(n)
            return v

    @property
    def C(self) -> float:
        return float(self.growth[0])

    @property
    def k(self) -> float:
        return float(self.growth[1])


@dataclass(frozen=True)
class TruncationPolicy:
    tol: float = 1e-17
    max_terms: int = 1_000_000

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError("tol must be > 0")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")

    @classmethod
    def machine(cls, max_terms: int = 1_000_000) -> "TruncationPolicy":
        """Tails below the active backend's resolution."""
        return cls(tol=backend().eps * 1e-2, max_terms=max_terms)


# -- depth bookkeeping -------------------------------------------------------

_depths: ContextVar[dict | None] = ContextVar("divisum_depths", default=None)


@contextmanager
def record_depths() -> Iterator[dict]:
    """Collect the largest depth used per kind ('series', 'product', 'quadrature')."""
    log: dict = {}
    token = _depths.set(log)
    try:
        yield log
    finally:
        _depths.reset(token)


def note_depth(kind: str, n: int) -> None:
    log = _depths.get()
    if log is not None:
        log[kind] = max(log.get(kind, 0), int(n))


# -- tail bounds -------------------------------------------------------------

def tail_bound(C: float, k: float, rate: float, N: int) -> float:
    """Upper bound for sum_{n > N} C n^k exp(-rate n)."""
    if C == 0:
        return 0.0
    m = N + 1
    log_r = k * math.log1p(1.0 / m) - rate
    if log_r >= 0:
        return math.inf
    log_b = math.log(C) + k * math.log(m) - rate * m - math.log(-math.expm1(log_r))
    return math.exp(log_b) if log_b < 700 else math.inf


def choose_depth(C: float, k: float, rate: float, tol: float, max_terms: int,
                 start: int = 1) -> tuple[int, float]:
    """Smallest N >= start (up to a factor-of-two search) whose tail bound is <= tol.

    Returns (N, bound); if max_terms is insufficient returns (max_terms, bound)
    with bound > tol.
    """
    if C == 0:
        return start, 0.0
    lo, hi = start - 1, max(start, 8)
    while tail_bound(C, k, rate, hi) > tol:
        if hi >= max_terms:
            return max_terms, tail_bound(C, k, rate, max_terms)
        lo, hi = hi, min(2 * hi, max_terms)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_bound(C, k, rate, mid) <= tol:
            hi = mid
        else:
            lo = mid
    return hi, tail_bound(C, k, rate, hi)


def _truncated_sum(term: Callable[[int], object], C: float, k: float, rate: float,
                   policy: TruncationPolicy, kind: str, support: int | None = None,
                   start: int = 1):
    B = backend()
    if support is not None:
        N, bound = support, 0.0
    else:
        N, bound = choose_depth(C, k, rate, policy.tol, policy.max_terms, start)
    total = B.fsum(term(n) for n in range(1, N + 1))
    note_depth(kind, N)
    if bound > policy.tol:
        raise SaturationError(
            f"{kind} truncation saturated at {N} terms (tail bound {bound:.3g} > tol {policy.tol:.3g})",
            partial=total, bound=bound, depth=N)
    return total


# -- sequence transforms -----------------------------------------------------

def mobius_transform(c: CoeffSeq) -> CoeffSeq:
    """n -> sum_{d|n} c(d) mu(n/d).  Uses tau(n) <= 2 sqrt(n) in the growth bound."""
    return CoeffSeq(lambda n: mobius_numerator(c, n), (2 * c.C, c.k + 0.5),
                    f"mobius({c.description})")


def _signed_divisor_sum(X: CoeffSeq) -> CoeffSeq:
    """n -> sum_{d|n} (-1)^{n/d} X(d)."""
    def ev(n):
        return sum(X(d) * (-1 if (n // d) % 2 else 1) for d in divisors(n))
    return CoeffSeq(ev, (2 * X.C, X.k + 0.5), f"alt-divsum({X.description})")


# -- core series -------------------------------------------------------------

def lambert_sum(c: CoeffSeq, denom_sign: int, x, policy: TruncationPolicy | None = None):
    """sum_n c(n) / (e^{nx} - 1) for denom_sign = -1, or / (e^{nx} + 1) for +1."""
    if denom_sign not in (-1, 1):
        raise DomainError("denom_sign must be -1 or +1")
    if not x > 0:
        raise DomainError(f"lambert_sum needs x > 0, got {x}")
    policy = policy or TruncationPolicy.machine()
    B = backend()
    xb = B.num(x)
    fx = float(x)
    if denom_sign < 0:
        # 1/(e^y - 1) <= e^{-y} / (1 - e^{-x}) for y >= x
        C = c.C / -math.expm1(-fx)

        def term(n):
            cn = c(n)
            if cn == 0:
                return B.num(0)
            return B.num(cn) / B.expm1(n * xb)
    else:
        C = c.C

        def term(n):
            cn = c(n)
            if cn == 0:
                return B.num(0)
            e = B.exp(-n * xb)
            return B.num(cn) * e / (1 + e)
    return _truncated_sum(term, C, c.k, fx, policy, "series", c.support)


def taylor_eval(c: CoeffSeq, q, policy: TruncationPolicy | None = None):
    """sum_{n>=1} c(n) q^n for |q| < 1."""
    if not abs(q) < 1:
        raise DomainError(f"taylor_eval needs |q| < 1, got {q}")
    B = backend()
    if q == 0:
        return B.num(0)
    policy = policy or TruncationPolicy.machine()
    qb = B.num(q)

    def term(n):
        cn = c(n)
        return B.num(0) if cn == 0 else B.num(cn) * qb**n
    return _truncated_sum(term, c.C, c.k, -math.log(abs(float(q))), policy, "series", c.support)


def weighted_product(q, w: CoeffSeq, base_sign: int, policy: TruncationPolicy | None = None):
    """prod_n (1 + q^n)^{w(n)} for base_sign = +1, prod_n (1 - q^n)^{w(n)} for -1.

    Accumulated as sum w(n) log(1 +- q^n).  The tail bound applies to the
    returned product: for products above 1 the log sum is cut at tol / (2 P).
    """
    if base_sign not in (-1, 1):
        raise DomainError("base_sign must be -1 or +1")
    if not abs(q) < 1:
        raise DomainError(f"weighted_product needs |q| < 1, got {q}")
    B = backend()
    if q == 0:
        return B.num(1)
    policy = policy or TruncationPolicy.machine()
    qb = B.num(q)
    aq = abs(float(q))

    def term(n):
        wn = w(n)
        return B.num(0) if wn == 0 else B.num(wn) * B.log1p(base_sign * qb**n)
    C, rate = w.C / (1 - aq), -math.log(aq)
    log_total = _truncated_sum(term, C, w.k, rate, policy, "product", w.support)
    scale = math.exp(min(float(log_total), 700.0))
    if scale > 1 and w.support is None:
        tighter = TruncationPolicy(policy.tol / (2 * scale), policy.max_terms)
        log_total = _truncated_sum(term, C, w.k, rate, tighter, "product")
    return B.exp(log_total)


# -- paired evaluators -------------------------------------------------------

def _series_at(c: CoeffSeq, y, policy):
    """Generating function sum c(n) y^n, via the closed form when one is declared."""
    if c.closed_form is not None:
        return c.closed_form(y)
    return taylor_eval(c, y, policy)


def theorem1_pair(c: CoeffSeq, a, b, policy: TruncationPolicy | None = None):
    """Weighted product over (1-e^{-nb})/(1-e^{-na}) versus exp of the integral
    of f(e^{-t}) from a to b, with f = sum c(n) x^n."""
    if not (a > 0 and b > 0):
        raise DomainError(f"theorem1_pair needs a, b > 0, got a={a}, b={b}")
    policy = policy or TruncationPolicy.machine()
    B = backend()
    ab, bb = B.num(a), B.num(b)
    m = min(float(a), float(b))

    def log_factor(n):
        xn = weighted_mobius_invert(c, n)
        if xn == 0:
            return B.num(0)
        return B.num(xn) * (B.log1p(-B.exp(-n * bb)) - B.log1p(-B.exp(-n * ab)))
    # |X(n)| <= 2C n^{k-1/2}; |log(1-e^{-y})| <= e^{-y}/(1-e^{-m}) for y >= m
    C = 2 * c.C * 2 / -math.expm1(-m)
    lhs = B.exp(_truncated_sum(log_factor, C, max(c.k - 0.5, 0.0), m, policy, "product"))

    def integral_term(n):
        cn = c(n)
        if cn == 0:
            return B.num(0)
        return B.num(cn) * (B.exp(-n * ab) - B.exp(-n * bb)) / n
    rhs = B.exp(_truncated_sum(integral_term, 2 * c.C, max(c.k - 1, 0.0), m, policy,
                               "series", c.support))
    return lhs, rhs


def prop1_pair(c: CoeffSeq, x, policy: TruncationPolicy | None = None):
    """Lambert series of the Moebius-inverted numerator versus f(e^{-x})."""
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x}")
    policy = policy or TruncationPolicy.machine()
    B = backend()
    lhs = lambert_sum(mobius_transform(c), -1, x, policy)
    rhs = _series_at(c, B.exp(-B.num(x)), policy)
    return lhs, rhs


def prop2_pair(c: CoeffSeq, x, policy: TruncationPolicy | None = None):
    """The e^{nx}+1 companion: equals f(e^{-x}) - 2 f(e^{-2x})."""
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x}")
    policy = policy or TruncationPolicy.machine()
    B = backend()
    xb = B.num(x)
    lhs = lambert_sum(mobius_transform(c), 1, x, policy)
    rhs = -2 * _series_at(c, B.exp(-2 * xb), policy) + _series_at(c, B.exp(-xb), policy)
    return lhs, rhs


def lambert_derivative_poly(v: int) -> list[int]:
    """Coefficients P_v[j] with d^v/dy^v [1/(e^y - 1)] = sum_j P_v[j] w^j, w = 1/(e^y - 1)."""
    if v < 0:
        raise DomainError("derivative order must be >= 0")
    poly = [0, 1]
    for _ in range(v):
        # d/dy P(w) = P'(w) * dw/dy, dw/dy = -w - w^2
        deriv = [j * poly[j] for j in range(1, len(poly))]  # coefficient of w^{j-1}
        nxt = [0] * (len(poly) + 1)
        for j, cj in enumerate(deriv):
            nxt[j + 1] -= cj
            nxt[j + 2] -= cj
        poly = nxt
    return poly


MAX_DERIVATIVE = 6


def prop3_pair(A: CoeffSeq, v: int, x, policy: TruncationPolicy | None = None):
    """v-th x-derivative of sum (sum_{d|n} A(d) mu(n/d)) / (e^{nx}-1), computed
    termwise, versus the series with A(d) replaced by A(d) (-d)^v."""
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x}")
    if not 0 <= v <= MAX_DERIVATIVE:
        raise DomainError(f"derivative order must be in 0..{MAX_DERIVATIVE}, got {v}")
    policy = policy or TruncationPolicy.machine()
    B = backend()
    xb = B.num(x)
    fx = float(x)
    numer = mobius_transform(A)
    poly = lambert_derivative_poly(v)
    coef_sum = sum(abs(p) for p in poly)

    def term(n):
        bn = numer(n)
        if bn == 0:
            return B.num(0)
        w = 1 / B.expm1(n * xb)
        return B.num(bn) * B.num(n) ** v * B.fsum(B.num(cj) * w**j for j, cj in enumerate(poly) if cj)
    # for n x >= log 2, w <= 1 so |P_v(w)| <= coef_sum * w
    start = max(1, math.ceil(math.log(2) / fx))
    C = numer.C * coef_sum / -math.expm1(-fx)
    lhs = _truncated_sum(term, C, numer.k + v, fx, policy, "series", start=start)

    def weighted(n):
        return mobius_numerator(lambda d: A(d) * (-d) ** v, n)
    rhs_seq = CoeffSeq(weighted, (numer.C, numer.k + v), f"prop3-rhs({A.description})")
    rhs = lambert_sum(rhs_seq, -1, x, policy)
    return lhs, rhs


def prop45_pair(X: CoeffSeq, f: CoeffSeq, g: CoeffSeq, denom_sign: int, x,
                policy: TruncationPolicy | None = None, validate_to: int = 200):
    """sum_n (sum_{d|n} X(d) f(n/d)) / (e^{nx} -+ 1) versus sum_n f(n) g(e^{-nx})
    (minus case) or sum_n f(n) (g(e^{-nx}) - 2 g(e^{-2nx})) (plus case), where
    g has Taylor coefficients sum_{d|n} X(d)."""
    if denom_sign not in (-1, 1):
        raise DomainError("denom_sign must be -1 or +1")
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x}")
    for n in range(1, validate_to + 1):
        lhs_n = sum(X(d) for d in divisors(n))
        gn = g(n)
        if not math.isclose(float(lhs_n), float(gn), rel_tol=1e-12, abs_tol=1e-12):
            raise InputContractError(
                f"g-coefficient({n}) = {gn} but sum of X over divisors of {n} is {lhs_n}")
    policy = policy or TruncationPolicy.machine()
    B = backend()
    xb = B.num(x)
    fx = float(x)

    numer = CoeffSeq(lambda n: sum(X(d) * f(n // d) for d in divisors(n)),
                     (2 * X.C * f.C, max(X.k, f.k) + 0.5), "prop45-numerator")
    lhs = lambert_sum(numer, denom_sign, x, policy)

    def G(y):
        return _series_at(g, y, policy)

    def term(m):
        fm = f(m)
        if fm == 0:
            return B.num(0)
        y = B.exp(-m * xb)
        val = G(y) if denom_sign < 0 else G(y) - 2 * G(y * y)
        return B.num(fm) * val
    kg = math.ceil(g.k)
    C = 3 * f.C * g.C * math.gamma(kg + 1) / (-math.expm1(-fx)) ** (kg + 1)
    rhs = _truncated_sum(term, C, f.k, fx, policy, "series", f.support)
    return lhs, rhs


def lemma7_pair(X: CoeffSeq, x, policy: TruncationPolicy | None = None):
    """sum X(n)/(e^{nx}+1) versus -sum_n (sum_{d|n} (-1)^{n/d} X(d)) e^{-nx}."""
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x}")
    policy = policy or TruncationPolicy.machine()
    B = backend()
    lhs = lambert_sum(X, 1, x, policy)
    rhs = -taylor_eval(_signed_divisor_sum(X), B.exp(-B.num(x)), policy)
    return lhs, rhs


# -- Dirichlet-series helpers -------------------------------------------------

# B_2, B_4, ... as exact fractions; extended on demand.
_BERNOULLI_EVEN: list[Fraction] = []


def bernoulli_even(j: int) -> Fraction:
    """B_{2j} for j >= 1 (Akiyama-Tanigawa)."""
    while len(_BERNOULLI_EVEN) < j:
        m_target = 2 * (len(_BERNOULLI_EVEN) + 1)
        a = [Fraction(0)] * (m_target + 1)
        for m in range(m_target + 1):
            a[m] = Fraction(1, m + 1)
            for i in range(m, 0, -1):
                a[i - 1] = i * (a[i - 1] - a[i])
        _BERNOULLI_EVEN.append(a[0])
    return _BERNOULLI_EVEN[j - 1]


def power_tail(s, start):
    """sum_{j>=0} (start + j)^{-s} for large ``start`` (>= 20), s > 1.

    Euler-Maclaurin at the lower end with as many Bernoulli corrections as the
    backend resolution needs.
    """
    if not s > 1:
        raise DomainError("power_tail needs s > 1")
    if start < 20:
        raise DomainError("power_tail needs start >= 20")
    B = backend()
    sb, M = B.num(s), B.num(start)
    total = M ** (1 - sb) / (sb - 1) + M ** (-sb) / 2
    rising = sb  # s (s+1) ... (s + 2j - 2)
    power = M ** (-sb - 1)
    for j in range(1, 40):
        t = B.num(bernoulli_even(j)) / math.factorial(2 * j) * rising * power
        total += t
        if abs(t) <= B.eps * 1e-3 * abs(total):
            break
        rising *= (sb + 2 * j - 1) * (sb + 2 * j)
        power /= M * M
    return total


def dirichlet_series(X, s, direct_periods: int = 400):
    """sum_{n>=1} X(n) n^{-s} for a periodic X and s > 1.

    Direct summation over ``direct_periods`` full periods, then per-residue
    Euler-Maclaurin tails.
    """
    if not s > 1:
        raise DomainError("dirichlet_series needs s > 1 for a periodic sequence")
    B = backend()
    sb = B.num(s)
    p = X.period
    N = direct_periods * p
    head = B.fsum(B.num(X(n)) * B.num(n) ** (-sb) for n in range(1, N + 1) if X(n))
    tail = B.num(0)
    for r, xr in X.residue_values():
        if xr:
            # n = N + r + p j, j >= 0  ->  p^{-s} sum_j (j + (N + r)/p)^{-s}
            tail += B.num(xr) * B.num(p) ** (-sb) * power_tail(sb, (B.num(N) + r) / p)
    note_depth("series", N)
    return head + tail
