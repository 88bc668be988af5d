"""Exact integer kernels: sieves, divisors, Moebius inversion, gcd-sums,
periodic characters."""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational
from typing import Callable, Sequence

import numpy as np

from ._backend import backend
from .errors import CapacityError, DomainError

MAX_TABLE = 50_000_000


@dataclass(frozen=True, eq=False)
class ArithTables:
    """Sieved mu, phi and smallest-prime-factor tables for 0..n_max.

    Index 0 is a placeholder (0 in every table) so that ``mu[n]`` is the
    value at n.  Arrays are read-only; instances can be shared freely.
    """

    n_max: int
    mu: np.ndarray
    phi: np.ndarray
    spf: np.ndarray

    def factorize(self, n: int) -> list[tuple[int, int]]:
        if n > self.n_max:
            return _trial_factorize(n)
        out: list[tuple[int, int]] = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def divisors(self, n: int) -> list[int]:
        divs = [1]
        for p, e in self.factorize(n):
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


def build_tables(n_max: int) -> ArithTables:
    if not isinstance(n_max, (int, np.integer)) or n_max < 1:
        raise CapacityError(f"n_max must be a positive integer, got {n_max!r}")
    if n_max > MAX_TABLE:
        raise CapacityError(f"n_max={n_max} exceeds table capacity {MAX_TABLE}")
    n = int(n_max)
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, isqrt(n) + 1):
        if spf[p] == 0:
            spf[p] = p
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.nonzero(spf == 0)[0]
    spf[rest] = rest
    spf[0] = 0

    primes = np.nonzero(spf[2:] == np.arange(2, n + 1))[0] + 2
    mu = np.ones(n + 1, dtype=np.int8)
    phi = np.arange(n + 1, dtype=np.int64)
    for p in primes.tolist():
        mu[p::p] *= -1
        if p * p <= n:
            mu[p * p :: p * p] = 0
        phi[p::p] -= phi[p::p] // p
    mu[0] = 0
    for arr in (mu, phi, spf):
        arr.setflags(write=False)
    return ArithTables(n_max=n, mu=mu, phi=phi, spf=spf)


def _trial_factorize(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


_shared: ArithTables | None = None
_shared_lock = threading.Lock()


def shared_tables(n: int) -> ArithTables:
    """Process-wide tables covering at least ``n``; grown by doubling."""
    global _shared
    t = _shared
    if t is not None and t.n_max >= n:
        return t
    with _shared_lock:
        t = _shared
        if t is None or t.n_max < n:
            size = max(1 << 14, t.n_max if t else 0)
            while size < n:
                size *= 2
            t = _shared = build_tables(min(size, MAX_TABLE) if n <= MAX_TABLE else n)
    return t


def mobius(n: int) -> int:
    if n <= MAX_TABLE:
        return int(shared_tables(n).mu[n])
    r = 1
    for _, e in _trial_factorize(n):
        if e > 1:
            return 0
        r = -r
    return r


def euler_phi(n: int) -> int:
    if n <= MAX_TABLE:
        return int(shared_tables(n).phi[n])
    r = n
    for p, _ in _trial_factorize(n):
        r -= r // p
    return r


def divisors(n: int, tables: ArithTables | None = None) -> list[int]:
    if n < 1:
        raise DomainError(f"divisors needs n >= 1, got {n}")
    if tables is None and n <= MAX_TABLE:
        tables = shared_tables(n)
    if tables is not None:
        return tables.divisors(n)
    divs = [1]
    for p, e in _trial_factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _exact_sum(values):
    """Sum keeping exact types when every value is rational."""
    if all(isinstance(v, Rational) for v in values):
        return sum((Fraction(v) for v in values), Fraction(0))
    B = backend()
    return B.fsum(B.num(v) for v in values)


def mobius_numerator(a: Callable[[int], object], n: int) -> object:
    """Sum over d | n of a(d) * mu(n/d)."""
    t = shared_tables(n)
    terms = [a(d) * int(t.mu[n // d]) for d in t.divisors(n) if t.mu[n // d]]
    return _exact_sum(terms)


def weighted_mobius_invert(a: Callable[[int], object], n: int) -> object:
    """X(n) = (1/n) * sum_{d|n} a(d) mu(n/d).

    Solves sum_{d|n} d X(d) = a(n).  Exact (a Fraction) when ``a`` yields
    rationals, float otherwise.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return mobius_numerator(a, n) / n


def dirichlet_convolve(a: Callable[[int], object], b: Callable[[int], object], n: int) -> object:
    return _exact_sum([a(d) * b(n // d) for d in divisors(n)])


def gcd_sum(f: Callable[[int], object], n: int) -> object:
    """Sum of f(gcd(n, k)) over k = 1..n.

    Enumerates the gcds directly; f is evaluated once per distinct gcd.
    """
    if n < 1:
        raise DomainError(f"gcd_sum needs n >= 1, got {n}")
    counts = Counter(gcd(n, k) for k in range(1, n + 1))
    return _exact_sum([c * f(g) for g, c in sorted(counts.items())])


@dataclass(frozen=True)
class PeriodicChar:
    """A sequence with period ``period``; ``values[r]`` is the value at n = r mod period.

    ``values[0]`` is the value at multiples of the period.
    """

    period: int
    values: tuple
    label: str = ""

    def __post_init__(self):
        if self.period < 1 or len(self.values) != self.period:
            raise DomainError("values must have exactly `period` entries")

    def __call__(self, n: int):
        return self.values[n % self.period]

    def residue_values(self) -> list[tuple[int, object]]:
        """(r, X(r)) for r = 1..period."""
        return [(r, self.values[r % self.period]) for r in range(1, self.period + 1)]

    @property
    def period_sum(self):
        return sum(self.values)

    @property
    def mean_zero(self) -> bool:
        return self.period_sum == 0


def periodic_from_values(vals_1_to_p: Sequence, label: str = "") -> PeriodicChar:
    """Build from the values at n = 1..p (the last entry is the value at p)."""
    p = len(vals_1_to_p)
    vals = [vals_1_to_p[-1]] + list(vals_1_to_p[:-1])
    return PeriodicChar(p, tuple(vals), label or "periodic:" + ",".join(map(str, vals_1_to_p)))


def x2_character(p: int, a: int, b: int) -> PeriodicChar:
    """+1 on n = +-a (mod p), -1 on n = +-b (mod p), 0 elsewhere."""
    if min(p, a, b) < 1 or not (p > 2 * a and p > 2 * b) or a == b:
        raise DomainError(f"x2_character needs p > 2a, p > 2b, a != b, all >= 1; got ({p},{a},{b})")
    vals = [0] * p
    vals[a] = vals[p - a] = 1
    vals[b] = vals[p - b] = -1
    return PeriodicChar(p, tuple(vals), f"x2:{p},{a},{b}")


def legendre_character(p: int) -> PeriodicChar:
    """Legendre symbol (n|p) for an odd prime p, by residue enumeration."""
    if p < 3 or any(p % d == 0 for d in range(2, isqrt(p) + 1)):
        raise DomainError(f"legendre_character needs an odd prime, got {p}")
    squares = {(k * k) % p for k in range(1, p)}
    vals = tuple(0 if r == 0 else (1 if r in squares else -1) for r in range(p))
    return PeriodicChar(p, vals, f"legendre:{p}")


def constant_character(value=1) -> PeriodicChar:
    return PeriodicChar(1, (value,), "one" if value == 1 else f"const:{value}")


def alternating_character() -> PeriodicChar:
    """(-1)^(n+1): 1, -1, 1, -1, ..."""
    return PeriodicChar(2, (-1, 1), "alt")
