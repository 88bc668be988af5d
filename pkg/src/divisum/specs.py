"""Text specifications for coefficient sequences and periodic sequences.

Used by the identity catalog and the command line.  Coefficient specs::

    poly:c1,c2,...  f(x) = c1 x + c2 x^2 + ...   (rational coefficients)
    delta           [n = 1]
    one             1
    id              n
    mu              Moebius function
    phi             Euler phi
    power:s         n^{-s}
    exp:c           e^{-c n}
    cos:t           cos(2 t n)
    invfact         1/n!

Periodic specs: ``one``, ``alt``, ``x2:p,a,b``, ``legendre:p`` (``legendre5``),
``periodic:v1,...,vp`` (values at n = 1..p), ``zero``.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ._backend import backend
from .errors import DomainError
from .numtheory import (PeriodicChar, alternating_character, constant_character, euler_phi,
                        legendre_character, mobius, periodic_from_values, x2_character)
from .seriescore import CoeffSeq, power_tail
from .specialfn import zeta

__all__ = ["parse_coeff", "coeff_total", "parse_char"]


def _split(text: str) -> tuple[str, list[str]]:
    head, _, rest = text.strip().partition(":")
    args = [a.strip() for a in rest.split(",")] if rest else []
    return head.strip().lower(), args


def _num(s: str) -> float:
    try:
        return float(Fraction(s))
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"not a number: {s!r}") from None


def _poly(args: list[str]) -> CoeffSeq:
    try:
        coeffs = [Fraction(a) for a in args]
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"bad polynomial coefficients: {args}") from None
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs)

    def closed(y):
        B = backend()
        acc = B.num(0)
        for c in reversed(coeffs):
            acc = (acc + B.num(c)) * y
        return acc
    C = float(max((abs(c) for c in coeffs), default=0))
    return CoeffSeq(lambda n: coeffs[n - 1] if n <= deg else Fraction(0), (C, 0.0),
                    "poly:" + ",".join(map(str, coeffs)), closed_form=closed, support=deg)


def parse_coeff(text: str) -> CoeffSeq:
    """Coefficient sequence c(n), n >= 1, from its text spec (see module docstring)."""
    head, args = _split(text)
    B = backend()
    if head == "poly":
        if not args:
            raise DomainError("poly needs at least one coefficient")
        return _poly(args)
    if args and head in ("delta", "one", "id", "mu", "phi", "invfact"):
        raise DomainError(f"{head} takes no arguments")
    if head == "delta":
        return CoeffSeq(lambda n: 1 if n == 1 else 0, (1.0, 0.0), "delta",
                        closed_form=lambda y: y, support=1)
    if head == "one":
        return CoeffSeq(lambda n: 1, (1.0, 0.0), "one", closed_form=lambda y: y / (1 - y))
    if head == "id":
        return CoeffSeq(lambda n: n, (1.0, 1.0), "id", closed_form=lambda y: y / (1 - y) ** 2)
    if head == "mu":
        return CoeffSeq(mobius, (1.0, 0.0), "mu")
    if head == "phi":
        return CoeffSeq(euler_phi, (1.0, 1.0), "phi")
    if head == "invfact":
        return CoeffSeq(lambda n: Fraction(1, math.factorial(n)), (1.0, 0.0), "invfact",
                        closed_form=lambda y: B.expm1(y))
    if len(args) != 1:
        raise DomainError(f"unknown or malformed coefficient spec {text!r}")
    v = _num(args[0])
    vb = B.num(v)
    if head == "power":
        if v < 0:
            raise DomainError("power:s needs s >= 0")
        tail = (lambda N: power_tail(vb, N + 1)) if v > 1 else None
        return CoeffSeq(lambda n: B.num(n) ** (-vb), (1.0, 0.0), f"power:{args[0]}", tail_sum=tail)
    if head == "exp":
        if not v > 0:
            raise DomainError("exp:c needs c > 0")
        r = B.exp(-vb)
        return CoeffSeq(lambda n: B.exp(-n * vb), (1.0, 0.0), f"exp:{args[0]}",
                        closed_form=lambda y: r * y / (1 - r * y),
                        tail_sum=lambda N: B.exp(-(N + 1) * vb) / -B.expm1(-vb))
    if head == "cos":
        return CoeffSeq(lambda n: B.cos(2 * n * vb), (1.0, 0.0), f"cos:{args[0]}")
    raise DomainError(f"unknown coefficient spec {text!r}")


def coeff_total(text: str):
    """Closed-form sum_{n>=1} c(n) where one is available, else None."""
    head, args = _split(text)
    B = backend()
    if head == "poly":
        return B.fsum(B.num(Fraction(a)) for a in args)
    if head == "delta":
        return B.num(1)
    if head == "power" and len(args) == 1 and _num(args[0]) > 1:
        return zeta(B.num(_num(args[0])))
    if head == "exp" and len(args) == 1 and _num(args[0]) > 0:
        return 1 / B.expm1(B.num(_num(args[0])))
    if head == "invfact":
        return B.exp(B.num(1)) - 1
    return None


def parse_char(text: str) -> PeriodicChar:
    """Periodic sequence from its text spec (see module docstring)."""
    head, args = _split(text)
    if head == "one" and not args:
        return constant_character(1)
    if head == "zero" and not args:
        return PeriodicChar(1, (0,), "zero")
    if head == "alt" and not args:
        return alternating_character()
    if head == "legendre5" and not args:
        return legendre_character(5)
    try:
        ints = [int(a) for a in args] if head in ("x2", "legendre") else None
        if head == "x2" and len(ints) == 3:
            return x2_character(*ints)
        if head == "legendre" and len(ints) == 1:
            return legendre_character(ints[0])
        if head == "periodic" and args:
            return periodic_from_values([Fraction(a) for a in args])
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"malformed periodic spec {text!r}") from None
    raise DomainError(f"unknown periodic spec {text!r}")

