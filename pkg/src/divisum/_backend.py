"""Floating-point backends.

Two numeric contexts sit behind every evaluator: ``standard`` (IEEE double,
via :mod:`math`) and ``high`` (mpmath at 50 significant digits).  The active
one is held in a context variable so concurrent callers do not interfere.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterator

import mpmath

HIGH_DPS = 50


@dataclass(frozen=True)
class Backend:
    name: str
    eps: float
    tiny: Any
    exp: Callable
    expm1: Callable
    log: Callable
    log1p: Callable
    sqrt: Callable
    cos: Callable
    cosh: Callable
    sinh: Callable
    tanh: Callable
    gamma: Callable
    fsum: Callable
    pi: Any
    one: Any
    ctx: Any = None  # mpmath context for the high backend

    def num(self, x) -> Any:
        """Convert ints, Fractions and floats to the backend's real type."""
        if self.name == "standard":
            return float(x)
        if isinstance(x, Fraction):
            return self.one * x.numerator / x.denominator
        return self.one * x


def _make_standard() -> Backend:
    return Backend(
        name="standard", eps=2.220446049250313e-16, tiny=1e-300,
        exp=math.exp, expm1=math.expm1, log=math.log, log1p=math.log1p,
        sqrt=math.sqrt, cos=math.cos, cosh=math.cosh, sinh=math.sinh,
        tanh=math.tanh, gamma=math.gamma, fsum=math.fsum, pi=math.pi, one=1.0,
    )


def _make_high() -> Backend:
    mp = mpmath.MPContext()
    mp.dps = HIGH_DPS
    return Backend(
        name="high", eps=float(mp.eps), tiny=mp.mpf("1e-4000"),
        exp=mp.exp, expm1=mp.expm1, log=mp.log, log1p=mp.log1p,
        sqrt=mp.sqrt, cos=mp.cos, cosh=mp.cosh, sinh=mp.sinh, tanh=mp.tanh,
        gamma=mp.gamma, fsum=mp.fsum, pi=+mp.pi, one=mp.mpf(1), ctx=mp,
    )


STANDARD = _make_standard()
HIGH = _make_high()
_BY_NAME = {"standard": STANDARD, "high": HIGH}


def _default() -> Backend:
    name = os.environ.get("DIVISUM_PRECISION", "standard").strip().lower()
    return _BY_NAME.get(name, STANDARD)


_active: ContextVar[Backend | None] = ContextVar("divisum_backend", default=None)


def backend() -> Backend:
    b = _active.get()
    return b if b is not None else _default()


@contextmanager
def precision(name: str) -> Iterator[Backend]:
    """Run a block under the named backend (``"standard"`` or ``"high"``)."""
    try:
        b = _BY_NAME[name]
    except KeyError:
        raise ValueError(f"unknown precision {name!r}; use 'standard' or 'high'") from None
    token = _active.set(b)
    try:
        yield b
    finally:
        _active.reset(token)
