"""Divisor sums, Lambert series, theta functions and Mellin transforms, with
an identity catalog that checks each formula through two independent routes."""

from ._backend import backend, precision
from .errors import (CapacityError, DivisumError, DomainError, InputContractError, PoleError,
                     SaturationError)
from .identities import IdentityReport, IdentitySpec, catalog, sweep, verify

__version__ = "0.1.0"

__all__ = [
    "backend", "precision", "catalog", "verify", "sweep", "IdentityReport", "IdentitySpec",
    "DivisumError", "DomainError", "PoleError", "CapacityError", "InputContractError",
    "SaturationError",
]
