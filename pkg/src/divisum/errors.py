"""Exception hierarchy shared by all modules."""


class DivisumError(Exception):
    pass


class DomainError(DivisumError, ValueError):
    """An argument lies outside the region where the quantity is defined."""


class PoleError(DomainError):
    pass


class CapacityError(DivisumError, ValueError):
    pass


class InputContractError(DivisumError, ValueError):
    """Inputs violate a stated relation between them (e.g. a divisor-sum law)."""


class SaturationError(DivisumError):
    """A truncation or quadrature budget ran out before the tolerance was met.

    Carries the best available partial value and the bound that could not be
    certified.
    """

    def __init__(self, message: str, partial=None, bound=None, depth=None):
        super().__init__(message)
        self.partial = partial
        self.bound = bound
        self.depth = depth
