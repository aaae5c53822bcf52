"""Exception hierarchy shared by every module of the package."""


class HollowSpecError(Exception):
    """Base class for all errors raised by hollowspec."""


class ZeroPolynomial(HollowSpecError, ValueError):
    pass


class EndpointRoot(HollowSpecError, ValueError):
    pass


class NonPositive(HollowSpecError, ValueError):
    pass


class PerfectSquare(HollowSpecError, ValueError):
    """Raised by ``threshold_sqrt`` for perfect squares; use ``threshold_from_rational``."""

    def __init__(self, n: int, root: int):
        super().__init__(f"{n} is the perfect square {root}**2; use threshold_from_rational({root})")
        self.n = n
        self.root = root


class InvalidThreshold(HollowSpecError, ValueError):
    pass


class NotHollowSymmetric(HollowSpecError, ValueError):
    pass


class EmptySubset(HollowSpecError, ValueError):
    pass


class LengthMismatch(HollowSpecError, ValueError):
    pass


class OrderMismatch(HollowSpecError, ValueError):
    pass


class InvalidGraph(HollowSpecError, ValueError):
    pass


class DomainMismatch(HollowSpecError, ValueError):
    pass


class EntryTooLarge(HollowSpecError, ValueError):
    pass


class NotBlowup(HollowSpecError, ValueError):
    pass


class PreconditionViolated(HollowSpecError, ValueError):
    pass


class CapExceeded(HollowSpecError, ValueError):
    pass


class ParseError(HollowSpecError, ValueError):
    """Malformed input file; ``source`` and ``line`` locate the problem."""

    def __init__(self, message: str, source: str = "<input>", line: int | None = None):
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line


class ThresholdParseError(HollowSpecError, ValueError):
    pass
