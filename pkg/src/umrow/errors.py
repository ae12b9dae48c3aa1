"""Exception types shared across the workbench."""


class UmrowError(Exception):
    """Base class for every workbench error."""


class CarrierMismatchError(UmrowError):
    """Operands live over different rings/monoid rings."""


class UnsupportedRingError(UmrowError):
    """Operation is not decidable (or not implemented) for this ring."""


class UnsupportedMonoidError(UmrowError):
    """Operation requires a different monoid (e.g. a free one)."""


class PositivityRequiredError(UmrowError):
    """Operation needs a pointed cone / positive monoid."""


class DeskScaleLimitError(UmrowError):
    """Input exceeds the deliberate desk-scale size limits."""


class NotInteriorDualError(UmrowError):
    """Section functional is not strictly positive on the cone."""


class ContainmentError(UmrowError):
    """Polytope argument is not contained where it must be."""


class InvalidTokenError(UmrowError):
    """Elementary generator token with illegal indices for its form."""


class DegenerateDecompositionError(UmrowError):
    """No non-degenerate pyramidal decomposition at the requested apex."""


class ParseError(UmrowError):
    """Malformed JSON input or configuration."""


class PreconditionError(UmrowError):
    """A named precondition of a reduction procedure was violated."""

    def __init__(self, name: str, message: str = ""):
        self.name = name
        super().__init__(message or name)
