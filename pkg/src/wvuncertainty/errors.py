"""Exception hierarchy.

Everything raised on purpose derives from :class:`UncertaintyError`.  The
``DegenerateInput`` branch groups the conditions under which the weak-value
framework is not defined for the given instance (the CLI maps these to exit
status 3).
"""


class UncertaintyError(Exception):
    pass


class DimensionMismatch(UncertaintyError, ValueError):
    pass


class NonHermitianInput(UncertaintyError, ValueError):
    def __init__(self, message: str, max_asymmetry: float | None = None):
        super().__init__(message)
        self.max_asymmetry = max_asymmetry


class NotNormalized(UncertaintyError, ValueError):
    pass


class NonRealFunction(UncertaintyError, ValueError):
    pass


class ConvergenceFailure(UncertaintyError, ArithmeticError):
    pass


class InternalConsistencyError(UncertaintyError, ArithmeticError):
    """A quantity that is exact in exact arithmetic drifted past round-off."""


class DegenerateInput(UncertaintyError):
    pass


class DegenerateSpectrum(DegenerateInput):
    pass


class ZeroOverlap(DegenerateInput):
    pass


class VanishingFisher(DegenerateInput):
    pass


class NoQuantumComponent(UncertaintyError):
    """Im A_w(B) vanishes on the state, so no normalized commutant exists."""


class DegenerateVariance(UncertaintyError):
    pass


class NotLocallyUnbiased(UncertaintyError):
    pass


class ParseError(UncertaintyError):
    pass


class ValidationError(UncertaintyError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
