"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI prints as
a prefix, e.g. ``E_VALIDATION: trace deviates from 1 by 1.0``.
"""


class FEFError(Exception):
    code = "E_GENERIC"


class DimensionError(FEFError, ValueError):
    code = "E_DIMENSION"


class IndexRangeError(FEFError, IndexError):
    code = "E_INDEX"


class ShapeError(FEFError, ValueError):
    code = "E_SHAPE"


class ValidationError(FEFError, ValueError):
    """A matrix failed one of the density-matrix checks."""

    code = "E_VALIDATION"

    def __init__(self, prop, magnitude, message=None):
        self.prop = prop
        self.magnitude = magnitude
        super().__init__(message or f"{prop} violated by {magnitude:.3g}")


class NumericError(FEFError, ArithmeticError):
    code = "E_NUMERIC"


class PreconditionError(FEFError, ValueError):
    code = "E_PRECONDITION"


class DomainError(FEFError, ValueError):
    """A parameter lies outside the documented physical range."""

    code = "E_DOMAIN"


class ConstructionError(FEFError, RuntimeError):
    code = "E_CONSTRUCTION"


class CertificationError(FEFError, AssertionError):
    """Numeric FEF escaped the analytic sandwich; signals a bug."""

    code = "E_CERTIFICATION"

    def __init__(self, singlet, numeric, bounds):
        self.singlet = singlet
        self.numeric = numeric
        self.bounds = dict(bounds)
        upper = ", ".join(f"{k}={v!r}" for k, v in self.bounds.items())
        super().__init__(f"sandwich violated: f={singlet!r} numeric={numeric!r} {upper}")
