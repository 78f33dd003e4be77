"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class AskeyWilsonError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameter(AskeyWilsonError, ValueError):
    """A multiplicity value or the base ``p`` is zero or otherwise unusable."""


class BackendUnsupported(AskeyWilsonError, TypeError):
    """The requested operation has no meaning in the chosen scalar backend."""


class DivergentProduct(AskeyWilsonError, ArithmeticError):
    """An infinite q-shifted factorial was requested with ``|q| >= 1``."""


class BackendMismatch(AskeyWilsonError, TypeError):
    """Two operands live in different scalar backends."""


class NotDivisible(AskeyWilsonError, ArithmeticError):
    """Exact division of Laurent polynomials left a nonzero remainder."""


class EmptyPolynomial(AskeyWilsonError, ValueError):
    """An operation that needs a nonzero polynomial received zero."""


class PoleAtZero(AskeyWilsonError, ZeroDivisionError):
    """Evaluation at ``x = 0`` of a polynomial with negative exponents."""


class UnknownOperator(AskeyWilsonError, KeyError):
    """An operator token or named expression is not recognised."""


class NotSymmetric(AskeyWilsonError, ValueError):
    """Input that must be invariant under ``x -> 1/x`` is not."""


class DegenerateSpectrum(AskeyWilsonError, ArithmeticError):
    """Two eigenvalues that must be distinct coincide."""


class DegenerateParameters(AskeyWilsonError, ArithmeticError):
    """A normalising constant or denominator vanishes at these parameters."""


class EmptyIsotype(AskeyWilsonError, ValueError):
    """The requested isotypic component is the zero space."""


class NormalizationFailure(AskeyWilsonError, ArithmeticError):
    """A polynomial cannot be renormalised because it vanishes at the base point."""


class PoleEvaluation(AskeyWilsonError, ArithmeticError):
    """A weight function was evaluated at one of its poles."""


class ContourUnsupported(AskeyWilsonError, ValueError):
    """Parameters fall outside the regime where the unit circle is a valid contour."""


class QuadratureNotConverged(AskeyWilsonError, ArithmeticError):
    """Node doubling was exhausted before the error estimate met the tolerance."""


class PoleIdentificationFailure(AskeyWilsonError, ArithmeticError):
    """No unique vanishing factor was found at a requested residue point."""
