"""Errors raised by the orbit library.

Library code raises these and never returns error values; the management
commands and the API views translate them into exit codes and HTTP 400s.
"""


class NilpotentOrbitError(Exception):
    """Base class for every domain error of the orbit library."""


class FieldArithmeticError(NilpotentOrbitError):
    """Zero where a unit is needed, or a prime that is not odd."""


class QuadraticFormError(NilpotentOrbitError):
    """Singular Gram matrix or degenerate induced form."""


class PartitionError(NilpotentOrbitError):
    """Malformed partition text or an odd size for a symplectic partition."""


class LieAlgebraError(NilpotentOrbitError):
    """Size mismatch, non-nilpotent input, or a matrix outside the Lie algebra."""


class FacetError(NilpotentOrbitError):
    """Inconsistent or dependent equality system, or no generic witness."""
