"""Exception types shared across the package."""


class HeisError(Exception):
    """Base class for all computational errors raised by this package."""


class NotSymmetric(HeisError):
    """Input matrix is asymmetric beyond the repair threshold."""


class NotPositiveDefinite(HeisError):
    """Input matrix is not positive definite."""

    def __init__(self, pivot_index: int):
        self.pivot_index = pivot_index
        super().__init__(f"pivot {pivot_index} is not positive")


class DimensionMismatch(HeisError):
    """Operands have incompatible dimensions."""


class OddDimension(HeisError):
    """An even-dimensional matrix was required."""


class Singular(HeisError):
    """Matrix is singular (or numerically indistinguishable from singular)."""


class EnumerationBudgetExceeded(HeisError):
    """Lattice enumeration visited more candidates than the configured cap."""

    def __init__(self, count: int):
        self.count = count
        super().__init__(f"enumeration budget of {count} candidates exceeded")


class PairingFailure(HeisError):
    """Eigenvalues that must come in equal pairs failed to pair up.

    Signals a numerical-conditioning problem, never a legitimate
    mathematical case.
    """


class NotSimilitude(HeisError):
    """Matrix does not scale the symplectic form by +1 or -1."""


class NotOrthonormal(HeisError):
    """Vectors are not orthonormal for the given metric."""


class UnsupportedPlane(HeisError):
    """Curvature is only available for horizontal and horizontal-central planes."""


class NotHeisenbergType(HeisError):
    """A family member fails the constant-spectrum (Heisenberg type) test."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"family member {index} is not of Heisenberg type")


class NotInGr(HeisError):
    """Matrix is not a scaled-conjugate of an integer unimodular matrix."""


class SameCoset(HeisError):
    """The two representatives differ by a symplectic similitude."""
