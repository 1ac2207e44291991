"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: usage problems exit 2, numerical
non-convergence exits 3, violated invariants exit 4.
"""


class QuatPolyError(Exception):
    """Base class for all package errors."""


class UsageError(QuatPolyError):
    """Bad arguments or malformed input files."""


class NonConvergenceError(QuatPolyError):
    """An iterative solver ran out of iterations."""


class InvariantViolation(QuatPolyError):
    """A mathematical invariant failed beyond its tolerance."""


class UnstableConfigurationError(InvariantViolation):
    """A weighted configuration concentrates half or more of its mass."""


class GenericityError(InvariantViolation):
    """A polygon violates the genericity assumptions of a construction."""


class PairingError(InvariantViolation):
    """Eigenvalues of an embedded Hermitian matrix failed to pair up."""


class InterlacingError(InvariantViolation):
    """A triangular eigenvalue array violates interlacing."""


class ClosureError(InvariantViolation):
    """Polygon edges or Gram data fail the closing condition."""


class ReconstructionError(InvariantViolation):
    """A complex matrix has no quaternionic preimage."""
