"""Exception hierarchy shared by all bicyclide modules.

Exit-code mapping used by the CLI: argument errors are handled by argparse
(exit 2), :class:`DomainError`/:class:`PreconditionError` map to exit 3 and
:class:`ConvergenceError` to exit 4.
"""


class BicyclideError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BicyclideError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularityError(DomainError):
    """Evaluation was requested too close to a pole or singular endpoint."""


class PreconditionError(BicyclideError, ValueError):
    """An ordering or geometric precondition of a formula is violated."""


class ConvergenceError(BicyclideError, RuntimeError):
    """An iterative or quadrature scheme failed to converge."""
