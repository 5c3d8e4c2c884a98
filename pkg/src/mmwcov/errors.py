"""Exception types shared across the package.

Configuration problems (bad parameter values, violated preconditions on
inputs) raise ValueError subclasses; numerical failures discovered at run
time (series that refuse to converge, quadratures that cannot reach their
tolerance, results that violate a known bound) raise ArithmeticError
subclasses.  The CLI maps ValueError to exit code 2 and ArithmeticError to
exit code 3.
"""


class ConfigurationError(ValueError):
    """A parameter or configuration object violates its invariants."""


class ConvergenceError(ArithmeticError):
    """A series or iterative scheme failed to converge within its budget."""


class ValidityError(ArithmeticError):
    """A computed quantity violates a bound it is known to satisfy."""
