"""Exception types raised across the package."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested accuracy."""

    def __init__(self, what, estimate, abserr, tol, detail=""):
        self.what = what
        self.estimate = estimate
        self.abserr = abserr
        self.tol = tol
        msg = f"{what}: estimate={estimate!r}, error bound {abserr:.3e} > {tol:.1e}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class UnsupportedLevelError(ValueError):
    """No analytic crossover probability exists for this subchannel level."""


class DegenerateInputError(ValueError):
    """Estimator undefined for this input (e.g. a single-class bit sequence)."""


class InfeasibleRateError(ValueError):
    """A code rate exceeds the capacity of its subchannel."""


class AlistParseError(ValueError):
    """Malformed alist file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
