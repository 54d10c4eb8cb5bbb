"""Exception hierarchy shared by all modules."""


class BNovikovError(Exception):
    """Base class for every error raised by this package."""


class NonPositiveParameter(BNovikovError, ValueError):
    def __init__(self, name, value=None):
        self.name = name
        self.value = value
        msg = f"parameter {name!r} must be strictly positive"
        if value is not None:
            msg += f" (got {value!r})"
        super().__init__(msg)


class DomainError(BNovikovError, ValueError):
    """Argument outside the open interval (-sqrt(c), sqrt(c))."""


class BifurcationInvalid(BNovikovError):
    def __init__(self, c0, c_min):
        self.c0 = c0
        self.c_min = c_min
        super().__init__(f"bifurcation speed c0={c0!r} does not exceed c_min={c_min!r}")


class NoMinimum(BNovikovError):
    """The effective potential has no interior local minimum."""


class AmplitudeTooLarge(UserWarning):
    """Amplitude beyond the range where the small-amplitude expansion is meaningful."""


class ValidityViolated(BNovikovError):
    def __init__(self, message, z=None):
        self.z = z
        super().__init__(message if z is None else f"{message} at z={z!r}")


class NoConvergence(BNovikovError):
    def __init__(self, iterations, residual, history=None):
        self.iterations = iterations
        self.residual = residual
        self.history = list(history or [])
        super().__init__(
            f"Newton iteration did not converge after {iterations} steps "
            f"(residual {residual:.3e})"
        )


class TruncationTooSmall(BNovikovError, ValueError):
    pass


class EigensolverFailure(BNovikovError):
    pass


class DegenerateScaling(BNovikovError, ValueError):
    pass
