class HorncalcError(Exception):
    """Base class for every failure the library reports on purpose."""

    exit_code = 3


class InvalidInput(HorncalcError, ValueError):
    exit_code = 1


class NotApplicable(HorncalcError):
    """The input is well formed but the requested construction does not apply."""

    exit_code = 2


# --- invalid input ---


class InvalidSystem(InvalidInput):
    pass


class MalformedPayload(InvalidInput):
    pass


class EmptyInput(InvalidInput):
    pass


class NonPositive(InvalidInput):
    pass


class ZeroPolynomial(InvalidInput):
    pass


class NonCollinear(InvalidInput):
    pass


# --- not applicable ---


class SingularMatrix(NotApplicable):
    pass


class NotZonotope(NotApplicable):
    pass


class NotNonconfluent(NotApplicable):
    pass


class NotParallelogram(NotApplicable):
    pass


class NonPolynomialRegime(NotApplicable):
    pass


class SingularPair(NotApplicable):
    pass


class KTooSmall(NotApplicable):
    pass
