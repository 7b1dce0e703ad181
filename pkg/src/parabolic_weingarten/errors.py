"""Exception hierarchy for the package."""


class WeingartenError(Exception):
    """Base class for all errors raised by parabolic_weingarten."""


class DegenerateRelation(WeingartenError, ValueError):
    """The relation a*k1 + b*k2 = c has a = b = 0."""


class TrivialSpec(WeingartenError, ValueError):
    """Umbilical or constant-mean-curvature relation; nothing to classify."""


class UnsupportedSpec(WeingartenError, ValueError):
    """The tracer cannot integrate this kind of relation."""


class SingularVerticalTangent(WeingartenError, ArithmeticError):
    """cos(theta) vanished in the constant-Gauss-curvature closure."""


class NonpositiveHeight(WeingartenError, ArithmeticError):
    """z <= 0: the state left the upper half-space."""


class NotAnExtremum(WeingartenError, ValueError):
    """The requested point is not a critical point of z(s)."""


class OutOfDomain(WeingartenError, ValueError):
    """Arc parameter outside the maximal domain of the closed-form profile."""


class Undefined(WeingartenError, ValueError):
    """Quantity is not defined for this curvature value."""


class OutOfRange(WeingartenError, ValueError):
    """Curvature value outside the range where the formula applies."""


class NoBoundaryContact(WeingartenError, ValueError):
    """The requested curve end did not terminate on the ideal boundary."""


class NotPeriodic(WeingartenError, ValueError):
    """No translation period could be confirmed on the traced curve."""


class EmptyCurve(WeingartenError, ValueError):
    """An operation needed at least one sample."""
