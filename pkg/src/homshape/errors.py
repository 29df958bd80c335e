"""Exception hierarchy.

The CLI maps these onto exit codes: input/schema problems exit 2,
numerical degeneracies exit 3, invariant-check failures exit 1.
"""


class HomshapeError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(HomshapeError):
    """Unknown mode, bad flag combination, or invalid parameter value."""


class InputError(HomshapeError):
    """Malformed input data: bad shapes, schema violations, grid mismatches."""


class InvalidTangentError(InputError):
    """Vector violates the tangency constraint at its base point."""


class InvalidWarpError(InputError):
    """Reparametrisation map is not monotone or does not fix endpoints."""


class InvalidArcError(InputError):
    """Dynamic-programming arc indices are out of order."""


class NumericalDegeneracyError(HomshapeError):
    """A computation hit a genuine singularity of the method."""


class DegenerateSegmentError(NumericalDegeneracyError):
    """Consecutive curve samples are coincident or antipodal."""

    def __init__(self, index: int, reason: str):
        self.index = index
        self.reason = reason
        super().__init__(f"segment {index}: {reason}")


class DegenerateVelocityError(NumericalDegeneracyError):
    """A transform value is zero where a nonzero velocity is required."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"zero velocity value at segment {index}")


class LiftFailureError(NumericalDegeneracyError):
    """The nonlinear segment solve did not converge."""


class DegenerateIntermediateError(NumericalDegeneracyError):
    """A convex combination of transforms passed through zero."""

    def __init__(self, theta: float, index: int):
        self.theta = theta
        self.index = index
        super().__init__(
            f"interpolated transform vanishes at theta={theta} on segment {index}"
        )


class BaseMismatchError(InputError):
    """Curves do not share the start point required for interpolation."""


class InvariantFailure(HomshapeError):
    """A self-check invariant was violated."""
