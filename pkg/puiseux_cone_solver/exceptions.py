from enum import Enum


class SolverFailureReasonsEnum(str, Enum):
    INVALID_INPUT = "invalid input"
    DIMENSION_MISMATCH = "dimension mismatch"
    NOT_MONIC = "polynomial is not monic in z"
    ZERO_CONSTANT_TERM = "constant coefficient is zero"
    NOT_AN_S_CONE = "not an s-cone"
    NOT_A_UNIT = "series is not a unit"
    UNSPLITTABLE = "characteristic equation does not split"
    MULTIPLE_ROOT = "multiple root"
    CAP_EXCEEDED = "iteration cap exceeded"
    MAX_STEPS_EXCEEDED = "maximum number of steps exceeded"
    EXACTNESS_VIOLATION = "exactness violation"
    PRECISION_NOT_REACHED = "precision not reached"
    ZETA_RESIDUE = "orbit product is not zeta-free"


class ServerFailureReasonsEnum(str, Enum):
    INTERNAL_SERVER_ERROR = "internal server error"
    INVALID_REQUEST = "invalid request"
    NO_SUCH_ENDPOINT = "no such endpoint"


class PuiseuxError(ValueError):
    reason = SolverFailureReasonsEnum.INVALID_INPUT


class DimensionMismatchError(PuiseuxError):
    reason = SolverFailureReasonsEnum.DIMENSION_MISMATCH


class NotUnitriangularError(PuiseuxError):
    pass


class ZeroGeneratorError(PuiseuxError):
    pass


class SupportOutsideQuadrantError(PuiseuxError):
    pass


class NotInConeError(PuiseuxError):
    pass


class IterationCapExceeded(PuiseuxError):
    reason = SolverFailureReasonsEnum.CAP_EXCEEDED


class NotSConeError(PuiseuxError):
    reason = SolverFailureReasonsEnum.NOT_AN_S_CONE


class NotAUnitError(PuiseuxError):
    reason = SolverFailureReasonsEnum.NOT_A_UNIT


class UnsplittableError(PuiseuxError):
    reason = SolverFailureReasonsEnum.UNSPLITTABLE

    def __init__(self, message: str, factor=None, roots=()):
        super().__init__(message)
        self.factor = factor
        self.roots = tuple(roots)


class MultipleRootError(PuiseuxError):
    reason = SolverFailureReasonsEnum.MULTIPLE_ROOT


class MaxStepsExceeded(PuiseuxError):
    reason = SolverFailureReasonsEnum.MAX_STEPS_EXCEEDED


class ExactnessViolation(PuiseuxError):
    reason = SolverFailureReasonsEnum.EXACTNESS_VIOLATION


class ResidualBelowPrecision(PuiseuxError):
    reason = SolverFailureReasonsEnum.PRECISION_NOT_REACHED


class ZetaResidueError(PuiseuxError):
    reason = SolverFailureReasonsEnum.ZETA_RESIDUE


class NotMonicError(PuiseuxError):
    reason = SolverFailureReasonsEnum.NOT_MONIC


class ZeroConstantTermError(PuiseuxError):
    reason = SolverFailureReasonsEnum.ZERO_CONSTANT_TERM


class EquationSyntaxError(PuiseuxError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
