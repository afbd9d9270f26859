"""Exception hierarchy shared by every module of the package."""

import numpy as np


class DHRadiusError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(DHRadiusError, ValueError):
    """Matrix or vector has an incompatible shape."""


class NonSquareError(ShapeError):
    pass


class DimensionMismatch(ShapeError):
    pass


class NotHermitianError(DHRadiusError, ValueError):
    pass


class SingularMatrixError(DHRadiusError, np.linalg.LinAlgError):
    """Reciprocal condition number fell below the singularity threshold."""


class SpectrumConflictError(DHRadiusError, np.linalg.LinAlgError):
    """Lyapunov operator is singular: some lambda_i + conj(lambda_j) vanishes."""


class NoSuchMapError(DHRadiusError, ValueError):
    """No structured matrix maps the given vector to the given image."""


class ZeroVectorError(DHRadiusError, ValueError):
    pass


class GenerationFailed(DHRadiusError, RuntimeError):
    pass


class InvalidOverride(DHRadiusError, ValueError):
    pass


class IllPosedQuotient(DHRadiusError, ValueError):
    """Rayleigh quotient has a vanishing denominator but a nonzero numerator."""


class NonDifferentiablePoint(DHRadiusError, ValueError):
    """NEPv matrix requested at a vector in the nullspace of R."""


class LambdaIsEigenvalue(SingularMatrixError):
    """The shift is (numerically) an eigenvalue of (J - R)Q."""


class NotAsymptoticallyStable(DHRadiusError, ValueError):
    pass


class NotStableError(DHRadiusError, ValueError):
    pass


class IllConditioned(DHRadiusError, np.linalg.LinAlgError):
    pass


class NotPositiveDefinite(DHRadiusError, np.linalg.LinAlgError):
    pass


class AllEvaluationsFailed(DHRadiusError, RuntimeError):
    pass


class InnerUnbounded(DHRadiusError, ArithmeticError):
    """``min lambda_max`` over the Hermitian family is numerically zero."""
