class GapSolverException(Exception):
    """Base exception for the gap solver."""

    exit_code: int = 1
    detail: str = "Gap solver failure"

    def __init__(self, message: str | None = None, **context):
        super().__init__(message or self.detail)
        self.message = message or self.detail
        self.context = context


class ConfigurationError(GapSolverException):
    """Run configuration could not be loaded or validated."""

    exit_code = 2
    detail = "Invalid run configuration"


class InvalidParameter(GapSolverException):
    """A physical parameter is outside its admissible range."""

    exit_code = 2
    detail = "Invalid model parameter"


class CutoffOrderViolation(GapSolverException):
    """Cutoff is not below the Debye energy."""

    exit_code = 2
    detail = "Cutoff must be smaller than the Debye energy"


class CouplingOrderViolation(GapSolverException):
    """Lower coupling bound is not below the upper one."""

    exit_code = 2
    detail = "Coupling bounds must satisfy 0 < u1 < u2"


class KernelOutOfBand(GapSolverException):
    """Kernel leaves the open coupling band on the quadrature grid."""

    exit_code = 2
    detail = "Kernel is not strictly pinched between the coupling bounds"


class ModelValidationError(GapSolverException):
    """Model validation produced one or more violations."""

    exit_code = 2
    detail = "Model validation failed"

    def __init__(self, errors: list[GapSolverException]):
        super().__init__("; ".join(error.message for error in errors), errors=errors)
        self.errors = errors


class OutOfDomain(GapSolverException):
    """Kernel queried outside the energy interval."""

    exit_code = 2
    detail = "Kernel argument outside the energy interval"


class DegenerateInterval(GapSolverException):
    """Quadrature interval is empty or reversed."""

    exit_code = 2
    detail = "Integration interval is degenerate"


class LengthMismatch(GapSolverException):
    """Sample vector does not match the quadrature rule."""

    exit_code = 1
    detail = "Sample count does not match node count"


class RadicandNegative(GapSolverException):
    """Zero-temperature closed form leaves its domain."""

    exit_code = 3
    detail = "Closed-form gap radicand is negative"


class NoRoot(GapSolverException):
    """Bracketed root search has no sign change."""

    exit_code = 3
    detail = "No root inside the bracket"


class NoCertifiedWindow(GapSolverException):
    """No window start gives a contraction constant below the threshold."""

    exit_code = 3
    detail = "No certified temperature window"


class PowerIterationStalled(GapSolverException):
    """Dominant eigenvalue did not settle."""

    exit_code = 3
    detail = "Power iteration did not converge"


class NotConverged(GapSolverException):
    """Picard iteration hit its iteration cap."""

    exit_code = 4
    detail = "Picard iteration did not converge"


class GridTooCoarse(GapSolverException):
    """Temperature grid is too small for the thermodynamic pipeline."""

    exit_code = 4
    detail = "Temperature grid too coarse"


class MissingTemperatures(GapSolverException):
    """Surface lacks temperatures required by a derivative or fit."""

    exit_code = 4
    detail = "Required temperatures missing from the surface"


class FitIllConditioned(GapSolverException):
    """Least-squares fit of the critical expansion is ill conditioned."""

    exit_code = 4
    detail = "Critical expansion fit is ill conditioned"
