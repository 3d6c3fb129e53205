"""Exception hierarchy. CLI exit codes: ValidationError -> 2, BudgetError -> 3."""


class SemiclassError(Exception):
    """Base class for all package errors."""


class ValidationError(SemiclassError):
    """Bad input: wrong model, dimension, parity, configuration."""


class BudgetError(SemiclassError):
    """A configured enumeration/size/iteration budget was exceeded."""


class NonQuantizableMatrixError(ValidationError):
    """Cat matrix violates the parity (checkerboard) condition or t12 = 0."""


class QuantizationFailureError(SemiclassError):
    """Constructed matrix failed its unitarity check (convention bug)."""


class UnsupportedModelError(ValidationError):
    """Operation not defined for this map family (e.g. kicked-map orbits)."""


class DimensionError(ValidationError):
    """Dimension constraint violated (odd baker N, register too small, ...)."""


class InsufficientDataError(ValidationError):
    """Not enough traces to run the requested reconstruction."""


class ResolutionError(ValidationError):
    """Requested resolution is unattainable (N_max too small, too few bits)."""


class RegisterOverlapError(ValidationError):
    """A gate target lies inside its own control register."""


class IrreversibilityError(ValidationError):
    """A basis function is not injective on the active label space."""


class EmptyTargetError(SemiclassError):
    """Amplitude amplification target has zero overlap with the state."""


class InconsistencyError(SemiclassError):
    """An internal cross-check failed (e.g. U^n not proportional to identity)."""


class PipelineCheckpointError(SemiclassError):
    """A pipeline step checkpoint failed; carries the step label."""

    def __init__(self, step: str, message: str):
        super().__init__(f"checkpoint {step}: {message}")
        self.step = step
