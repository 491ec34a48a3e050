"""Exception hierarchy.

Every error carries a machine-readable ``kind`` string (used by the CLI's
error surface) and belongs to one of three exit-code classes.
"""


class KernelURError(Exception):
    kind = "error"
    exit_code = 3

    def __init__(self, detail, **info):
        super().__init__(detail)
        self.detail = detail
        self.info = info

    def to_dict(self):
        out = {"error_kind": self.kind, "detail": self.detail}
        out.update({k: v for k, v in self.info.items() if v is not None})
        return out


class ConfigError(KernelURError):
    kind = "config"
    exit_code = 2


class InvalidGridError(KernelURError):
    kind = "invalid_grid"


class IncompatibleGridsError(KernelURError):
    kind = "incompatible_grids"


class ResolutionError(KernelURError):
    kind = "resolution"


class AliasingRiskError(KernelURError):
    kind = "aliasing_risk"


class GridTooCoarseError(KernelURError):
    kind = "grid_too_coarse"


class DegenerateKernelError(KernelURError):
    """Kernel parameters at a delta-like limit.

    ``limit`` names the analytic map the kernel tends to: ``"identity"``,
    ``"parity"`` or ``"scaling"``.
    """

    kind = "degenerate_kernel"

    def __init__(self, detail, limit=None):
        super().__init__(detail, limit=limit)
        self.limit = limit


class SingularParameterError(KernelURError):
    kind = "singular_parameter"


class NotNormalizedError(KernelURError):
    kind = "not_normalized"


class HermiticityViolationError(KernelURError):
    kind = "hermiticity_violation"


class UnsupportedClosedFormError(KernelURError):
    kind = "unsupported_closed_form"


class InsufficientBasisError(KernelURError):
    kind = "insufficient_basis"


class InvariantFailure(KernelURError):
    kind = "invariant_failure"
    exit_code = 4
