"""Exception hierarchy shared by all modules.

Every error carries the name of the operation that raised it so that
front-end code (and the CLI) can report provenance without parsing
tracebacks.
"""


class LeakageError(Exception):
    """Base class for all package errors."""

    #: module the raising operation belongs to; subclasses override
    module = "leakage"

    def __init__(self, message, *, operation=None):
        self.operation = operation
        if operation:
            message = f"[{self.module}.{operation}] {message}"
        super().__init__(message)


# operator_core -------------------------------------------------------------

class NonHermitianInput(LeakageError):
    module = "operator_core"


class NotPositiveDefinite(LeakageError):
    module = "operator_core"


class SingularMatrix(LeakageError):
    module = "operator_core"


# spectral_partition --------------------------------------------------------

class NoGapFound(LeakageError):
    module = "spectral_partition"


class UncoveredEigenvalue(LeakageError):
    module = "spectral_partition"


class OverlappingIntervals(LeakageError):
    module = "spectral_partition"


class IndexOutOfRange(LeakageError):
    module = "spectral_partition"


class AnchorOutsideWindow(LeakageError):
    module = "spectral_partition"


class EmptyWindow(LeakageError):
    module = "spectral_partition"


# bloch_solver --------------------------------------------------------------

class ZeroGap(LeakageError):
    module = "bloch_solver"


class GammaBelowThreshold(LeakageError):
    module = "bloch_solver"


class NotConverged(LeakageError):
    module = "bloch_solver"


# schrieffer_wolff ----------------------------------------------------------

class GammaBelowSWThreshold(LeakageError):
    module = "schrieffer_wolff"


class SingularBlockGram(LeakageError):
    module = "schrieffer_wolff"


# bounds --------------------------------------------------------------------

class OutOfDomain(LeakageError):
    module = "bounds"


class NonpositiveBandgap(LeakageError):
    module = "models"


# dynamics ------------------------------------------------------------------

class DegenerateSweep(LeakageError):
    module = "dynamics"


class GroupNotPreserved(LeakageError):
    module = "dynamics"


# cli -----------------------------------------------------------------------

class ConfigInvalid(LeakageError):
    module = "cli"
