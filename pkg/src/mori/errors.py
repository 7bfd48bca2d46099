"""Exception types shared across the package."""


class MoriError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(MoriError, ValueError):
    """Invalid model parameters (beta <= 0, n < 1, m < 1, bad triple order, ...)."""


class MergeArityError(MoriError, ValueError):
    """Merge width does not divide the tree's vertex count."""


class InvalidOutcomeError(MoriError, ValueError):
    """An outcome is malformed with respect to the state it is applied to."""


class ForestError(MoriError, ValueError):
    """An edge set is not a possible forest."""


class HorizonError(MoriError, ValueError):
    """Horizon below the forest's largest vertex index."""


class CapacityError(MoriError, ValueError):
    """Requested enumeration exceeds the configured cap."""


class UndefinedClusteringError(MoriError, ZeroDivisionError):
    """Clustering coefficient requested on a graph with no adjacent half-edge pairs."""


class InsufficientReplicatesError(MoriError, ValueError):
    """An ensemble needs at least two replicates."""


class InstrumentationError(MoriError, ValueError):
    """Block-tracking preconditions violated (owner not merged by anchor, bad times)."""


class EdgeListParseError(MoriError, ValueError):
    """Malformed edge-list input; carries the 1-based line number."""

    def __init__(self, line_number, message):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")
