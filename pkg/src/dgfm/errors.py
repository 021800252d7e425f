"""Exception types shared across the package."""


class InvalidTopology(ValueError):
    """Weight matrix violates the doubly stochastic gossip contract."""


class DisconnectedGraph(InvalidTopology):
    """Topology has spectral gap 1, so consensus cannot contract."""


class ShapeError(ValueError):
    """Array argument has the wrong dimensions."""


class SampleIndexError(IndexError):
    """Sample index outside the objective's range."""


class EmptyBatch(ValueError):
    """Estimator batch contains no (sample, direction) pairs."""


class InvalidParameter(ValueError):
    """Scalar parameter outside its admissible range."""


class ParseError(ValueError):
    """Malformed LIBSVM-format input."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvalidPartition(ValueError):
    """Sample-to-agent assignment cannot be built as requested."""


class BudgetExceeded(RuntimeError):
    """Step requested beyond the configured iteration budget."""


class EmptyTrajectory(ValueError):
    """Output selection attempted on a record holding no iterates."""


class NumericFailure(RuntimeError):
    """Non-finite value encountered in a trajectory."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration
