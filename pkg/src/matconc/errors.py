"""Exception taxonomy shared across the package."""


class MatconcError(Exception):
    """Base class for all matconc errors."""


class InvalidMatrixError(MatconcError, ValueError):
    """Input is not a well-formed square matrix with finite entries."""


class DomainError(MatconcError, ValueError):
    """Operation applied outside its mathematical domain (e.g. Loewner
    comparison of non-Hermitian matrices)."""


class ConfigError(MatconcError, ValueError):
    """Invalid distribution/experiment configuration."""


class UnsupportedDistributionError(MatconcError, ValueError):
    """Exact enumeration requested for a distribution without finite support."""


class EnumerationSizeError(MatconcError, ValueError):
    """Requested outcome enumeration exceeds the size cap."""


class HypothesisError(MatconcError, RuntimeError):
    """The norm hypotheses the concentration theory needs do not hold for
    the given inputs; the certified bounds are meaningless in this case."""
