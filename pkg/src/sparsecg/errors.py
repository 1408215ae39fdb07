"""Exception hierarchy for the sparsecg library."""


class SparsecgError(Exception):
    """Base class for all library errors."""


class ConfigurationError(SparsecgError):
    """Invalid configuration value or unknown wavelet family."""


class ConstructionError(SparsecgError):
    """Dictionary construction produced a set that does not span the segment space."""


class DimensionError(SparsecgError):
    """Vector length does not match the dictionary's segment length."""


class SpanExhaustedError(SparsecgError):
    """Every remaining candidate atom lies in the span of the selected atoms."""


class DegenerateAtomError(SparsecgError):
    """The requested atom is (numerically) inside the selected span."""


class IngestionError(SparsecgError):
    """Unreadable or malformed input record.

    ``offset`` carries the byte or line position where parsing failed,
    when known.
    """

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class CorruptModelError(SparsecgError):
    """Quantized model references atoms outside the dictionary or is inconsistent."""


class CorruptContainerError(SparsecgError):
    """Malformed encoded container.

    ``position`` carries the byte offset in the container where decoding
    failed, when known.
    """

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class CorruptStreamError(SparsecgError):
    """Entropy-coded payload cannot be decoded with its table."""


class UndefinedMetricError(SparsecgError):
    """Metric denominator vanishes (zero-norm or constant reference signal)."""
