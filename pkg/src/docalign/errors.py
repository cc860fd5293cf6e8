"""Exception types shared across the toolkit."""


class DocalignError(Exception):
    """Base class for every error raised by this package."""


class MalformedUrlError(DocalignError, ValueError):
    """URL cannot be split into a usable host and tail."""


class UntaggableError(DocalignError, ValueError):
    """Document has no content to classify."""


class ConfigurationError(DocalignError, ValueError):
    """Invalid profiles, pattern table, or settings."""


class EmptyDocumentError(DocalignError, ValueError):
    """Operation needs at least one sentence or vector."""


class UndefinedSimilarityError(DocalignError, ValueError):
    """Cosine similarity requested for a zero vector."""


class UndefinedMetricError(DocalignError, ValueError):
    """Metric denominator is empty (for example an empty gold set)."""


class InsufficientDataError(DocalignError, ValueError):
    """Agreement table has too few units or ratings."""


class MissingVectorError(DocalignError, LookupError):
    """A required sentence or document vector is absent from the store."""


class EmbeddingFormatError(DocalignError, ValueError):
    """Embedding file is corrupt or inconsistent with its header."""


class DataError(DocalignError, ValueError):
    """Input file exists but its contents violate the expected schema."""
