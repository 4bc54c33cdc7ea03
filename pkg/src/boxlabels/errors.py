"""Exception types shared across the package."""


class DecodeError(ValueError):
    """A label or archive is malformed: truncated, bad tag, or
    internally inconsistent field values."""


class EmbeddingError(ValueError):
    """A product embedding fails validation."""


class WidthExceededError(ValueError):
    """Exact decomposition search proved the width hint unattainable."""
