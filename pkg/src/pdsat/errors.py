class InvalidInputError(ValueError):
    """Raised when an operation receives arguments violating its precondition."""


class ResourceLimitError(RuntimeError):
    """Raised when a bounded construction would exceed its configured cap."""
