"""Shared exception types."""


class SizeCapError(RuntimeError):
    """Raised when a requested enumeration would exceed the element cap."""

    def __init__(self, needed: int, cap: int, what: str = "group"):
        self.needed = needed
        self.cap = cap
        super().__init__(f"{what} has {needed} elements, exceeding the cap of {cap}")


class TheoremViolation(AssertionError):
    """A verified statement failed on a model that satisfies its hypotheses."""

    def __init__(self, anchor: str, message: str, witness=None):
        self.anchor = anchor
        self.witness = witness
        super().__init__(f"{anchor}: {message}")


class ConfigError(ValueError):
    """Malformed run configuration."""
