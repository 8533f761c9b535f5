"""Exception types shared across the package."""


class RainbowFreeError(Exception):
    """Base class for all errors raised by this library."""


class InvalidInputError(RainbowFreeError):
    """An argument violates a documented precondition."""


class CapacityError(RainbowFreeError):
    """An operation would exceed its configured enumeration budget.

    Raised instead of silently approximating or truncating.
    """


class ParseError(RainbowFreeError):
    """Instance text is malformed. Carries the 1-based offending line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InconsistencyError(RainbowFreeError):
    """An edge set claimed to be a full rainbow-free family failed validation."""

    def __init__(self, check: str, detail: str = ""):
        super().__init__(f"{check}: {detail}" if detail else check)
        self.check = check


class NotBracketedError(RainbowFreeError):
    """A crossing estimate was requested from a curve that never straddles 1/2."""
