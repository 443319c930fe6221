"""Exception types shared across the construction."""


class ConstructionError(AssertionError):
    """A construction invariant failed; ``tag`` names the broken law, e.g. ``"(bound)"``."""

    def __init__(self, tag: str, message: str):
        super().__init__(f"{tag} violated: {message}")
        self.tag = tag


class PrecisionError(ArithmeticError):
    """An enclosure is too wide, or the state too shallow, to decide a question."""
