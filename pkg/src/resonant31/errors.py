"""Exception types shared by the library and the CLI."""


class Rejection(ValueError):
    """A computation refused its input; ``reason`` is a short machine tag."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""
