"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a kernel."""


class ContractError(ValueError):
    """Caller violated a documented precondition (shapes, signs, variants)."""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge."""

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class ConfigError(ValueError):
    """Invalid experiment configuration; ``key`` names the offending entry."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


class ArtifactIOError(RuntimeError):
    """Reading or writing an output file failed; ``path`` names the file."""

    def __init__(self, message: str, path=None):
        super().__init__(f"{path}: {message}" if path is not None else message)
        self.path = path
