class MagicBulletError(Exception):
    """Base class for every error raised by the simulator.

    ``exit_code`` is the process status the CLI maps the error family to.
    """

    exit_code: int = 1


class ValidationError(MagicBulletError, ValueError):
    exit_code = 2


class ConfigError(ValidationError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class InvalidDimensionError(ValidationError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class PreconditionError(ValidationError):
    pass


class AboveThresholdError(ValidationError):
    pass


class WindowTooShortError(ValidationError):
    pass


class OrthogonalProjectionError(ValidationError):
    pass


class IntegrationError(MagicBulletError, ArithmeticError):
    exit_code = 3

    def __init__(self, message: str, achieved: float):
        self.achieved = achieved
        super().__init__(f"{message} (achieved absolute error {achieved:.3e})")


class TruncationError(MagicBulletError):
    exit_code = 4


class CoverageError(TruncationError):
    def __init__(self, message: str, captured: float | None = None):
        self.captured = captured
        if captured is not None:
            message = f"{message} (captured mass {captured:.8f})"
        super().__init__(message)
