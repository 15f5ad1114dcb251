"""Range checks shared by command parameters; each raises a ValidationError."""

from magicbullet.errors import (
    PreconditionError,
    ValidationError,
    WindowTooShortError,
)
from magicbullet.opa import OpaParams, TwoModeSqueezedState
from magicbullet.pairs import MIN_GAMMA_T


def check_g2(value: float) -> None:
    OpaParams(g2=value)


def check_nbar(value: float) -> None:
    TwoModeSqueezedState(nbar=value)


def check_positive(value: float) -> None:
    if not value > 0:
        raise ValidationError(f"must be positive, got {value}")


def check_positive_int(value: int) -> None:
    if value < 1:
        raise ValidationError(f"must be at least 1, got {value}")


def check_non_negative_int(value: int) -> None:
    if value < 0:
        raise ValidationError(f"must be non-negative, got {value}")


def check_not_empty(values: list) -> None:
    if not values:
        raise ValidationError("needs at least one value")


def check_orders(values: list[int]) -> None:
    check_not_empty(values)
    if any(k < 1 for k in values):
        raise ValidationError(f"filter orders must be at least 1, got {values}")


def check_grid(values: list[float]) -> None:
    check_not_empty(values)
    if any(v <= 0 for v in values):
        raise ValidationError("grid points must be positive")


def check_gamma_t(value: float) -> None:
    if not value >= MIN_GAMMA_T:
        raise WindowTooShortError(f"must be at least {MIN_GAMMA_T:g}, got {value}")


def check_odd_modes(value: int) -> None:
    if value < 1 or value % 2 == 0:
        raise PreconditionError(f"must be a positive odd integer, got {value}")
