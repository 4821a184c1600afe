"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np

from .exceptions import DomainError, ShapeError


def as_float_2d(x, name: str = "array") -> np.ndarray:
    """Coerce ``x`` to a 2D float64 array, rejecting empty or non-2D input."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2D, got shape {arr.shape}")
    if arr.size == 0:
        raise DomainError(f"{name} is empty")
    return arr


def check_same_shape(a: np.ndarray, b: np.ndarray, what: str = "arrays") -> None:
    if a.shape != b.shape:
        raise ShapeError(f"{what} have mismatched shapes {a.shape} vs {b.shape}")


def check_finite(x: np.ndarray, name: str = "array") -> None:
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name} contains NaN or Inf")


def check_nonnegative_scalar(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be >= 0, got {value}")
    return value


def check_positive_scalar(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be > 0, got {value}")
    return value
