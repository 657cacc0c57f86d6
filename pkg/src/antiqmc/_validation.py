"""Input validation helpers shared by the public modules and estimators."""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.utils import check_array


class GuardError(ValueError):
    """Raised when a request would exceed a configured size or resolution guard."""


def check_base(b) -> int:
    if not isinstance(b, numbers.Integral) or b < 2:
        raise ValueError(f"base must be an integer >= 2, got {b!r}")
    return int(b)


def is_prime(b: int) -> bool:
    if b < 2:
        return False
    i = 2
    while i * i <= b:
        if b % i == 0:
            return False
        i += 1
    return True


def check_prime(b) -> int:
    b = check_base(b)
    if not is_prime(b):
        raise ValueError(f"base must be prime for polynomial arithmetic, got {b}")
    return b


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if not isinstance(value, numbers.Integral) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_points(X, n_dims: int | None = None) -> np.ndarray:
    """Validate a 2-d array of points in the closed unit cube."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if n_dims is not None and X.shape[1] != n_dims:
        raise ValueError(f"expected points with {n_dims} coordinates, got {X.shape[1]}")
    if X.size and (X.min() < 0.0 or X.max() > 1.0):
        raise ValueError("points must lie in [0, 1]^s")
    return X


def check_guard(size: int, limit: int, what: str) -> None:
    if size > limit:
        raise GuardError(f"{what}: {size} exceeds the limit of {limit}")
