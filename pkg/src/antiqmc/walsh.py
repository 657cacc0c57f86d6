"""b-adic Walsh functions on [0, 1]^s and characters on G^s.

Values are carried as exponents of ``omega_b = exp(2 pi i / b)`` so that
character sums can be checked in exact integer arithmetic; conversion to
``complex`` happens only when a caller asks for ``.value``.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ._validation import GuardError, check_base
from .digits import DigitVector, expand

__all__ = [
    "RootOfUnityPower",
    "root_of_unity",
    "wal",
    "wal_vector",
    "chi",
    "chi_vector",
    "wal_exponents_grid",
    "wal_array",
    "walsh_coefficient_oracle",
]

GRID_LIMIT = 1 << 24


def root_of_unity(e, b: int):
    """``omega_b ** e`` as complex; exact for the real cases and quarter turns."""
    e = np.asarray(e) % b
    angles = 2.0 * np.pi * e / b
    out = np.cos(angles) + 1j * np.sin(angles)
    # snap values that are exactly representable
    if b == 2:
        out = np.where(e == 0, 1.0 + 0j, -1.0 + 0j)
    elif b == 4:
        out = np.choose(e, [1 + 0j, 1j, -1 + 0j, -1j])
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class RootOfUnityPower:
    base: int
    exponent: int

    def __post_init__(self):
        check_base(self.base)
        object.__setattr__(self, "exponent", int(self.exponent) % self.base)

    def __mul__(self, other: "RootOfUnityPower") -> "RootOfUnityPower":
        if other.base != self.base:
            raise ValueError("cannot multiply roots of unity of different order")
        return RootOfUnityPower(self.base, self.exponent + other.exponent)

    def conjugate(self) -> "RootOfUnityPower":
        return RootOfUnityPower(self.base, -self.exponent)

    @property
    def value(self) -> complex:
        return root_of_unity(self.exponent, self.base)

    def __complex__(self) -> complex:
        return self.value

    def __abs__(self) -> float:
        return 1.0


def _x_digits(x, b: int, count: int) -> list[int]:
    xf = Fraction(x)
    if xf < 0 or xf > 1:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if xf == 1:
        return [b - 1] * count
    digits = []
    for _ in range(count):
        xf *= b
        d = math.floor(xf)
        digits.append(d)
        xf -= d
    return digits


def wal(k: int, x, b: int) -> RootOfUnityPower:
    """The k-th b-adic Walsh function at ``x`` using its unique expansion."""
    check_base(b)
    kd = expand(k, b).digits
    xd = _x_digits(x, b, len(kd))
    return RootOfUnityPower(b, sum(a * c for a, c in zip(kd, xd)))


def wal_vector(k: Sequence[int], x: Sequence, b: int) -> RootOfUnityPower:
    if len(k) != len(x):
        raise ValueError("index vector and point must have the same dimension")
    e = sum(wal(kj, xj, b).exponent for kj, xj in zip(k, x))
    return RootOfUnityPower(b, e)


def chi(k: int, z: DigitVector) -> RootOfUnityPower:
    """Character ``chi_k`` on G; needs ``k < b**depth`` to be determined."""
    b = z.base
    kd = expand(k, b).digits
    if len(kd) > z.depth:
        raise ValueError(
            f"k={k} has {len(kd)} digits but the DigitVector only carries {z.depth}"
        )
    return RootOfUnityPower(b, sum(a * z.digits[i] for i, a in enumerate(kd)))


def chi_vector(k: Sequence[int], z: Sequence[DigitVector]) -> RootOfUnityPower:
    if len(k) != len(z):
        raise ValueError("index vector and point must have the same dimension")
    b = z[0].base
    return RootOfUnityPower(b, sum(chi(kj, zj).exponent for kj, zj in zip(k, z)))


def wal_exponents_grid(k: int, resolution: int, b: int) -> np.ndarray:
    """Exponents of ``wal_k(j / b**resolution)`` for ``j = 0 .. b**resolution - 1``."""
    kd = expand(k, b).digits
    if len(kd) > resolution:
        raise ValueError(f"k={k} needs resolution >= {len(kd)}")
    j = np.arange(b**resolution, dtype=np.int64)
    e = np.zeros_like(j)
    for i, a in enumerate(kd):
        if a:
            # digit xi_{i+1} of j / b**resolution
            xi = (j // b ** (resolution - 1 - i)) % b
            e += a * xi
    return e % b


def wal_array(k: int, x, b: int) -> np.ndarray:
    """Vectorised ``wal_k`` on a float array, returning complex values.

    Digits come from ``floor(x * b**i)`` in floating point.  Products within
    a few ulps of an integer are snapped to it, so float images of b-adic
    rationals (e.g. ``j / 3**8``) get the digits of the rational itself.
    """
    x = np.asarray(x, dtype=np.float64)
    kd = expand(k, b).digits
    e = np.zeros(x.shape, dtype=np.int64)
    for i, a in enumerate(kd):
        if a:
            y = x * float(b) ** (i + 1)
            r = np.rint(y)
            y = np.where(np.abs(y - r) <= 8 * np.finfo(float).eps * np.maximum(y, 1.0), r, y)
            xi = np.floor(y).astype(np.int64) % b
            xi = np.where(x >= 1.0, b - 1, xi)
            e += a * xi
    return root_of_unity(e % b, b)


def walsh_coefficient_oracle(
    f: Callable[[np.ndarray], np.ndarray],
    k: Sequence[int],
    b: int,
    resolution: int,
) -> complex:
    """Left-endpoint grid quadrature of ``int f(x) conj(wal_k(x)) dx``.

    ``f`` takes an ``(M, s)`` array and returns ``M`` values.  The result is
    exact whenever ``f`` is constant on every cell of the ``b**-resolution``
    grid, e.g. for Walsh polynomials with indices below ``b**resolution``.
    """
    check_base(b)
    k = tuple(int(kj) for kj in k)
    s = len(k)
    if any(kj >= b**resolution for kj in k):
        raise ValueError("all indices must be < b**resolution")
    if b ** (s * resolution) > GRID_LIMIT:
        raise GuardError(
            f"grid of {b}^{s * resolution} cells exceeds the limit of {GRID_LIMIT}"
        )
    n1 = b**resolution
    axis = np.arange(n1) / n1
    grid = np.array(list(itertools.product(axis, repeat=s))) if s > 1 else axis[:, None]
    values = np.asarray(f(grid), dtype=np.complex128).reshape(-1)
    exps = np.zeros(n1**s, dtype=np.int64)
    for j, kj in enumerate(k):
        ej = wal_exponents_grid(kj, resolution, b)
        # itertools.product varies the last coordinate fastest
        exps += np.tile(np.repeat(ej, n1 ** (s - 1 - j)), n1**j)
    weights = root_of_unity(-(exps % b), b)
    return complex(np.sum(values * weights) / n1**s)
