"""Base-b digit arithmetic.

Points of the group ``G = Z_b x Z_b x ...`` are stored at a finite depth
``W`` together with a constant tail digit that repeats forever after
position ``W``.  This is enough to represent elements such as
``e_l = (l, l, l, ...)`` and ``z + e_l`` exactly.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._validation import check_base

__all__ = [
    "DigitVector",
    "IndexExpansion",
    "default_depth",
    "expand",
    "recompose",
    "delta",
    "mu_alpha",
    "pi",
    "pi_exact",
    "sigma",
    "gadd",
    "gsub",
    "zero",
    "constant",
    "truncate_poly",
]


def default_depth(b: int) -> int:
    """Number of base-b digits that fit in a binary64 mantissa."""
    check_base(b)
    return int(math.floor(53 * math.log(2) / math.log(b) + 1e-12))


@dataclass(frozen=True)
class IndexExpansion:
    """Base-b expansion ``k = digits[0] + digits[1] b + ...`` of minimal length."""

    k: int
    base: int
    digits: tuple[int, ...]

    def recompose(self) -> int:
        return recompose(self.digits, self.base)

    def positions(self) -> tuple[int, ...]:
        """1-based positions ``a_1 > a_2 > ...`` of the nonzero digits."""
        return tuple(i + 1 for i in reversed(range(len(self.digits))) if self.digits[i])


def expand(k: int, b: int) -> IndexExpansion:
    check_base(b)
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    digits = []
    rest = int(k)
    while rest:
        rest, d = divmod(rest, b)
        digits.append(d)
    return IndexExpansion(int(k), b, tuple(digits))


def recompose(digits: Sequence[int], b: int) -> int:
    k = 0
    for d in reversed(digits):
        k = k * b + int(d)
    return k


def _scalar_delta(k: int, b: int) -> int:
    return sum(expand(k, b).digits) % b


def delta(k, b: int) -> int:
    """Sum of base-b digits modulo b; vectors add componentwise mod b."""
    check_base(b)
    if isinstance(k, numbers.Integral):
        return _scalar_delta(int(k), b)
    return sum(_scalar_delta(int(kj), b) for kj in k) % b


def _scalar_mu(k: int, alpha: int, b: int) -> int:
    return sum(expand(k, b).positions()[:alpha])


def mu_alpha(k, alpha: int, b: int) -> int:
    """Sum of the ``alpha`` largest 1-based positions of nonzero digits of k.

    ``mu_alpha(0) == 0``.  For an index vector the values are summed over
    coordinates.
    """
    check_base(b)
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if isinstance(k, numbers.Integral):
        return _scalar_mu(int(k), alpha, b)
    return sum(_scalar_mu(int(kj), alpha, b) for kj in k)


@dataclass(frozen=True)
class DigitVector:
    """Element of G truncated to ``len(digits)`` digits plus a constant tail.

    ``digits[i]`` is the coefficient of ``b**-(i+1)``; every position past the
    explicit window carries ``tail``.
    """

    base: int
    digits: tuple[int, ...]
    tail: int = 0

    def __post_init__(self):
        check_base(self.base)
        digits = tuple(int(d) for d in self.digits)
        object.__setattr__(self, "digits", digits)
        if not digits:
            raise ValueError("a DigitVector needs depth >= 1")
        if any(d < 0 or d >= self.base for d in digits):
            raise ValueError(f"digits must lie in 0..{self.base - 1}")
        if not 0 <= self.tail < self.base:
            raise ValueError(f"tail must lie in 0..{self.base - 1}")

    @property
    def depth(self) -> int:
        return len(self.digits)

    def digit(self, i: int) -> int:
        """0-based digit ``i``; positions past the window return the tail."""
        return self.digits[i] if i < len(self.digits) else self.tail

    def key(self) -> tuple:
        return self.digits + (self.tail,)

    def __add__(self, other: "DigitVector") -> "DigitVector":
        return gadd(self, other)

    def __sub__(self, other: "DigitVector") -> "DigitVector":
        return gsub(self, other)

    def __float__(self) -> float:
        return pi(self)


def zero(b: int, depth: int | None = None) -> DigitVector:
    depth = default_depth(b) if depth is None else depth
    return DigitVector(b, (0,) * depth, 0)


def constant(l: int, b: int, depth: int | None = None) -> DigitVector:
    """The element ``e_l = (l, l, l, ...)``."""
    depth = default_depth(b) if depth is None else depth
    return DigitVector(b, (l,) * depth, l)


def _check_compatible(z: DigitVector, w: DigitVector) -> None:
    if z.base != w.base or z.depth != w.depth:
        raise ValueError(
            f"cannot combine DigitVectors with (base, depth) {(z.base, z.depth)} "
            f"and {(w.base, w.depth)}"
        )


def gadd(z: DigitVector, w: DigitVector) -> DigitVector:
    _check_compatible(z, w)
    b = z.base
    return DigitVector(
        b,
        tuple((x + y) % b for x, y in zip(z.digits, w.digits)),
        (z.tail + w.tail) % b,
    )


def gsub(z: DigitVector, w: DigitVector) -> DigitVector:
    _check_compatible(z, w)
    b = z.base
    return DigitVector(
        b,
        tuple((x - y) % b for x, y in zip(z.digits, w.digits)),
        (z.tail - w.tail) % b,
    )


def pi_exact(z: DigitVector) -> Fraction:
    """Projection to [0, 1] as an exact rational; the tail is a geometric series."""
    b, W = z.base, z.depth
    head = Fraction(recompose(z.digits[::-1], b), b**W)
    return head + Fraction(z.tail, (b - 1) * b**W)


def pi(z: DigitVector) -> float:
    return float(pi_exact(z))


def sigma(x, b: int, depth: int | None = None) -> DigitVector:
    """First ``depth`` digits of the unique b-adic expansion of ``x``.

    For ``x < 1`` the terminating expansion is used and the tail is 0; for
    ``x == 1`` every digit, including the tail, is ``b - 1``.
    """
    check_base(b)
    depth = default_depth(b) if depth is None else depth
    xf = Fraction(x)
    if xf < 0 or xf > 1:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if xf == 1:
        return constant(b - 1, b, depth)
    scaled = math.floor(xf * b**depth)
    digits = []
    for _ in range(depth):
        scaled, d = divmod(scaled, b)
        digits.append(d)
    return DigitVector(b, tuple(reversed(digits)), 0)


def truncate_poly(k: int, n: int, b: int):
    """Polynomial ``kappa_0 + kappa_1 x + ... + kappa_{n-1} x^{n-1}`` over Z_b."""
    from .poly import PolyZb

    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return PolyZb(b, expand(k, b).digits[:n])
