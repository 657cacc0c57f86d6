"""Polynomials over Z_b.

Coefficients are stored constant term first with trailing zeros stripped,
so the zero polynomial has an empty coefficient tuple and degree -1.
Division needs an invertible leading coefficient, which always holds for
prime ``b``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from ._validation import check_base

__all__ = ["PolyZb", "is_irreducible", "monic_polynomials", "smallest_irreducible"]


def _strip(coeffs: Sequence[int]) -> tuple[int, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class PolyZb:
    base: int
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        b = check_base(self.base)
        object.__setattr__(self, "coeffs", _strip(int(c) % b for c in self.coeffs))

    @classmethod
    def from_int(cls, k: int, b: int) -> "PolyZb":
        """Identify ``k = kappa_0 + kappa_1 b + ...`` with ``kappa_0 + kappa_1 x + ...``."""
        coeffs = []
        while k:
            k, d = divmod(k, b)
            coeffs.append(d)
        return cls(b, coeffs)

    @classmethod
    def monomial(cls, degree: int, b: int, coeff: int = 1) -> "PolyZb":
        return cls(b, (0,) * degree + (coeff,))

    def to_int(self) -> int:
        k = 0
        for c in reversed(self.coeffs):
            k = k * self.base + c
        return k

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def padded(self, n: int) -> tuple[int, ...]:
        """The first ``n`` coefficients, zero padded."""
        return tuple(self.coeff(i) for i in range(n))

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.base
        return acc

    def _coerce(self, other) -> "PolyZb":
        if isinstance(other, PolyZb):
            if other.base != self.base:
                raise ValueError(f"base mismatch: {self.base} vs {other.base}")
            return other
        if isinstance(other, int):
            return PolyZb(self.base, (other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyZb(self.base, [self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return PolyZb(self.base, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return PolyZb(self.base)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, c in enumerate(other.coeffs):
                    out[i + j] += a * c
        return PolyZb(self.base, out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by the zero polynomial")
        b = self.base
        inv = pow(other.lead, -1, b)
        rem = list(self.coeffs)
        dq = other.degree
        quot = [0] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] * inv % b
            if c:
                quot[i - dq] = c
                for j, d in enumerate(other.coeffs):
                    rem[i - dq + j] = (rem[i - dq + j] - c * d) % b
        return PolyZb(b, quot), PolyZb(b, rem[:dq] if dq > 0 else ())

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __repr__(self) -> str:
        if self.is_zero():
            return f"PolyZb({self.base}, 0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mono if c == 1 and i else (str(c) if i == 0 else f"{c}*{mono}"))
        return f"PolyZb({self.base}, {' + '.join(terms)})"


def monic_polynomials(degree: int, b: int) -> Iterator[PolyZb]:
    """All monic polynomials of the given degree, ordered by ``to_int``."""
    for low in itertools.product(range(b), repeat=degree):
        yield PolyZb(b, tuple(reversed(low)) + (1,))


def is_irreducible(p: PolyZb) -> bool:
    """Trial division by every monic polynomial of degree up to ``deg(p) // 2``."""
    if p.degree < 1:
        raise ValueError("irreducibility is defined for degree >= 1")
    for d in range(1, p.degree // 2 + 1):
        for f in monic_polynomials(d, p.base):
            if (p % f).is_zero():
                return False
    return True


def smallest_irreducible(degree: int, b: int) -> PolyZb:
    """First irreducible monic polynomial of the given degree in ``to_int`` order."""
    for f in monic_polynomials(degree, b):
        if is_irreducible(f):
            return f
    raise ValueError(f"no irreducible polynomial of degree {degree} over Z_{b}")
