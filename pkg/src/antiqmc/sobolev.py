"""Reproducing kernel of the weighted Sobolev space of smoothness alpha.

The one-dimensional building block is

    k1(x, y) = sum_{r=1}^{alpha} B_r(x) B_r(y) / (r!)**2
               + (-1)**(alpha + 1) B_{2 alpha}(|x - y|) / (2 alpha)!

and ``K(x, y) = sum_u gamma_u prod_{j in u} k1(x_j, y_j)`` with ``gamma_{} = 1``.
Because every term of ``k1`` integrates to zero in either argument, the
squared worst-case error of an equal-weight rule reduces to
``mean_{x, y in P} K(x, y) - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ._validation import check_guard, check_points, check_positive_int
from .weights import Weights

__all__ = [
    "BernoulliPoly",
    "bernoulli",
    "SobolevSpaceParams",
    "kernel_1d",
    "kernel",
    "kernel_matrix",
    "worst_case_error",
    "worst_case_error_three_term",
    "wce_compare",
]

WCE_POINT_LIMIT = 1 << 14
_BLOCK = 256


@dataclass(frozen=True)
class BernoulliPoly:
    """Bernoulli polynomial with exact rational coefficients (constant term first)."""

    degree: int
    coeffs: tuple[Fraction, ...]

    def __call__(self, x):
        """Horner evaluation; floats for float/array input, exact for Fractions."""
        if isinstance(x, Fraction):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = np.asarray(x, dtype=np.float64)
        acc = np.zeros_like(x)
        for c in reversed(self._float_coeffs):
            acc = acc * x + c
        return acc if acc.ndim else float(acc)

    @property
    def _float_coeffs(self):
        return [float(c) for c in self.coeffs]

    def derivative(self) -> tuple[Fraction, ...]:
        return tuple(i * c for i, c in enumerate(self.coeffs) if i)

    def integral01(self) -> Fraction:
        return sum((c / (i + 1) for i, c in enumerate(self.coeffs)), Fraction(0))


@lru_cache(maxsize=None)
def _bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    # sum_{k=0}^{r} C(r+1, k) B_k = 0 for r >= 1, with B_1 = -1/2
    B = [Fraction(1)]
    for r in range(1, n + 1):
        B.append(-sum((math.comb(r + 1, k) * B[k] for k in range(r)), Fraction(0)) / (r + 1))
    return tuple(B)


@lru_cache(maxsize=None)
def bernoulli(r: int) -> BernoulliPoly:
    """``B_r(x) = sum_k C(r, k) B_k x**(r - k)``."""
    if r < 0:
        raise ValueError("degree must be nonnegative")
    B = _bernoulli_numbers(r)
    coeffs = tuple(math.comb(r, k) * B[k] for k in range(r, -1, -1))
    # coeffs[i] multiplies x**i, i.e. C(r, r-i) B_{r-i}
    return BernoulliPoly(r, coeffs)


@dataclass(frozen=True)
class SobolevSpaceParams:
    alpha: int
    weights: Weights

    def __post_init__(self):
        check_positive_int(self.alpha, "alpha", minimum=2)

    @property
    def s(self) -> int:
        return self.weights.s


def kernel_1d(alpha: int, x, y):
    """The per-coordinate factor ``k1``; broadcasts over arrays."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    out = np.zeros(np.broadcast(x, y).shape)
    for r in range(1, alpha + 1):
        Br = bernoulli(r)
        out = out + Br(x) * Br(y) / math.factorial(r) ** 2
    sign = 1.0 if alpha % 2 == 1 else -1.0
    out = out + sign * bernoulli(2 * alpha)(np.abs(x - y)) / math.factorial(2 * alpha)
    return out


def _combine(params: SobolevSpaceParams, factors) -> np.ndarray:
    """Assemble ``K`` from per-coordinate ``k1`` arrays."""
    w = params.weights
    if w.is_product:
        out = np.ones_like(factors[0])
        for g, f in zip(w.product, factors):
            if g:
                out = out * (1.0 + g * f)
        return out
    out = np.ones_like(factors[0])
    for u, g in w.subsets():
        term = np.full_like(factors[0], g)
        for j in u:
            term = term * factors[j]
        out = out + term
    return out


def kernel(params: SobolevSpaceParams, x, y) -> float:
    x = check_points(np.atleast_2d(np.asarray(x, dtype=np.float64)), params.s)[0]
    y = check_points(np.atleast_2d(np.asarray(y, dtype=np.float64)), params.s)[0]
    factors = [kernel_1d(params.alpha, x[j], y[j]) for j in range(params.s)]
    return float(_combine(params, factors))


def kernel_matrix(params: SobolevSpaceParams, X, Y=None) -> np.ndarray:
    X = check_points(X, params.s)
    Y = X if Y is None else check_points(Y, params.s)
    factors = [kernel_1d(params.alpha, X[:, j][:, None], Y[:, j][None, :])
               for j in range(params.s)]
    return _combine(params, factors)


def worst_case_error(params: SobolevSpaceParams, P, return_residual: bool = False):
    """Worst-case error of the equal-weight rule on ``P`` (rows are points).

    Rows are processed in fixed blocks and each block sum is correctly
    rounded, so the result does not depend on block scheduling.  A negative
    squared error from round-off is clamped to zero; with
    ``return_residual=True`` the clamped amount is returned as well.
    """
    P = check_points(P, params.s)
    N = P.shape[0]
    check_guard(N, WCE_POINT_LIMIT, "number of points for the kernel double sum")
    partial = []
    for start in range(0, N, _BLOCK):
        block = kernel_matrix(params, P[start:start + _BLOCK], P)
        partial.append(math.fsum(block.ravel()))
    e2 = math.fsum(partial) / N**2 - 1.0
    residual = min(e2, 0.0)
    e = math.sqrt(max(e2, 0.0))
    return (e, residual) if return_residual else e


def _gauss_legendre(n: int, a, b):
    t, w = np.polynomial.legendre.leggauss(n)
    a = np.asarray(a, dtype=np.float64)[..., None]
    b = np.asarray(b, dtype=np.float64)[..., None]
    half = (b - a) / 2
    return a + half * (t + 1), half * w


def _k1_integral_y(alpha: int, x, nodes: int) -> np.ndarray:
    """``int_0^1 k1(x, y) dy`` by Gauss-Legendre on [0, x] and [x, 1]."""
    x = np.asarray(x, dtype=np.float64)
    total = np.zeros_like(x)
    for a, b in ((np.zeros_like(x), x), (x, np.ones_like(x))):
        y, w = _gauss_legendre(nodes, a, b)
        total = total + np.sum(w * kernel_1d(alpha, x[..., None], y), axis=-1)
    return total


def worst_case_error_three_term(params: SobolevSpaceParams, P, nodes: int = 24) -> float:
    """Squared worst-case error from ``iint K - 2/N sum int K + 1/N^2 sum sum K``.

    The integrals are computed by Gauss-Legendre quadrature (the kernel is
    piecewise polynomial with a kink on the diagonal, so each coordinate is
    split at ``x_j``) instead of the vanishing-moment identities.  Returns
    the squared error without clamping.
    """
    P = check_points(P, params.s)
    N = P.shape[0]
    xs, wx = _gauss_legendre(nodes, 0.0, 1.0)
    inner_P = [_k1_integral_y(params.alpha, P[:, j], nodes) for j in range(params.s)]
    inner_nodes = _k1_integral_y(params.alpha, xs, nodes)
    double = float(np.sum(wx * inner_nodes))
    w = params.weights
    if w.is_product:
        iint = math.prod(1.0 + g * double for g in w.product)
    else:
        iint = 1.0 + sum(g * double ** len(u) for u, g in w.subsets())
    single = _combine(params, inner_P)
    K = kernel_matrix(params, P)
    return iint - 2.0 * math.fsum(single) / N + math.fsum(K.ravel()) / N**2


def wce_compare(params: SobolevSpaceParams, net) -> dict:
    """Worst-case errors of a digital net and of its antithetic version."""
    anti = net.antithetic()
    check_guard(anti.n_points, WCE_POINT_LIMIT, "number of antithetic points")
    return {
        "N_plain": net.n_points,
        "wce_plain": worst_case_error(params, net.points_array()),
        "N_antithetic": anti.n_points,
        "wce_antithetic": worst_case_error(params, anti.points_array()),
    }
