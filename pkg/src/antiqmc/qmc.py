"""Equal-weight QMC rules, benchmark integrands and the convergence harness."""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from ._validation import check_points, check_positive_int
from .digits import DigitVector, delta, expand
from .walsh import chi_vector, root_of_unity, wal_array

__all__ = [
    "TestFunction",
    "F1",
    "F2",
    "F3",
    "WalshPolynomial",
    "CustomFunction",
    "make_function",
    "integrate",
    "exact_integral",
    "signed_error_check",
    "ConvergenceRow",
    "ConvergenceResult",
    "fit_slope",
    "convergence_study",
]


class TestFunction:
    """Integrand on ``[0, 1]^s`` evaluated row-wise on an ``(N, s)`` array."""

    __test__ = False  # keep pytest from collecting the class
    id = "custom"

    def __init__(self, s: int):
        self.s = check_positive_int(s, "s")

    def __call__(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def exact_integral(self) -> float:
        raise ValueError(f"no exact integral registered for {self.id}")


class F1(TestFunction):
    """``exp(theta * sum_j x_j / j**zeta)``."""

    id = "f1"

    def __init__(self, s: int, theta: float = 0.1, zeta: float = 1.0):
        super().__init__(s)
        if theta <= 0 or zeta <= 0:
            raise ValueError("theta and zeta must be positive")
        self.theta, self.zeta = float(theta), float(zeta)
        self._coef = self.theta * np.arange(1, s + 1, dtype=np.float64) ** -self.zeta

    def __call__(self, X):
        return np.exp(np.asarray(X, dtype=np.float64) @ self._coef)

    def exact_integral(self) -> float:
        return float(math.prod(math.expm1(c) / c for c in self._coef.tolist()))


class _ProductWeighted(TestFunction):
    """``prod_j (1 + w**j * g(x_j))`` for a zero-mean one-dimensional ``g``."""

    def __init__(self, s: int, w: float = 0.5):
        super().__init__(s)
        if w <= 0:
            raise ValueError("w must be positive")
        self.w = float(w)
        self._scale = self.w ** np.arange(1, s + 1, dtype=np.float64)

    @staticmethod
    def g(x):
        raise NotImplementedError

    def __call__(self, X):
        X = np.asarray(X, dtype=np.float64)
        return np.prod(1.0 + self._scale * self.g(X), axis=-1)

    def exact_integral(self) -> float:
        return 1.0


class F2(_ProductWeighted):
    id = "f2"

    @staticmethod
    def g(x):
        x2 = x * x
        return (-10.0 + 42.0 * x2 - 42.0 * x2 * x2 * x + 21.0 * x2 * x2 * x2) / 21.0


class F3(_ProductWeighted):
    id = "f3"

    @staticmethod
    def g(x):
        x2 = x * x
        x4 = x2 * x2
        poly = 31.0 - 84.0 * x2 + 8.0 * x2 * x + 70.0 * x4 - 28.0 * x4 * x2 + 8.0 * x4 * x2 * x
        return (poly - 16.0 * math.cos(1.0) - 16.0 * np.sin(x)) / 8.0


class WalshPolynomial(TestFunction):
    """Finite sum ``sum_k c_k wal_k``.

    On points of ``G^s`` it is evaluated through characters, which is the
    natural extension of a Walsh polynomial to the group.
    """

    id = "walsh_poly"

    def __init__(self, b: int, terms: dict):
        if not terms:
            raise ValueError("a Walsh polynomial needs at least one term")
        keys = [tuple(int(kj) for kj in k) for k in terms]
        s = len(keys[0])
        if any(len(k) != s for k in keys):
            raise ValueError("all index vectors must have the same dimension")
        super().__init__(s)
        self.b = b
        self.terms = {k: complex(c) for k, c in zip(keys, terms.values())}

    @classmethod
    def random(cls, b: int, s: int, K: int, n_terms: int, rng) -> "WalshPolynomial":
        """Random coefficients on random indices below ``b**K`` (the zero index included)."""
        rng = np.random.default_rng(rng)
        terms = {(0,) * s: complex(rng.normal(), rng.normal())}
        for _ in range(n_terms):
            k = tuple(int(v) for v in rng.integers(0, b**K, size=s))
            terms[k] = complex(rng.normal(), rng.normal())
        return cls(b, terms)

    @property
    def max_digits(self) -> int:
        return max(len(expand(kj, self.b).digits) for k in self.terms for kj in k)

    def coefficient(self, k) -> complex:
        return self.terms.get(tuple(k), 0.0j)

    def __call__(self, X):
        X = np.asarray(X, dtype=np.float64)
        out = np.zeros(X.shape[0], dtype=np.complex128)
        for k, c in self.terms.items():
            v = np.ones(X.shape[0], dtype=np.complex128)
            for j, kj in enumerate(k):
                if kj:
                    v = v * wal_array(kj, X[:, j], self.b)
            out += c * v
        return out

    def on_group(self, z: Sequence[DigitVector]) -> complex:
        return sum((c * root_of_unity(chi_vector(k, z).exponent, self.b)
                    for k, c in self.terms.items()), 0j)

    def exact_integral(self) -> complex:
        return self.coefficient((0,) * self.s)


class CustomFunction(TestFunction):
    id = "custom"

    def __init__(self, func: Callable, s: int, integral: float | None = None):
        super().__init__(s)
        self.func = func
        self.integral = integral

    def __call__(self, X):
        return np.asarray(self.func(np.asarray(X, dtype=np.float64)))

    def exact_integral(self) -> float:
        if self.integral is None:
            return super().exact_integral()
        return self.integral


def make_function(name: str, s: int, theta: float = 0.1, zeta: float = 1.0,
                  w: float = 0.5) -> TestFunction:
    name = name.lower()
    if name == "f1":
        return F1(s, theta, zeta)
    if name == "f2":
        return F2(s, w)
    if name == "f3":
        return F3(s, w)
    raise ValueError(f"unknown function {name!r}; choose f1, f2 or f3")


def exact_integral(f: TestFunction):
    return f.exact_integral()


def _mean(values) -> float | complex:
    values = np.asarray(values).ravel()
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real), math.fsum(values.imag)) / values.size
    return math.fsum(values) / values.size


def integrate(f: TestFunction, P):
    """``(1/N) sum_{x in P} f(x)`` with multiplicity and correctly rounded summation.

    ``P`` is either an ``(N, s)`` array of points in the unit cube or a list
    of points of ``G^s`` (tuples of :class:`DigitVector`).
    """
    if isinstance(P, (list, tuple)) and P and isinstance(P[0], (list, tuple)) \
            and P[0] and isinstance(P[0][0], DigitVector):
        if isinstance(f, WalshPolynomial):
            return _mean([f.on_group(z) for z in P])
        P = np.array([[float(c) for c in z] for z in P])
    P = check_points(P, f.s)
    if P.shape[0] == 0:
        raise ValueError("cannot integrate over an empty point set")
    return _mean(f(P))


def signed_error_check(f: WalshPolynomial, net, K: int | None = None) -> tuple[complex, complex]:
    """Both sides of the antithetic signed-error identity.

    ``lhs`` is the rule on the antithetic net minus the mean of ``f``;
    ``rhs`` sums the coefficients of ``f`` over the nonzero dual vectors of
    ``net`` with digit sum zero.
    """
    if f.b != net.b or f.s != net.s:
        raise ValueError("Walsh polynomial and net must share base and dimension")
    need = f.max_digits
    K = need if K is None else K
    if need > K:
        raise ValueError(f"Walsh polynomial has indices with {need} digits but K={K}")
    if K > net.depth:
        raise ValueError(f"K={K} exceeds the digit depth {net.depth}")
    lhs = integrate(f, net.antithetic().points()) - f.exact_integral()
    zero = (0,) * net.s
    rhs = 0j
    for k in net.dual_enumerate(K):
        if k != zero and delta(k, net.b) == 0:
            rhs += f.coefficient(k)
    return lhs, rhs


@dataclass(frozen=True)
class ConvergenceRow:
    variant: str
    m: int
    N: int
    abs_error: float


@dataclass
class ConvergenceResult:
    rows: list[ConvergenceRow]
    slopes: dict[str, float]
    step_slopes: dict[str, list[float]]
    flags: list[str] = field(default_factory=list)

    def to_csv(self, dest=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["variant", "m", "N", "abs_error"])
        for r in self.rows:
            writer.writerow([r.variant, r.m, r.N, repr(r.abs_error)])
        text = buf.getvalue()
        if dest is not None:
            if isinstance(dest, (str, os.PathLike)):
                with open(dest, "w") as fh:
                    fh.write(text)
            else:
                dest.write(text)
        return text


def fit_slope(N: Sequence[int], err: Sequence[float]) -> float:
    """Least-squares slope of ``log err`` against ``log N``; NaN with < 2 usable points."""
    N = np.asarray(N, dtype=np.float64)
    err = np.asarray(err, dtype=np.float64)
    keep = err > 0
    if keep.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(N[keep]), np.log(err[keep]), 1)[0])


def _build_net(generator: str, s: int, m: int, dirfile=None, seed: int = 0, hopl_order: int = 2):
    if generator == "sobol":
        from .sobol import sobol_net

        return sobol_net(s, m, dirfile=dirfile)
    if generator == "hopl":
        from .hopl import HoplSpec, default_modulus, hopl_net
        from .poly import PolyZb

        n = hopl_order * m
        p = default_modulus(n, 2)
        rng = np.random.default_rng([seed, m])
        q = tuple(PolyZb.from_int(int(c), 2) for c in rng.integers(0, 2**n, size=s))
        return hopl_net(HoplSpec(2, m, n, p, q))
    raise ValueError(f"unknown generator {generator!r}; use 'sobol' or 'hopl'")


def convergence_study(f: TestFunction, m_range: Iterable[int], generator: str = "sobol",
                      variant: str = "both", dirfile=None, out=None, fit_window: int = 5,
                      seed: int = 0, hopl_order: int = 2) -> ConvergenceResult:
    """Absolute errors of plain and/or antithetic nets over a range of ``m``.

    The antithetic net built from ``m``-column matrices has ``b**(m+1)``
    points and is reported under that ``N``.  Slopes are fitted on the
    largest ``fit_window`` values of ``m``; per-step slopes between
    consecutive ``m`` are reported as well.  Zero errors are left out of the
    fit and noted in ``flags``.

    The ``hopl`` generator uses modulus degree ``n = hopl_order * m`` and a
    generating vector drawn from ``seed``.
    """
    m_values = sorted(set(int(m) for m in m_range))
    if not m_values:
        raise ValueError("m_range is empty")
    if variant not in ("plain", "antithetic", "both"):
        raise ValueError(f"unknown variant {variant!r}")
    check_positive_int(fit_window, "fit_window", minimum=2)
    variants = ["plain", "antithetic"] if variant == "both" else [variant]
    I = f.exact_integral()
    rows: list[ConvergenceRow] = []
    for m in m_values:
        net = _build_net(generator, f.s, m, dirfile, seed, hopl_order)
        for v in variants:
            use = net if v == "plain" else net.antithetic()
            err = abs(integrate(f, use.points_array()) - I)
            rows.append(ConvergenceRow(v, m, use.n_points, float(err)))
    slopes, steps, flags = {}, {}, []
    for v in variants:
        sel = [r for r in rows if r.variant == v]
        window = sel[-fit_window:]
        zeros = [r.m for r in sel if r.abs_error == 0]
        if zeros:
            flags.append(f"{v}: zero error at m={zeros} excluded from the fit")
        slopes[v] = fit_slope([r.N for r in window], [r.abs_error for r in window])
        if math.isnan(slopes[v]):
            flags.append(f"{v}: slope undefined")
        steps[v] = [
            fit_slope([a.N, c.N], [a.abs_error, c.abs_error]) for a, c in zip(sel, sel[1:])
        ]
    result = ConvergenceResult(rows, slopes, steps, flags)
    if out is not None:
        result.to_csv(out)
    return result
