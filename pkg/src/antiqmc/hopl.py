"""Higher order polynomial lattice point sets and their antithetic error bound.

For prime ``b``, a modulus ``p`` of degree ``n`` and a generating vector
``q`` the point set is the digital net whose matrices are Hankel matrices of
the Laurent coefficients of ``q_j / p``.  The error bound ``B`` sums
``b**-mu_alpha(k)`` over the part of the dual net with digit sum zero; it is
evaluated by grouping indices by their image in ``Z_b^m x Z_b`` and
convolving the per-coordinate histograms over that group.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from ._validation import GuardError, check_guard, check_positive_int, check_prime
from .digits import default_depth, expand
from .net import DigitalNet, GeneratingMatrix, index_digits
from .poly import PolyZb, is_irreducible, smallest_irreducible
from .weights import Weights

__all__ = [
    "LaurentExpansion",
    "HoplSpec",
    "ErrorBoundParams",
    "BoundResult",
    "SearchResult",
    "laurent",
    "hopl_matrices",
    "hopl_net",
    "hopl_dual_contains",
    "constant_A",
    "constant_A_exact",
    "constants_C_D",
    "constant_C_alpha_lambda",
    "mu_partial_sum",
    "averaging_bound",
    "bound_B",
    "search_q",
    "SEARCH_LIMIT",
]

SEARCH_LIMIT = 1 << 20
HISTOGRAM_LIMIT = 1 << 22
DIRECT_GROUP_LIMIT = 1 << 11


@dataclass(frozen=True)
class LaurentExpansion:
    """Coefficients ``t_1 .. t_L`` of ``q / p = sum_l t_l x**-l``."""

    numerator: PolyZb
    denominator: PolyZb
    coeffs: tuple[int, ...]

    def __getitem__(self, l: int) -> int:
        """1-based access ``t_l``."""
        if not 1 <= l <= len(self.coeffs):
            raise IndexError(f"t_{l} outside the computed range 1..{len(self.coeffs)}")
        return self.coeffs[l - 1]

    def __len__(self) -> int:
        return len(self.coeffs)


def laurent(q: PolyZb, p: PolyZb, L: int) -> LaurentExpansion:
    """Formal long division of ``q`` by ``p`` in ``Z_b((x^-1))``."""
    if p.is_zero():
        raise ZeroDivisionError("denominator is the zero polynomial")
    if q.base != p.base:
        raise ValueError("numerator and denominator must share the base")
    if q.degree >= p.degree:
        raise ValueError(f"need deg(q) < deg(p), got {q.degree} >= {p.degree}")
    b, n = p.base, p.degree
    inv = pow(p.lead, -1, b)
    pc = p.coeffs
    rem = list(q.padded(n))
    out = []
    for _ in range(L):
        # multiply remainder by x, then cancel the x^n term
        rem = [0] + rem
        t = rem[n] * inv % b
        out.append(t)
        if t:
            for i in range(n + 1):
                rem[i] = (rem[i] - t * pc[i]) % b
        rem = rem[:n]
    return LaurentExpansion(q, p, tuple(out))


@dataclass(frozen=True)
class HoplSpec:
    """Parameters of a higher order polynomial lattice point set."""

    b: int
    m: int
    n: int
    p: PolyZb
    q: tuple[PolyZb, ...]

    def __post_init__(self):
        check_prime(self.b)
        check_positive_int(self.m, "m")
        check_positive_int(self.n, "n")
        if self.m > self.n:
            raise ValueError(f"need m <= n, got m={self.m}, n={self.n}")
        if self.p.base != self.b or self.p.degree != self.n:
            raise ValueError(f"modulus must be a polynomial over Z_{self.b} of degree {self.n}")
        q = tuple(self.q)
        if not q:
            raise ValueError("generating vector must have at least one entry")
        for qj in q:
            if qj.base != self.b or qj.degree >= self.n:
                raise ValueError(f"generating polynomials need degree < {self.n}")
        object.__setattr__(self, "q", q)

    @property
    def s(self) -> int:
        return len(self.q)

    @classmethod
    def from_ints(cls, b: int, m: int, n: int, p: int, q: Sequence[int]) -> "HoplSpec":
        """Build from integer encodings ``k -> kappa_0 + kappa_1 x + ...``."""
        return cls(b, m, n, PolyZb.from_int(p, b), tuple(PolyZb.from_int(c, b) for c in q))


def hopl_matrices(spec: HoplSpec) -> list[GeneratingMatrix]:
    """Matrices with entry ``(l, r) = t_{l+r-1}`` for ``l <= n`` and zero rows after."""
    n, m = spec.n, spec.m
    out = []
    for qj in spec.q:
        t = laurent(qj, spec.p, n + m - 1).coeffs
        rows = np.array([[t[l + r] for r in range(m)] for l in range(n)], dtype=np.int64)
        out.append(GeneratingMatrix(spec.b, rows))
    return out


def hopl_net(spec: HoplSpec, depth: int | None = None) -> DigitalNet:
    return DigitalNet(hopl_matrices(spec), depth=depth)


def _syndrome_basis(q: PolyZb, p: PolyZb, m: int) -> np.ndarray:
    """Row i: coefficients of degree ``n-m .. n-1`` of ``x**i q mod p``."""
    n = p.degree
    rows = []
    for i in range(n):
        r = (PolyZb.monomial(i, p.base) * q) % p
        rows.append([r.coeff(d) for d in range(n - m, n)])
    return np.array(rows, dtype=np.int64).reshape(n, m)


def hopl_dual_contains(spec: HoplSpec, k: Sequence[int]) -> bool:
    """Residue of ``sum_j tr_n(k_j) q_j`` modulo ``p`` has degree ``< n - m``."""
    if len(k) != spec.s:
        raise ValueError(f"index vector must have {spec.s} entries")
    b, n = spec.b, spec.n
    acc = PolyZb(b)
    for kj, qj in zip(k, spec.q):
        if kj < 0:
            raise ValueError("indices must be nonnegative")
        tr = PolyZb(b, expand(int(kj), b).digits[:n])
        acc = acc + tr * qj
    residue = acc % spec.p
    return residue.degree < n - spec.m


def _check_alpha_lambda(alpha: int, lam: float) -> None:
    check_positive_int(alpha, "alpha", minimum=2)
    if not 1.0 / alpha < lam <= 1.0:
        raise ValueError(f"lambda must satisfy 1/alpha < lambda <= 1, got {lam} with alpha={alpha}")


def constant_A(alpha: int, lam: float, b: int) -> float:
    """Closed form of ``sum_{k>=1} b**(-lam * mu_alpha(k))``."""
    _check_alpha_lambda(alpha, lam)
    factors = [(b - 1) / (b ** (lam * i) - 1) for i in range(1, alpha + 1)]
    total = sum(math.prod(factors[:v]) for v in range(1, alpha))
    ba = b ** (lam * alpha)
    return total + (ba - 1) / (ba - b) * math.prod(factors)


def constant_A_exact(alpha: int, b: int) -> Fraction:
    """``A_{alpha,1}`` as an exact rational."""
    check_positive_int(alpha, "alpha", minimum=2)
    factors = [Fraction(b - 1, b**i - 1) for i in range(1, alpha + 1)]
    total = sum((math.prod(factors[:v]) for v in range(1, alpha)), Fraction(0))
    ba = b**alpha
    return total + Fraction(ba - 1, ba - b) * math.prod(factors)


def constants_C_D(alpha: int, b: int) -> tuple[tuple[float, ...], float]:
    """Walsh-coefficient constants ``(C_1, ..., C_{2 alpha})`` and ``D_alpha``."""
    check_positive_int(alpha, "alpha", minimum=2)
    sin_term = 2.0 * math.sin(math.pi / b)
    growth = 1.0 + 1.0 / b + 1.0 / (b * (b + 1))
    C = [1.0 / sin_term] + [growth ** (tau - 2) / sin_term**tau for tau in range(2, 2 * alpha + 1)]
    D = max(
        sum(C[tau - 1] ** 2 / b ** (2 * (tau - v)) for tau in range(v, alpha + 1))
        + 2.0 * C[2 * alpha - 1] / b ** (2 * (alpha - v))
        for v in range(1, alpha + 1)
    )
    return tuple(C), D


def constant_C_alpha_lambda(alpha: int, lam: float, b: int) -> float:
    """``2 D_alpha**(lam/2) A_{alpha,lam}``, the constant of the existence bound."""
    _, D = constants_C_D(alpha, b)
    return 2.0 * D ** (lam / 2) * constant_A(alpha, lam, b)


def mu_partial_sum(alpha: int, b: int, K: int, lam=1):
    """``sum_{1 <= k < b**K} b**(-lam * mu_alpha(k))`` by dynamic programming over digits.

    Exact (a ``Fraction``) when ``lam`` is 1; a float otherwise.
    """
    exact = lam == 1
    one = Fraction(1) if exact else 1.0
    unit = Fraction(1, b) if exact else float(b) ** -lam
    # state[c]: weighted count of digit prefixes with c nonzero digits, capped at alpha
    state = [one] + [0 * one] * alpha
    for a in range(K, 0, -1):
        new = list(state)
        for c in range(alpha + 1):
            if state[c] == 0:
                continue
            w = (b - 1) * (unit**a if c < alpha else one)
            new[min(c + 1, alpha)] += state[c] * w
        state = new
    return sum(state[1:], 0 * one)


def averaging_bound(b: int, m: int, n: int, alpha: int, lam: float, weights: Weights) -> float:
    """Upper bound on the mean of ``B**lam`` over all generating vectors."""
    A = constant_A(alpha, lam, b)
    _, D = constants_C_D(alpha, b)
    total = sum(2.0 * g ** (lam / 2) * D ** (lam * len(u) / 2) * A ** len(u)
                for u, g in weights.subsets())
    return total / b ** min(m, 2 * lam * n)


@dataclass(frozen=True)
class ErrorBoundParams:
    alpha: int
    lam: float
    weights: Weights
    trunc: int | None = None

    def __post_init__(self):
        _check_alpha_lambda(self.alpha, self.lam)
        if self.trunc is not None:
            check_positive_int(self.trunc, "trunc")

    def trunc_for(self, n: int) -> int:
        return n + 4 if self.trunc is None else self.trunc


@dataclass(frozen=True)
class BoundResult:
    """Truncated bound, its certified tail, and their sum."""

    truncated: float
    tail: float
    total: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total", self.truncated + self.tail)


class _Group:
    """The group ``Z_b^d`` with elements encoded as integers ``sum g_r b**r``."""

    def __init__(self, b: int, d: int):
        self.b, self.d = b, d
        self.size = b**d
        digits = index_digits(d, b)
        w = b ** np.arange(d, dtype=np.int64)
        self.neg = ((-digits) % b) @ w
        self._digits, self._w = digits, w
        self._add = None

    @property
    def add(self) -> np.ndarray:
        if self._add is None:
            D = self._digits
            self._add = ((D[:, None, :] + D[None, :, :]) % self.b) @ self._w
        return self._add

    def at_zero(self, A: np.ndarray, B: np.ndarray) -> float:
        """``(A * B)(0) = sum_g A[g] B[-g]``."""
        return float(np.dot(A, B[self.neg]))

    def convolve(self, A: np.ndarray, B: np.ndarray, method: str) -> np.ndarray:
        if method == "direct":
            return np.bincount(self.add.ravel(), weights=np.outer(A, B).ravel(),
                               minlength=self.size)
        shape = (self.b,) * self.d
        FA = np.fft.fftn(A.reshape(shape))
        FB = np.fft.fftn(B.reshape(shape))
        out = np.fft.ifftn(FA * FB).real.reshape(-1)
        return np.maximum(out, 0.0)


@lru_cache(maxsize=16)
def _index_table(b: int, K: int, alpha: int):
    """Digits, digit sums and ``b**-mu_alpha`` for every ``1 <= k < b**K``."""
    check_guard(b**K, HISTOGRAM_LIMIT, "index table size b**trunc")
    digits = index_digits(K, b)[1:]
    delta = digits.sum(axis=1) % b
    nonzero = digits != 0
    # rank of each nonzero digit counted from the most significant one
    rank = np.cumsum(nonzero[:, ::-1], axis=1)[:, ::-1]
    positions = np.arange(1, K + 1)
    mu = np.where(nonzero & (rank <= alpha), positions, 0).sum(axis=1)
    weight = float(b) ** (-mu.astype(np.float64))
    digits.setflags(write=False)
    return digits, delta, weight


class _BoundEvaluator:
    """Caches per-polynomial histograms for repeated bound evaluations."""

    def __init__(self, b, m, n, p, params: ErrorBoundParams, restrict_delta=True, method="auto"):
        self.b, self.m, self.n, self.p = b, m, n, p
        self.params = params
        self.restrict_delta = restrict_delta
        self.K = params.trunc_for(n)
        d = m + 1 if restrict_delta else m
        self.group = _Group(b, d)
        if method == "auto":
            method = "direct" if self.group.size <= DIRECT_GROUP_LIMIT else "fourier"
        if method not in ("direct", "fourier"):
            raise ValueError(f"unknown method {method!r}")
        self.method = method
        self.digits, self.delta, self.weight = _index_table(b, self.K, params.alpha)
        _, D = constants_C_D(params.alpha, b)
        self.D = D
        self._hist: dict[int, np.ndarray] = {}
        self.tail = self._tail()

    def histogram(self, q_code: int) -> np.ndarray:
        H = self._hist.get(q_code)
        if H is None:
            q = PolyZb.from_int(q_code, self.b)
            S = _syndrome_basis(q, self.p, self.m)
            n_used = min(self.n, self.K)
            syn = self.digits[:, :n_used] @ S[:n_used] % self.b
            code = syn @ (self.b ** np.arange(self.m, dtype=np.int64))
            if self.restrict_delta:
                code = code + self.delta * self.b**self.m
            H = np.bincount(code, weights=self.weight, minlength=self.group.size)
            self._hist[q_code] = H
        return H

    def truncated(self, q_codes: Sequence[int]) -> float:
        w = self.params.weights
        hists = [self.histogram(c) for c in q_codes]
        g = self.group
        if w.is_product:
            scale = [math.sqrt(gj * self.D) for gj in w.product]
            # U: sum over nonempty subsets of the already-processed coordinates
            U = np.zeros(g.size)
            delta0 = np.zeros(g.size)
            delta0[0] = 1.0
            for j, H in enumerate(hists[:-1]):
                if scale[j]:
                    U = U + scale[j] * g.convolve(U + delta0, H, self.method)
            last = scale[-1] * g.at_zero(U + delta0, hists[-1]) if scale[-1] else 0.0
            return float(U[0] + last)
        total = 0.0
        for u, gamma in w.subsets():
            acc = hists[u[0]]
            for j in u[1:-1]:
                acc = g.convolve(acc, hists[j], self.method)
            S_u = acc[0] if len(u) == 1 else g.at_zero(acc, hists[u[-1]])
            total += math.sqrt(gamma) * self.D ** (len(u) / 2) * S_u
        return total

    def _tail(self) -> float:
        """Certified bound on the index vectors with some ``k_j >= b**K``.

        Uses ``sum over N^|u| minus sum over {1..b^K-1}^|u|`` of ``b**-mu``,
        which equals ``A**|u| - P**|u|`` exactly and dominates the restricted sum.
        """
        A = constant_A_exact(self.params.alpha, self.b)
        P = mu_partial_sum(self.params.alpha, self.b, self.K)
        Af, Pf, gap = float(A), float(P), float(A - P)
        w = self.params.weights
        if w.is_product:
            c = [math.sqrt(gj * self.D) for gj in w.product]
            s = len(c)
            prefix = [1.0]
            for cj in c:
                prefix.append(prefix[-1] * (1 + cj * Pf))
            suffix = [1.0] * (s + 1)
            for j in range(s - 1, -1, -1):
                suffix[j] = suffix[j + 1] * (1 + c[j] * Af)
            tail = sum(prefix[j] * c[j] * gap * suffix[j + 1] for j in range(s))
        else:
            tail = 0.0
            for u, gamma in w.subsets():
                r = len(u)
                # A^r - P^r = (A - P) * sum_i A^i P^(r-1-i)
                diff = float((A - P) * sum(A**i * P ** (r - 1 - i) for i in range(r)))
                tail += math.sqrt(gamma) * self.D ** (r / 2) * diff
        return tail * (1.0 + 1e-12)

    def evaluate(self, q_codes: Sequence[int]) -> BoundResult:
        if self.params.weights.is_zero():
            return BoundResult(0.0, 0.0)
        return BoundResult(self.truncated(q_codes), self.tail)


def bound_B(spec: HoplSpec, params: ErrorBoundParams, restrict_delta: bool = True,
            method: str = "auto") -> BoundResult:
    """Truncated evaluation of the worst-case error bound plus a certified tail.

    Parameters
    ----------
    spec : HoplSpec
    params : ErrorBoundParams
        ``params.weights.s`` must equal ``spec.s``.  Indices run over
        ``1 <= k_j < b**trunc`` (default ``trunc = n + 4``).
    restrict_delta : bool
        Keep only index vectors with digit sum zero, i.e. the dual of the
        antithetic net.  ``False`` gives the plain-net counterpart.
    method : {"auto", "direct", "fourier"}
        How group convolutions are carried out.
    """
    if params.weights.s != spec.s:
        raise ValueError(f"weights are for s={params.weights.s}, spec has s={spec.s}")
    ev = _BoundEvaluator(spec.b, spec.m, spec.n, spec.p, params, restrict_delta, method)
    return ev.evaluate([qj.to_int() for qj in spec.q])


@dataclass
class SearchResult:
    spec: HoplSpec
    bound: BoundResult
    n_candidates: int
    truncated_values: np.ndarray = field(repr=False)

    @property
    def q(self) -> tuple[PolyZb, ...]:
        return self.spec.q

    def mean_bound(self, lam: float = 1.0) -> float:
        """Mean over the searched candidates of ``(truncated + tail)**lam``."""
        return float(np.mean((self.truncated_values + self.bound.tail) ** lam))


def _evaluate_chunk(ev: _BoundEvaluator, chunk):
    return [ev.truncated(c) for c in chunk]


def search_q(p: PolyZb, m: int, params: ErrorBoundParams, strategy: str = "exhaustive",
             trials: int = 100, seed: int | None = 0, n_jobs: int | None = 1,
             restrict_delta: bool = True, method: str = "auto") -> SearchResult:
    """Generating vector minimising the bound for a fixed modulus.

    ``strategy="exhaustive"`` scans all ``b**(n s)`` vectors (guarded at
    ``SEARCH_LIMIT``); ``"random"`` draws ``trials`` vectors from a seeded
    generator.  Ties go to the lexicographically smallest tuple of integer
    encodings ``(q_1.to_int(), ..., q_s.to_int())``.
    """
    b, n, s = p.base, p.degree, params.weights.s
    check_prime(b)
    if n < 1:
        raise ValueError("modulus must have degree >= 1")
    if not is_irreducible(p):
        warnings.warn(f"modulus {p} is reducible; the existence guarantee assumes irreducible p",
                      stacklevel=2)
    if strategy == "exhaustive":
        total = b ** (n * s)
        check_guard(total, SEARCH_LIMIT, "exhaustive search space b**(n s)")
        candidates = list(itertools.product(range(b**n), repeat=s))
    elif strategy == "random":
        check_positive_int(trials, "trials")
        rng = np.random.default_rng(seed)
        candidates = [tuple(int(c) for c in row) for row in rng.integers(0, b**n, size=(trials, s))]
    else:
        raise ValueError(f"unknown strategy {strategy!r}; use 'exhaustive' or 'random'")

    ev = _BoundEvaluator(b, m, n, p, params, restrict_delta, method)
    if params.weights.is_zero():
        values = [0.0] * len(candidates)
    elif n_jobs in (None, 1):
        values = _evaluate_chunk(ev, candidates)
    else:
        from joblib import Parallel, delayed

        n_chunks = min(len(candidates), 64)
        bounds = np.linspace(0, len(candidates), n_chunks + 1).astype(int)
        chunks = [candidates[a:z] for a, z in zip(bounds[:-1], bounds[1:])]
        parts = Parallel(n_jobs=n_jobs)(delayed(_evaluate_chunk)(ev, c) for c in chunks)
        values = [v for part in parts for v in part]

    best = min(range(len(candidates)), key=lambda i: (values[i], candidates[i]))
    spec = HoplSpec(b, m, n, p, tuple(PolyZb.from_int(c, b) for c in candidates[best]))
    return SearchResult(spec, BoundResult(values[best], ev.tail if not params.weights.is_zero() else 0.0),
                        len(candidates), np.asarray(values))


def default_modulus(n: int, b: int) -> PolyZb:
    """Smallest irreducible monic polynomial of degree ``n`` (by integer encoding)."""
    return smallest_irreducible(n, b)
