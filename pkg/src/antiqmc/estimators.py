"""scikit-learn style wrappers around the point-set constructions."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_guard, check_points, check_positive_int
from .digits import constant, pi, sigma
from .hopl import ErrorBoundParams, default_modulus, hopl_net, search_q
from .poly import PolyZb
from .qmc import integrate
from .sobol import sobol_net
from .weights import Weights, parse_weights

__all__ = ["DigitalNetSampler", "AntitheticAugmenter", "HoplSearch", "QMCIntegrator"]

TRANSFORM_LIMIT = 1 << 20


class DigitalNetSampler(BaseEstimator):
    """Builds a Sobol' or higher order polynomial lattice net and samples it.

    ``fit`` ignores its input apart from reading the dimension when
    ``n_dims`` is None.
    """

    def __init__(self, generator="sobol", m=8, n_dims=None, antithetic=False,
                 dirfile=None, hopl_n=None, hopl_q=None):
        self.generator = generator
        self.m = m
        self.n_dims = n_dims
        self.antithetic = antithetic
        self.dirfile = dirfile
        self.hopl_n = hopl_n
        self.hopl_q = hopl_q

    def fit(self, X=None, y=None):
        s = self.n_dims
        if s is None:
            if X is None:
                raise ValueError("set n_dims or pass data to infer the dimension")
            s = check_points(X).shape[1]
        s = check_positive_int(s, "n_dims")
        m = check_positive_int(self.m, "m")
        if self.generator == "sobol":
            net = sobol_net(s, m, dirfile=self.dirfile)
        elif self.generator == "hopl":
            from .hopl import HoplSpec

            n = m if self.hopl_n is None else self.hopl_n
            if self.hopl_q is None or len(self.hopl_q) != s:
                raise ValueError(f"hopl generator needs hopl_q with {s} integer codes")
            spec = HoplSpec(2, m, n, default_modulus(n, 2),
                            tuple(PolyZb.from_int(c, 2) for c in self.hopl_q))
            net = hopl_net(spec)
        else:
            raise ValueError(f"unknown generator {self.generator!r}")
        self.base_net_ = net
        self.net_ = net.antithetic() if self.antithetic else net
        self.n_features_in_ = s
        return self

    def sample(self) -> np.ndarray:
        check_is_fitted(self, "net_")
        return self.net_.points_array()


class AntitheticAugmenter(TransformerMixin, BaseEstimator):
    """Maps points to their b-adic antithetic (or symmetrized) orbit.

    Each point ``x`` is read through its unique b-adic expansion and every
    translate by a constant-digit sequence is returned, so the output has
    ``b`` (or ``b**s`` for ``mode="symmetrize"``) times as many rows.  Rows
    are ordered by the shift: all points shifted by ``l = 0`` first.
    """

    def __init__(self, base=2, mode="antithetic"):
        self.base = base
        self.mode = mode

    def fit(self, X, y=None):
        X = check_points(X)
        if self.mode not in ("antithetic", "symmetrize"):
            raise ValueError(f"unknown mode {self.mode!r}")
        check_positive_int(self.base, "base", minimum=2)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_points(X, self.n_features_in_)
        b = self.base
        N, s = X.shape
        factor = b if self.mode == "antithetic" else b**s
        check_guard(N * s * factor, TRANSFORM_LIMIT, "antithetic output size")
        Z = [[sigma(float(x), b) for x in row] for row in X]
        shifts = [constant(l, b, Z[0][0].depth) for l in range(b)] if N else []
        if self.mode == "antithetic":
            combos = [(l,) * s for l in range(b)]
        else:
            combos = list(np.ndindex(*(b,) * s))
        out = np.empty((N * len(combos), s))
        for c, ls in enumerate(combos):
            for i, z in enumerate(Z):
                out[c * N + i] = [pi(zj + shifts[l]) for zj, l in zip(z, ls)]
        return out


class HoplSearch(BaseEstimator):
    """Searches a generating vector minimising the antithetic error bound."""

    def __init__(self, b=2, n=2, m=2, s=1, alpha=2, lam=1.0, weights="product:1",
                 strategy="exhaustive", trials=100, seed=0, trunc=None, n_jobs=1):
        self.b = b
        self.n = n
        self.m = m
        self.s = s
        self.alpha = alpha
        self.lam = lam
        self.weights = weights
        self.strategy = strategy
        self.trials = trials
        self.seed = seed
        self.trunc = trunc
        self.n_jobs = n_jobs

    def fit(self, X=None, y=None):
        w = self.weights
        if isinstance(w, str):
            w = parse_weights(w, self.s)
        elif not isinstance(w, Weights):
            w = Weights(self.s, product=w)
        params = ErrorBoundParams(self.alpha, self.lam, w, self.trunc)
        p = default_modulus(self.n, self.b)
        result = search_q(p, self.m, params, strategy=self.strategy, trials=self.trials,
                          seed=self.seed, n_jobs=self.n_jobs)
        self.modulus_ = p
        self.q_ = result.q
        self.spec_ = result.spec
        self.bound_ = result.bound
        self.result_ = result
        return self

    def net(self, antithetic=True):
        check_is_fitted(self, "spec_")
        net = hopl_net(self.spec_)
        return net.antithetic() if antithetic else net


class QMCIntegrator(BaseEstimator):
    """Equal-weight rule over a fitted :class:`DigitalNetSampler`."""

    def __init__(self, sampler=None):
        self.sampler = sampler

    def fit(self, f, y=None):
        sampler = self.sampler if self.sampler is not None else DigitalNetSampler(n_dims=f.s)
        if not hasattr(sampler, "net_"):
            sampler = sampler.fit()
        self.sampler_ = sampler
        self.estimate_ = integrate(f, sampler.sample())
        return self

    def predict(self, f):
        check_is_fitted(self, "sampler_")
        return integrate(f, self.sampler_.sample())
