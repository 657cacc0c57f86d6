import itertools
import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from antiqmc._validation import GuardError
from antiqmc.digits import delta, mu_alpha
from antiqmc.hopl import (
    ErrorBoundParams,
    HoplSpec,
    averaging_bound,
    bound_B,
    constant_A,
    constant_A_exact,
    constant_C_alpha_lambda,
    constants_C_D,
    default_modulus,
    hopl_dual_contains,
    hopl_matrices,
    hopl_net,
    laurent,
    mu_partial_sum,
    search_q,
)
from antiqmc.poly import PolyZb, is_irreducible
from antiqmc.weights import Weights


def P(code, b=2):
    return PolyZb.from_int(code, b)


def test_laurent_examples():
    assert laurent(P(1), P(7), 6).coeffs == (0, 1, 1, 0, 1, 1)
    assert laurent(P(0), P(7), 4).coeffs == (0, 0, 0, 0)
    assert laurent(P(1), P(4), 5).coeffs == (0, 1, 0, 0, 0)
    with pytest.raises(ValueError):
        laurent(P(7), P(7), 3)
    with pytest.raises(ZeroDivisionError):
        laurent(P(1), P(0), 3)


def test_laurent_indexing():
    t = laurent(P(1), P(7), 6)
    assert t[2] == 1 and len(t) == 6
    with pytest.raises(IndexError):
        t[0]


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 5), st.integers(0, 10**6), st.integers(0, 10**6))
def test_laurent_remultiplication(b, n, pc, qc):
    p = PolyZb(b, [int(c) for c in np.random.default_rng(pc).integers(0, b, n)] + [1 + pc % (b - 1)])
    q = PolyZb.from_int(qc % b**n, b)
    L = n + 8
    t = laurent(q, p, L).coeffs
    # coefficient of x^-l in p * sum t_i x^-i must vanish for 1 <= l <= L - n
    for l in range(1, L - n + 1):
        c = sum(p.coeff(i) * t[i + l - 1] for i in range(n + 1) if i + l - 1 < L)
        assert c % b == 0
    # nonnegative powers reproduce q
    for d in range(n):
        c = sum(p.coeff(d + i) * t[i - 1] for i in range(1, n - d + 1))
        assert c % b == q.coeff(d)


def multiplicative_order_of_x(p):
    b = p.base
    r = PolyZb.monomial(1, b) % p
    acc, k = r, 1
    while acc != PolyZb(b, (1,)):
        acc = (acc * r) % p
        k += 1
    return k


@pytest.mark.parametrize("b,n", [(2, 2), (2, 3), (2, 4), (3, 2)])
def test_laurent_periodicity(b, n):
    p = default_modulus(n, b)
    order = multiplicative_order_of_x(p)
    for code in range(1, b**n):
        t = laurent(P(code, b), p, 4 * order + n).coeffs
        assert all(t[i] == t[i + order] for i in range(len(t) - order))


def test_spec_validation():
    with pytest.raises(ValueError):
        HoplSpec.from_ints(4, 1, 1, 5, [1])
    with pytest.raises(ValueError):
        HoplSpec.from_ints(2, 3, 2, 7, [1])
    with pytest.raises(ValueError):
        HoplSpec.from_ints(2, 2, 2, 11, [1])
    with pytest.raises(ValueError):
        HoplSpec.from_ints(2, 2, 2, 7, [4])
    with pytest.raises(ValueError):
        HoplSpec.from_ints(2, 2, 2, 7, [])


def test_matrix_example():
    spec = HoplSpec.from_ints(2, 2, 2, 7, [1])
    (C,) = hopl_matrices(spec)
    assert C.rows.tolist() == [[0, 1], [1, 1]] and C.continuation is None
    assert sorted(hopl_net(spec).points_array()[:, 0]) == [0.0, 0.25, 0.5, 0.75]
    assert hopl_net(spec).points_array()[:, 0].tolist() == [0.0, 0.25, 0.75, 0.5]


def test_zero_generator_gives_origin():
    spec = HoplSpec.from_ints(2, 2, 3, 11, [0])
    assert not hopl_net(spec).points_array().any()


def test_antithetic_gains_ones_column():
    spec = HoplSpec.from_ints(3, 2, 2, default_modulus(2, 3).to_int(), [4, 5])
    anti = hopl_net(spec).antithetic()
    for C in anti.matrices:
        assert np.all(C.rows[:, -1] == 1) and C.continuation.tolist() == [0, 0, 1]


def test_dual_examples():
    spec = HoplSpec.from_ints(2, 2, 2, 7, [1, 3])
    assert hopl_dual_contains(spec, (0, 0))
    with pytest.raises(ValueError):
        hopl_dual_contains(spec, (1,))


@pytest.mark.parametrize("b", [2, 3])
def test_dual_matches_matrix_route(b):
    rng = np.random.default_rng(b)
    for n in (1, 2, 3):
        p = default_modulus(n, b)
        for m in range(1, n + 1):
            for _ in range(4):
                q = [int(c) for c in rng.integers(0, b**n, size=2)]
                spec = HoplSpec.from_ints(b, m, n, p.to_int(), q)
                net = hopl_net(spec)
                for k in itertools.product(range(b**3), repeat=2):
                    assert hopl_dual_contains(spec, k) == net.dual_contains(k)


def test_constant_A_examples():
    assert constant_A(2, 1.0, 2) == 1.5
    assert constant_A_exact(2, 2) == Fraction(3, 2)
    with pytest.raises(ValueError):
        constant_A(2, 0.5, 2)
    with pytest.raises(ValueError):
        constant_A(3, 1.1, 2)


def brute_mu_sum(alpha, lam, b, K):
    return math.fsum(b ** (-lam * mu_alpha(k, alpha, b)) for k in range(1, b**K))


@pytest.mark.parametrize("alpha,b,K", [(2, 2, 8), (3, 2, 7), (2, 3, 5), (3, 3, 4)])
def test_mu_partial_sum_matches_brute_force(alpha, b, K):
    assert mu_partial_sum(alpha, b, K) == sum(
        Fraction(1, b ** mu_alpha(k, alpha, b)) for k in range(1, b**K)
    )
    assert abs(mu_partial_sum(alpha, b, K, lam=0.7) - brute_mu_sum(alpha, 0.7, b, K)) < 1e-12


def test_partial_sums_increase_to_A():
    prev = 0
    for K in range(1, 20):
        cur = mu_partial_sum(2, 2, K)
        assert prev < cur < constant_A_exact(2, 2)
        prev = cur


def test_C_D_constants():
    C, D = constants_C_D(2, 2)
    assert C[0] == 0.5 and C[1] == 0.25 and len(C) == 4
    for alpha in (2, 3, 4):
        for b in (2, 3, 5):
            assert constants_C_D(alpha, b)[1] > 0
    assert constant_C_alpha_lambda(2, 1.0, 2) == pytest.approx(2 * math.sqrt(D) * 1.5)


def direct_bound_oracle(spec, params, restrict_delta=True):
    """Double loop over k_u in {1, ..., b^K - 1}^|u| using the congruence test."""
    b, s = spec.b, spec.s
    K = params.trunc_for(spec.n)
    _, D = constants_C_D(params.alpha, b)
    total = 0.0
    for u, g in params.weights.subsets():
        inner = 0.0
        for ku in itertools.product(range(1, b**K), repeat=len(u)):
            k = [0] * s
            for j, kj in zip(u, ku):
                k[j] = kj
            if restrict_delta and delta(k, b) != 0:
                continue
            if hopl_dual_contains(spec, k):
                inner += b ** (-mu_alpha(k, params.alpha, b))
        total += math.sqrt(g) * D ** (len(u) / 2) * inner
    return total


def test_bound_matches_direct_oracle_one_dim():
    spec = HoplSpec.from_ints(2, 1, 1, 2, [1])
    params = ErrorBoundParams(2, 1.0, Weights.constant(1), trunc=8)
    assert bound_B(spec, params).truncated == pytest.approx(direct_bound_oracle(spec, params), rel=1e-12)


@pytest.mark.parametrize("b,n,m,q", [(2, 2, 2, [1, 3]), (2, 3, 2, [5, 6]), (3, 2, 1, [1, 7])])
def test_bound_matches_direct_oracle(b, n, m, q):
    spec = HoplSpec.from_ints(b, m, n, default_modulus(n, b).to_int(), q)
    K = 5 if b == 2 else 3
    for w in (Weights(2, product=[1.0, 0.3]), Weights(2, explicit={(0,): 0.5, (0, 1): 0.2})):
        params = ErrorBoundParams(2, 1.0, w, trunc=K)
        for restrict in (True, False):
            got = bound_B(spec, params, restrict_delta=restrict).truncated
            assert got == pytest.approx(direct_bound_oracle(spec, params, restrict), rel=1e-12)


def test_tail_certifies_deeper_truncation():
    spec = HoplSpec.from_ints(2, 2, 2, 7, [1, 2])
    w = Weights.constant(2)
    shallow = bound_B(spec, ErrorBoundParams(2, 1.0, w, trunc=4))
    deep = bound_B(spec, ErrorBoundParams(2, 1.0, w, trunc=10))
    assert shallow.truncated <= deep.truncated <= shallow.total
    assert deep.total <= shallow.total


def test_tail_explicit_matches_product():
    spec = HoplSpec.from_ints(2, 2, 2, 7, [1, 2])
    prod = Weights(2, product=[0.5, 0.2])
    expl = Weights(2, explicit={(0,): 0.5, (1,): 0.2, (0, 1): 0.1})
    a = bound_B(spec, ErrorBoundParams(2, 1.0, prod))
    b = bound_B(spec, ErrorBoundParams(2, 1.0, expl))
    assert a.truncated == pytest.approx(b.truncated, rel=1e-12)
    assert a.tail == pytest.approx(b.tail, rel=1e-12)


def test_fourier_matches_direct():
    spec = HoplSpec.from_ints(3, 2, 3, default_modulus(3, 3).to_int(), [5, 11, 20])
    params = ErrorBoundParams(2, 1.0, Weights.constant(3, 0.7), trunc=5)
    a = bound_B(spec, params, method="direct").truncated
    b = bound_B(spec, params, method="fourier").truncated
    assert a == pytest.approx(b, rel=1e-10)


def test_zero_weights_give_zero():
    spec = HoplSpec.from_ints(2, 2, 2, 7, [1, 2])
    r = bound_B(spec, ErrorBoundParams(2, 1.0, Weights.constant(2, 0.0)))
    assert r.total == 0.0


def test_antithetic_restriction_never_larger():
    rng = np.random.default_rng(1)
    for _ in range(10):
        q = [int(c) for c in rng.integers(0, 8, size=2)]
        spec = HoplSpec.from_ints(2, 2, 3, 11, q)
        params = ErrorBoundParams(2, 1.0, Weights.constant(2))
        assert bound_B(spec, params).total <= bound_B(spec, params, restrict_delta=False).total


def test_weights_dimension_mismatch():
    spec = HoplSpec.from_ints(2, 2, 2, 7, [1, 2])
    with pytest.raises(ValueError):
        bound_B(spec, ErrorBoundParams(2, 1.0, Weights.constant(3)))


def test_params_validation():
    with pytest.raises(ValueError):
        ErrorBoundParams(1, 1.0, Weights.constant(1))
    with pytest.raises(ValueError):
        ErrorBoundParams(2, 0.4, Weights.constant(1))


def test_search_two_candidates():
    params = ErrorBoundParams(2, 1.0, Weights.constant(1))
    res = search_q(P(2), 1, params)
    values = {c: bound_B(HoplSpec.from_ints(2, 1, 1, 2, [c]), params).truncated for c in (0, 1)}
    best = min(values, key=lambda c: (values[c], c))
    assert res.q[0].to_int() == best
    assert res.n_candidates == 2


def test_search_min_below_mean_and_averaging_bound():
    w = Weights.constant(2)
    params = ErrorBoundParams(2, 1.0, w)
    res = search_q(P(7), 2, params)
    assert res.bound.total <= res.mean_bound()
    assert res.mean_bound() <= averaging_bound(2, 2, 2, 2, 1.0, w)


def test_search_tie_break_is_lexicographic():
    # with zero weight on the second coordinate every q_2 ties
    params = ErrorBoundParams(2, 1.0, Weights(2, product=[1.0, 0.0]))
    res = search_q(P(7), 2, params)
    assert res.q[1].to_int() == 0


def test_search_random_is_deterministic():
    params = ErrorBoundParams(2, 1.0, Weights.constant(3, 0.5))
    p = default_modulus(6, 2)
    a = search_q(p, 4, params, strategy="random", trials=20, seed=3)
    b = search_q(p, 4, params, strategy="random", trials=20, seed=3)
    assert a.q == b.q and a.bound == b.bound


def test_search_parallel_matches_serial():
    params = ErrorBoundParams(2, 1.0, Weights.constant(2))
    p = default_modulus(3, 2)
    a = search_q(p, 3, params)
    b = search_q(p, 3, params, n_jobs=2)
    assert a.q == b.q and a.bound == b.bound


def test_search_guard_and_warning():
    params = ErrorBoundParams(2, 1.0, Weights.constant(2))
    with pytest.raises(GuardError):
        search_q(default_modulus(11, 2), 2, params)
    with pytest.warns(UserWarning, match="reducible"):
        search_q(P(5), 2, params)
    with pytest.raises(ValueError):
        search_q(P(7), 2, params, strategy="greedy")


def test_default_modulus_irreducible():
    for n in range(1, 7):
        assert is_irreducible(default_modulus(n, 2))
