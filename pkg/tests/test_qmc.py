import math

import numpy as np
import pytest
from helpers import random_net

from antiqmc.digits import delta
from antiqmc.net import DigitalNet, GeneratingMatrix
from antiqmc.qmc import (
    F1,
    F2,
    F3,
    CustomFunction,
    WalshPolynomial,
    convergence_study,
    exact_integral,
    fit_slope,
    integrate,
    make_function,
    signed_error_check,
)
from antiqmc.sobol import sobol_net
from antiqmc.walsh import walsh_coefficient_oracle


def test_constant_function():
    f = CustomFunction(lambda X: np.full(len(X), 3.5), 2, 3.5)
    rng = np.random.default_rng(0)
    assert integrate(f, rng.random((11, 2))) == 3.5


def test_single_point():
    assert integrate(F1(1, 0.1, 1), np.zeros((1, 1))) == 1.0


def test_empty_point_set():
    with pytest.raises(ValueError):
        integrate(F1(1), np.zeros((0, 1)))


def test_exact_integrals():
    assert exact_integral(F1(1, 0.1, 1)) == pytest.approx(10 * (math.exp(0.1) - 1), rel=1e-15)
    assert exact_integral(F2(5, 0.5)) == 1.0
    assert exact_integral(F3(5, 0.1)) == 1.0
    with pytest.raises(ValueError):
        exact_integral(CustomFunction(lambda X: X[:, 0], 1))


def test_parameter_validation():
    with pytest.raises(ValueError):
        F1(2, theta=0)
    with pytest.raises(ValueError):
        F2(2, w=-1)
    with pytest.raises(ValueError):
        make_function("f9", 2)


def test_one_dimensional_brackets_have_zero_mean():
    x = np.polynomial.legendre.leggauss(40)
    nodes, weights = (x[0] + 1) / 2, x[1] / 2
    for g in (F2.g, F3.g):
        assert abs(np.dot(weights, g(nodes))) < 1e-14


def test_walsh_mean_over_net_is_dual_indicator():
    rng = np.random.default_rng(1)
    for b in (2, 3):
        net = random_net(rng, b, 2, 2)
        dual = set(net.dual_enumerate(2))
        pts = net.points()
        for k in [(0, 1), (1, 1), (2, 3), (b, 0)]:
            f = WalshPolynomial(b, {k: 1.0})
            val = integrate(f, pts)
            assert abs(val - (1.0 if k in dual else 0.0)) < 1e-12


def test_walsh_polynomial_float_and_group_agree():
    rng = np.random.default_rng(2)
    net = random_net(rng, 2, 2, 3, continuation=False)
    f = WalshPolynomial.random(2, 2, 3, 5, rng)
    assert abs(integrate(f, net.points()) - integrate(f, net.points_array())) < 1e-12


def test_walsh_coefficients_via_oracle():
    f = WalshPolynomial(3, {(0, 0): 0.5, (4, 1): 1 - 2j, (2, 7): 0.25})
    for k, c in f.terms.items():
        assert abs(walsh_coefficient_oracle(f, k, 3, 2) - c) < 1e-12
    assert abs(walsh_coefficient_oracle(f, (1, 1), 3, 2)) < 1e-12


def test_signed_error_trivial():
    net = DigitalNet([GeneratingMatrix.identity(2, 2)])
    lhs, rhs = signed_error_check(WalshPolynomial(2, {(0,): 1.0}), net)
    assert lhs == 0 and rhs == 0


def test_signed_error_single_dual_term():
    net = DigitalNet([GeneratingMatrix.identity(2, 2)] * 2)
    dual = [k for k in net.dual_enumerate(3) if any(k)]
    kept = next(k for k in dual if delta(k, 2) == 0)
    killed = next(k for k in dual if delta(k, 2) != 0)
    lhs, rhs = signed_error_check(WalshPolynomial(2, {kept: 0.7}), net)
    assert abs(lhs - 0.7) < 1e-12 and abs(rhs - 0.7) < 1e-12
    lhs, rhs = signed_error_check(WalshPolynomial(2, {killed: 0.7}), net)
    assert abs(lhs) < 1e-12 and rhs == 0


def test_signed_error_index_bound():
    net = DigitalNet([GeneratingMatrix.identity(2, 2)])
    with pytest.raises(ValueError):
        signed_error_check(WalshPolynomial(2, {(9,): 1.0}), net, K=2)
    with pytest.raises(ValueError):
        signed_error_check(WalshPolynomial(3, {(1,): 1.0}), net)


def test_antithetic_restriction_dominates_absolute_sum():
    rng = np.random.default_rng(4)
    for b in (2, 3):
        for _ in range(10):
            net = random_net(rng, b, 2, 2)
            f = WalshPolynomial.random(b, 2, 3, 8, rng)
            dual = [k for k in net.dual_enumerate(3) if any(k)]
            full = sum(abs(f.coefficient(k)) for k in dual)
            anti = sum(abs(f.coefficient(k)) for k in dual if delta(k, b) == 0)
            assert anti <= full


def test_binary_antithetic_integrates_affine_exactly():
    c = np.array([0.3, -1.2, 2.0])
    f = CustomFunction(lambda X: X @ c + 0.5, 3, float(c.sum() / 2 + 0.5))
    for m in (1, 3, 6):
        net = sobol_net(3, m).antithetic()
        assert integrate(f, net.points_array()) == pytest.approx(f.exact_integral(), abs=1e-15)


def test_fit_slope():
    N = 2.0 ** np.arange(5, 10)
    assert fit_slope(N, 3 * N**-1.5) == pytest.approx(-1.5)
    assert math.isnan(fit_slope([2, 4], [0.0, 0.1]))


def test_convergence_constant_function_flags():
    f = CustomFunction(lambda X: np.ones(len(X)), 2, 1.0)
    res = convergence_study(f, range(2, 5))
    assert all(r.abs_error == 0 for r in res.rows)
    assert math.isnan(res.slopes["plain"])
    assert any("undefined" in flag for flag in res.flags)


def test_convergence_rows_and_csv(tmp_path):
    out = tmp_path / "c.csv"
    res = convergence_study(F1(4), range(3, 7), variant="both", out=out)
    lines = out.read_text().splitlines()
    assert lines[0] == "variant,m,N,abs_error"
    assert len(lines) == 1 + 2 * 4
    for r in res.rows:
        assert r.N == 2 ** (r.m + (r.variant == "antithetic"))
        assert r.abs_error >= 0
    assert len(res.step_slopes["plain"]) == 3


def test_convergence_hopl_generator():
    res = convergence_study(F1(3), range(2, 6), generator="hopl", variant="plain")
    assert [r.N for r in res.rows] == [4, 8, 16, 32]
    with pytest.raises(ValueError):
        convergence_study(F1(3), range(2, 4), generator="halton")
    with pytest.raises(ValueError):
        convergence_study(F1(3), [])
