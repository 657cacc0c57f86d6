import pytest

from antiqmc._validation import GuardError
from antiqmc.weights import Weights, parse_weights


def test_product_weights():
    w = Weights(3, product=[0.5, 0.2, 1.0])
    assert w.gamma(()) == 1.0
    assert w.gamma((0, 2)) == 0.5
    assert [u for u, _ in w.subsets()][:3] == [(0,), (1,), (2,)]
    assert len(list(w.subsets())) == 7


def test_explicit_weights():
    w = Weights(2, explicit={(1, 0): 0.3, (0,): 0.1, (): 5.0})
    assert w.gamma((0, 1)) == 0.3
    assert w.gamma((1,)) == 0.0
    assert w.gamma(()) == 1.0
    assert list(w.subsets()) == [((0,), 0.1), ((0, 1), 0.3)]


def test_validation():
    with pytest.raises(ValueError):
        Weights(2)
    with pytest.raises(ValueError):
        Weights(2, product=[1.0])
    with pytest.raises(ValueError):
        Weights(2, product=[1.0, -1.0])
    with pytest.raises(ValueError):
        Weights(2, explicit={(2,): 1.0})


def test_zero_detection():
    assert Weights.constant(3, 0.0).is_zero()
    assert not Weights(2, explicit={(0,): 0.1}).is_zero()


def test_subset_guard():
    with pytest.raises(GuardError):
        list(Weights.constant(25).subsets())


def test_parse():
    assert parse_weights("product:0.5", 3).product == (0.5, 0.5, 0.5)
    assert parse_weights("product:1,2", 2).product == (1.0, 2.0)
    w = parse_weights("decay:1,2", 3)
    assert w.product == pytest.approx((1.0, 0.25, 1 / 9))
    e = parse_weights("explicit:1=0.5;2=0.25;1+2=0.1", 2)
    assert e.gamma((0, 1)) == 0.1 and e.gamma((1,)) == 0.25
    for bad in ("product:a", "wrong:1", "decay:1", "explicit:1"):
        with pytest.raises(ValueError):
            parse_weights(bad, 2)
