import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairrank import Item
from fairrank.exchange import (DegenerateExchange, dominates,
                               exchange_angle_2d, hyperpolar,
                               weight_space_exchange)
from fairrank.geometry import to_polar


def test_dominance():
    assert dominates([2.0, 3.0], [1.0, 3.0])
    assert not dominates([2.0, 3.0], [2.0, 3.0])
    assert not dominates([2.0, 1.0], [1.0, 3.0])


def test_exchange_angle_2d_known_value():
    # t1=(1,2), t2=(2,1): equal scores where cos t = sin t, theta = pi/4
    theta, reason = exchange_angle_2d(np.array([1.0, 2.0]), np.array([2.0, 1.0]))
    assert reason is None
    assert theta == pytest.approx(np.pi / 4, abs=1e-12)


def test_exchange_angle_2d_asymmetric_value():
    # deltas (-1, 3): tan theta = 1/3
    theta, reason = exchange_angle_2d(np.array([1.0, 4.0]), np.array([2.0, 1.0]))
    assert reason is None
    assert theta == pytest.approx(np.arctan(1.0 / 3.0), abs=1e-12)


def test_exchange_angle_2d_degenerate_reasons():
    assert exchange_angle_2d(np.array([2.0, 2.0]), np.array([1.0, 1.0])) \
        == (None, "dominance")
    assert exchange_angle_2d(np.array([1.0, 1.0]), np.array([1.0, 1.0])) \
        == (None, "coincident")


def test_exchange_angle_2d_symmetry():
    a, b = np.array([1.0, 3.0]), np.array([2.0, 0.5])
    t1, _ = exchange_angle_2d(a, b)
    t2, _ = exchange_angle_2d(b, a)
    assert t1 == pytest.approx(t2, abs=1e-12)


def test_weight_space_exchange_3d_instance():
    # items (2,4,1) and (1,2,3): plane w1 + 2 w2 - 2 w3 = 0
    t1 = Item(id=1, attrs=np.array([1.0, 2.0, 3.0]))
    t2 = Item(id=2, attrs=np.array([2.0, 4.0, 1.0]))
    exch = weight_space_exchange(t2, t1)
    assert np.array_equal(exch.normal, np.array([1.0, 2.0, -2.0]))


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 6), st.integers(0, 10_000))
def test_weight_space_exchange_equals_score_difference(d, seed):
    rng = np.random.default_rng(seed)
    a = Item(id=0, attrs=rng.uniform(0, 10, size=d))
    b = Item(id=1, attrs=rng.uniform(0, 10, size=d))
    exch = weight_space_exchange(a, b)
    for w in rng.uniform(0, 1, size=(20, d)):
        assert abs(float(exch.normal @ w)
                   - (float(a.attrs @ w) - float(b.attrs @ w))) <= 1e-9


def _random_pair(rng, d):
    while True:
        a = Item(id=0, attrs=rng.uniform(0, 1, size=d))
        b = Item(id=1, attrs=rng.uniform(0, 1, size=d))
        if not dominates(a.attrs, b.attrs) and not dominates(b.attrs, a.attrs):
            return a, b


def test_hyperpolar_passes_through_equal_score_points():
    rng = np.random.default_rng(5)
    for d in (3, 4, 5):
        a, b = _random_pair(rng, d)
        plane = hyperpolar(a, b)
        assert plane.coeffs.shape == (d - 1,)
        # the construction points equalize the scores and lie on the plane
        assert plane.points is not None
        for p in plane.points:
            gap = abs(float((a.attrs - b.attrs) @ p))
            assert gap <= 1e-6 * max(np.linalg.norm(a.attrs),
                                     np.linalg.norm(b.attrs)) * np.linalg.norm(p)
            _, theta = to_polar(p)
            assert plane.eval(theta) == pytest.approx(plane.rhs, abs=1e-8)


def test_hyperpolar_argument_order_symmetry():
    rng = np.random.default_rng(9)
    a = Item(id=3, attrs=rng.uniform(0, 1, size=3))
    b = Item(id=8, attrs=rng.uniform(0, 1, size=3))
    while dominates(a.attrs, b.attrs) or dominates(b.attrs, a.attrs):
        b = Item(id=8, attrs=rng.uniform(0, 1, size=3))
    p1 = hyperpolar(a, b)
    p2 = hyperpolar(b, a)
    assert np.allclose(p1.coeffs, p2.coeffs, atol=1e-9)
    assert p1.homogeneous == p2.homogeneous


def test_hyperpolar_rejects_dominated_pair():
    a = Item(id=0, attrs=np.array([2.0, 2.0, 2.0]))
    b = Item(id=1, attrs=np.array([1.0, 1.0, 1.0]))
    with pytest.raises(DegenerateExchange):
        hyperpolar(a, b)


def test_hyperpolar_rejects_2d():
    a = Item(id=0, attrs=np.array([1.0, 2.0]))
    b = Item(id=1, attrs=np.array([2.0, 1.0]))
    with pytest.raises(ValueError):
        hyperpolar(a, b)


def test_weight_space_exchange_coincident():
    a = Item(id=0, attrs=np.array([1.0, 1.0, 1.0]))
    with pytest.raises(DegenerateExchange):
        weight_space_exchange(a, a)


def test_exchange_angle_2d_five_item_rows():
    # rows one and two of the five-item example: solve the 2x2 dual system
    a = np.array([1.0, 3.5])
    b = np.array([1.5, 3.1])
    x = (1.0 - a[1] / b[1]) / (a[0] - b[0] * a[1] / b[1])
    y = (1.0 - a[0] * x) / a[1]
    theta, reason = exchange_angle_2d(a, b)
    assert reason is None
    assert theta == pytest.approx(np.arctan(y / x), abs=1e-12)
    assert theta == pytest.approx(0.8961, abs=1e-4)


def test_hyperpolar_symmetric_axis_pair():
    # exchange of the first two axes contains every ray (1, 1, c)
    a = Item(id=0, attrs=np.array([1.0, 0.0, 0.0]))
    b = Item(id=1, attrs=np.array([0.0, 1.0, 0.0]))
    plane = hyperpolar(a, b)
    for c in (0.0, 1.0):
        _, theta = to_polar(np.array([1.0, 1.0, c]))
        assert abs(plane.eval(theta) - plane.rhs) <= 1e-6
