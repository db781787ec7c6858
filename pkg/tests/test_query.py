import numpy as np
import pytest

from conftest import fm1_oracle, make_dataset
from fairrank import Unsatisfiable, md_baseline, md_online, theorem7_bound
from fairrank.arrangement import sat_regions
from fairrank.fairness import oracle_from_predicate
from fairrank.geometry import weight_angle_distance
from fairrank.gridindex import build_cell_index
from fairrank.query import locate_only


def test_theorem7_bound_closed_form():
    # 4 asin(sqrt(d-1)/2 * (area/N)^(1/(d-1))) evaluated by hand for d=3
    n = 250
    side = np.sqrt((np.pi / 2) / n)
    expect = 4 * np.arcsin(np.sqrt(2.0) / 2.0 * side)
    assert theorem7_bound(n, 3) == pytest.approx(expect, abs=1e-15)
    assert theorem7_bound(40_000, 3) == pytest.approx(1.77e-2, rel=5e-3)


def test_theorem7_bound_monotone_in_n():
    assert theorem7_bound(100, 3) > theorem7_bound(1000, 3) > theorem7_bound(10_000, 3)


def test_theorem7_bound_validation():
    with pytest.raises(ValueError):
        theorem7_bound(0, 3)
    with pytest.raises(ValueError):
        theorem7_bound(10, 1)


def test_md_baseline_satisfactory_passthrough(small_3d):
    oracle = oracle_from_predicate(lambda r, d: True)
    regions = sat_regions(small_3d, oracle)
    w = np.array([0.3, 0.3, 0.4])
    res = md_baseline(regions, small_3d, oracle, w)
    assert res.satisfactory_as_is
    assert res.distance == 0.0
    assert np.array_equal(res.suggestion, w)


def test_md_baseline_unsatisfiable(small_3d):
    oracle = oracle_from_predicate(lambda r, d: False)
    with pytest.raises(Unsatisfiable):
        md_baseline([], small_3d, oracle, np.array([1.0, 1.0, 1.0]))


def test_md_baseline_suggestion_verifies(small_3d):
    oracle = fm1_oracle(k=4, min_count=2, max_count=2)
    regions = sat_regions(small_3d, oracle)
    rng = np.random.default_rng(1)
    checked = 0
    for _ in range(20):
        w = rng.uniform(0.05, 1.0, size=3)
        res = md_baseline(regions, small_3d, oracle, w)
        assert res.verified
        assert oracle.satisfies_weights(small_3d, res.suggestion)
        if not res.satisfactory_as_is:
            checked += 1
            assert res.distance > 0
            assert res.distance == pytest.approx(
                weight_angle_distance(w, res.suggestion), abs=1e-12)
    assert checked > 0


def test_md_baseline_beats_or_matches_random_satisfactory_points(small_3d):
    # the reported suggestion should be at least as close as any satisfactory
    # point found by blind sampling
    oracle = fm1_oracle(k=4, min_count=2)
    regions = sat_regions(small_3d, oracle)
    rng = np.random.default_rng(3)
    w = rng.uniform(0.05, 1.0, size=3)
    res = md_baseline(regions, small_3d, oracle, w)
    for _ in range(300):
        probe = rng.uniform(1e-3, 1.0, size=3)
        if oracle.satisfies_weights(small_3d, probe):
            assert res.distance <= weight_angle_distance(w, probe) + 1e-6


def test_md_online_suggestion_verifies(small_3d):
    oracle = fm1_oracle(k=4, min_count=2)
    index = build_cell_index(small_3d, oracle, N=200)
    rng = np.random.default_rng(5)
    for _ in range(25):
        w = rng.uniform(0.05, 1.0, size=3)
        res = md_online(index, small_3d, oracle, w)
        assert res.verified
        assert oracle.satisfies_weights(small_3d, res.suggestion)
        if res.satisfactory_as_is:
            assert res.distance == 0.0


def test_md_online_unsatisfiable(small_3d):
    oracle = oracle_from_predicate(lambda r, d: False)
    index = build_cell_index(small_3d, oracle, N=50)
    with pytest.raises(Unsatisfiable):
        md_online(index, small_3d, oracle, np.array([1.0, 1.0, 1.0]))


def test_md_online_within_bound_of_baseline():
    ds = make_dataset(12, 3, seed=17)
    oracle = fm1_oracle(k=4, min_count=2, max_count=2)
    n_cells = 400
    index = build_cell_index(ds, oracle, N=n_cells)
    regions = sat_regions(ds, oracle)
    bound = theorem7_bound(n_cells, 3)
    rng = np.random.default_rng(11)
    gaps = []
    for _ in range(25):
        w = rng.uniform(0.05, 1.0, size=3)
        if oracle.satisfies_weights(ds, w):
            continue
        approx = md_online(index, ds, oracle, w)
        exact = md_baseline(regions, ds, oracle, w)
        gaps.append(approx.distance - exact.distance)
    assert gaps
    within = sum(1 for g in gaps if g <= bound)
    assert within / len(gaps) >= 0.95


def test_locate_only_matches_partition(small_3d):
    oracle = oracle_from_predicate(lambda r, d: True)
    index = build_cell_index(small_3d, oracle, N=80)
    w = np.array([0.2, 0.3, 0.9])
    cell, theta = locate_only(index, w)
    from fairrank.geometry import to_polar

    assert cell == index.partition.locate(to_polar(w)[1])
    assert np.array_equal(theta, index.assigned[cell])
