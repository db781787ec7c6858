import numpy as np
import pytest

from fairrank import Constraint, Dataset, OracleConfig, oracle_from_config


def make_dataset(n, d, seed, n_groups=2):
    rng = np.random.default_rng(seed)
    attrs = rng.uniform(0.0, 1.0, size=(n, d))
    groups = rng.integers(0, n_groups, size=n)
    books = {"g": {chr(ord("a") + i): i for i in range(n_groups)}}
    return Dataset(attrs, types={"g": groups}, codebooks=books)


def fm1_oracle(k, group=1, min_count=None, max_count=None):
    cfg = OracleConfig(mode="FM1",
                       constraints=[Constraint("g", group, k,
                                               min_count=min_count,
                                               max_count=max_count)])
    return oracle_from_config(cfg)


def dense_sweep_2d(dataset, oracle, m):
    """Brute-force oracle classification of m angles across [0, pi/2]."""
    thetas = np.linspace(0.0, np.pi / 2, m)
    ok = np.empty(m, dtype=bool)
    for i, t in enumerate(thetas):
        w = np.array([np.cos(t), np.sin(t)])
        ok[i] = oracle.satisfies_weights(dataset, w)
    return thetas, ok


@pytest.fixture
def small_2d():
    return make_dataset(20, 2, seed=11)


@pytest.fixture
def small_3d():
    return make_dataset(12, 3, seed=7)
