"""Rankings and the fairness oracle.

The oracle is a black-box binary predicate over an ordering of the dataset.
FM1/FM2 proportionality constraints (group-count bounds inside the top-k
prefix) compile to such a predicate; any user-supplied pure predicate works
in their place.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import Dataset


@dataclass(frozen=True)
class Ranking:
    """Item ids ordered best-first, plus the row positions used internally."""

    ids: np.ndarray
    positions: np.ndarray
    scores: np.ndarray

    def __len__(self):
        return self.ids.size


def order_by(dataset: Dataset, w) -> Ranking:
    """Sort items by score descending; ties broken by ascending item id."""
    w = np.asarray(w, dtype=float)
    if w.shape != (dataset.d,):
        raise ValueError(f"weight vector has dimension {w.size}, dataset has {dataset.d}")
    scores = dataset.attrs @ w
    order = np.lexsort((dataset.ids, -scores))
    return Ranking(ids=dataset.ids[order], positions=order, scores=scores[order])


def _resolve_fraction(value, total: int, round_up: bool) -> int:
    if isinstance(value, str):
        value = value.strip()
        if not value.endswith("%"):
            raise ValueError(f"expected a percentage string, got {value!r}")
        value = float(value[:-1]) / 100.0
    if isinstance(value, float):
        # floats are fractions of the total; use plain ints for counts
        if not 0.0 < value <= 1.0:
            raise ValueError(f"fraction {value} outside (0, 1]")
        raw = value * total
        return int(np.ceil(raw)) if round_up else int(np.floor(raw))
    count = int(value)
    if count < 0:
        raise ValueError("counts must be non-negative")
    return count


@dataclass(frozen=True)
class Constraint:
    """Bound the count of one group within the top-k prefix."""

    type_attr: str
    group: int
    k: object  # absolute count, fraction in (0,1], or "30%"
    min_count: object = None
    max_count: object = None

    def __post_init__(self):
        if self.min_count is None and self.max_count is None:
            raise ValueError("constraint needs at least one of min/max")


@dataclass(frozen=True)
class OracleConfig:
    mode: str  # "FM1" or "FM2"
    constraints: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.mode not in ("FM1", "FM2"):
            raise ValueError("mode must be FM1 or FM2")
        if self.mode == "FM1":
            attrs = {c.type_attr for c in self.constraints}
            if len(attrs) > 1:
                raise ValueError("FM1 allows a single type attribute")


def _compiled_bounds(config: OracleConfig, n: int):
    compiled = []
    for c in config.constraints:
        k = _resolve_fraction(c.k, n, round_up=False)
        if not 1 <= k <= n:
            raise ValueError(f"top-k size {k} outside [1, n]")
        lo = 0 if c.min_count is None else _resolve_fraction(c.min_count, k, round_up=True)
        hi = k if c.max_count is None else _resolve_fraction(c.max_count, k, round_up=False)
        compiled.append((c.type_attr, c.group, k, lo, hi))
    return compiled


def oracle_eval(config: OracleConfig, ranking: Ranking, dataset: Dataset) -> bool:
    """True iff every constraint's group count in the top-k prefix is in bounds."""
    for type_attr, group, k, lo, hi in _compiled_bounds(config, dataset.n):
        if type_attr not in dataset.types:
            raise KeyError(f"unknown type attribute {type_attr!r}")
        codes = dataset.types[type_attr]
        known = dataset.codebooks.get(type_attr)
        if known is not None and group not in set(known.values()):
            raise KeyError(f"unknown group code {group} for {type_attr!r}")
        count = int(np.count_nonzero(codes[ranking.positions[:k]] == group))
        if not lo <= count <= hi:
            return False
    return True


class Oracle:
    """Shareable handle over a pure binary predicate on orderings."""

    def __init__(self, fn, config: OracleConfig | None = None):
        self._fn = fn
        self.config = config

    def evaluate(self, ranking: Ranking, dataset: Dataset) -> bool:
        return bool(self._fn(ranking, dataset))

    def satisfies_weights(self, dataset: Dataset, w) -> bool:
        return self.evaluate(order_by(dataset, w), dataset)


def oracle_from_predicate(fn) -> Oracle:
    return Oracle(fn)


def oracle_from_config(config: OracleConfig) -> Oracle:
    return Oracle(lambda ranking, dataset: oracle_eval(config, ranking, dataset),
                  config=config)
