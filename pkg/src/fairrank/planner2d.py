"""Exact 2D pipeline: offline ray sweep and online binary search.

The sweep starts from the ordering on the x-axis (angle 0) and walks toward
the y-axis (angle pi/2), applying one pairwise swap per ordering exchange and
consulting the oracle once per sector between consecutive exchange angles.
Runs of satisfactory sectors merge into closed angle ranges.
"""

from __future__ import annotations

import logging
from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .data import Dataset
from .errors import Unsatisfiable
from .fairness import Oracle, Ranking, order_by
from .geometry import to_polar

log = logging.getLogger(__name__)

START = "start"
END = "end"
_BOUNDARY_NUDGE = 1e-9


@dataclass(frozen=True)
class SatisfactoryRanges2D:
    """Alternating (theta, start|end) boundaries of satisfactory angle ranges."""

    boundaries: tuple

    def __post_init__(self):
        angles = [b[0] for b in self.boundaries]
        kinds = [b[1] for b in self.boundaries]
        if angles != sorted(angles):
            raise ValueError("boundaries must be sorted")
        if kinds != [START if i % 2 == 0 else END for i in range(len(kinds))]:
            raise ValueError("boundary kinds must alternate start/end")

    @cached_property
    def angles(self) -> list:
        return [b[0] for b in self.boundaries]

    @property
    def empty(self) -> bool:
        return not self.boundaries

    def contains(self, theta: float) -> bool:
        """Closed-range membership of a single angle."""
        angles = self.angles
        idx = bisect_right(angles, theta)
        if idx % 2 == 1:
            return True
        # even index is inside only when exactly on the preceding end boundary
        return idx > 0 and angles[idx - 1] == theta


def _exchange_events(dataset: Dataset):
    """Sorted (theta, i, j) exchange events for all non-dominated pairs."""
    x = dataset.attrs[:, 0]
    y = dataset.attrs[:, 1]
    events = []
    for i in range(dataset.n - 1):
        d1 = x[i] - x[i + 1:]
        d2 = y[i] - y[i + 1:]
        mask = (d1 * d2) < 0  # strictly opposite signs: a real exchange
        js = np.nonzero(mask)[0] + i + 1
        theta = np.arctan2(np.abs(d1[mask]), np.abs(d2[mask]))
        # arctan(-d1/d2) with opposite-sign deltas reduces to |d1|,|d2|
        events.extend(zip(theta.tolist(), [i] * js.size, js.tolist()))
    events.sort()
    return events


def raysweep_2d(dataset: Dataset, oracle: Oracle) -> SatisfactoryRanges2D:
    if dataset.d != 2:
        raise ValueError("raysweep_2d requires a 2-attribute dataset")
    events = _exchange_events(dataset)

    initial = order_by(dataset, np.array([1.0, 0.0]))
    omega = list(initial.positions)
    where = {p: idx for idx, p in enumerate(omega)}

    def sector_ok(theta_mid: float) -> bool:
        w = np.array([np.cos(theta_mid), np.sin(theta_mid)])
        positions = np.array(omega)
        ranking = Ranking(ids=dataset.ids[positions], positions=positions,
                          scores=dataset.attrs[positions] @ w)
        return oracle.evaluate(ranking, dataset)

    # sector edges: 0, batched event angles, pi/2
    edges = [0.0]
    batches = []
    idx = 0
    while idx < len(events):
        theta = events[idx][0]
        batch = []
        while idx < len(events) and events[idx][0] == theta:
            batch.append(events[idx])
            idx += 1
        edges.append(theta)
        batches.append(batch)
    edges.append(np.pi / 2)

    boundaries = []
    open_start = None
    for s in range(len(edges) - 1):
        if s > 0:
            for _, i, j in batches[s - 1]:
                pi, pj = where[i], where[j]
                omega[pi], omega[pj] = omega[pj], omega[pi]
                where[i], where[j] = pj, pi
        ok = sector_ok((edges[s] + edges[s + 1]) / 2.0)
        if ok and open_start is None:
            open_start = edges[s]
        elif not ok and open_start is not None:
            boundaries.append((open_start, START))
            boundaries.append((edges[s], END))
            open_start = None
    if open_start is not None:
        boundaries.append((open_start, START))
        boundaries.append((np.pi / 2, END))

    ranges = SatisfactoryRanges2D(boundaries=tuple(boundaries))
    _verify_boundaries(dataset, oracle, ranges)
    return ranges


def _verify_boundaries(dataset, oracle, ranges: SatisfactoryRanges2D):
    """One build-time oracle check per boundary, nudged inward off the tie."""
    for theta, kind in ranges.boundaries:
        probe = theta + _BOUNDARY_NUDGE if kind == START else theta - _BOUNDARY_NUDGE
        probe = min(max(probe, 0.0), np.pi / 2)
        w = np.array([np.cos(probe), np.sin(probe)])
        if not oracle.satisfies_weights(dataset, w):
            log.warning("2D boundary %.12f (%s) failed inward verification", theta, kind)


def online_2d(ranges: SatisfactoryRanges2D, w) -> np.ndarray:
    """Return w if satisfactory, else the weights at the nearest range boundary."""
    if ranges.empty:
        raise Unsatisfiable("no satisfactory function exists")
    w = np.asarray(w, dtype=float)
    if w.shape != (2,):
        raise ValueError("online_2d requires a 2-weight vector")
    r, theta_vec = to_polar(w)
    theta = float(theta_vec[0])
    if ranges.contains(theta):
        return w
    angles = ranges.angles
    idx = bisect_right(angles, theta)
    candidates = []
    if idx > 0:
        candidates.append(angles[idx - 1])
    if idx < len(angles):
        candidates.append(angles[idx])
    best = min(candidates, key=lambda a: abs(a - theta))
    return np.array([r * np.cos(best), r * np.sin(best)])
