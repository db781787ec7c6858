"""Online query answering over satisfactory regions and the cell index."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gamma as gamma_fn

import numpy as np
from scipy.optimize import linprog, minimize

from .data import Dataset
from .errors import Unsatisfiable
from .fairness import Oracle
from .feasibility import DELTA, PLUS, find_feasible_point
from .geometry import to_cartesian, to_polar, unit_ray, weight_angle_distance
from .gridindex import DIRECT, CellIndex

log = logging.getLogger(__name__)

EXACT = "exact"
APPROXIMATE = "approximate"


@dataclass(frozen=True)
class QueryResult:
    input_w: np.ndarray
    satisfactory_as_is: bool
    suggestion: np.ndarray | None
    distance: float
    verified: bool
    mode: str


def theorem7_bound(N: int, d: int) -> float:
    """Worst-case extra angular distance of the cell-index answer."""
    if N < 1 or d < 2:
        raise ValueError("need N >= 1 and d >= 2")
    eta_cell = np.pi ** (d / 2.0) / (N * 2 ** (d - 1) * gamma_fn(d / 2.0))
    side = eta_cell ** (1.0 / (d - 1))
    return float(4.0 * np.arcsin(np.sqrt(d - 1) / 2.0 * side))


def _satisfied_result(w, mode: str) -> QueryResult:
    w = np.asarray(w, dtype=float)
    return QueryResult(input_w=w, satisfactory_as_is=True, suggestion=w,
                       distance=0.0, verified=True, mode=mode)


# ---------------------------------------------------------------------------
# exact path


def _region_constraint_rows(region):
    """(A, b) with rows a such that a . theta <= b describes the region."""
    rows, rhs = [], []
    for hs in region.halves:
        h = np.asarray(hs.plane.coeffs, dtype=float)
        if hs.sign == PLUS:
            rows.append(-h)
            rhs.append(-hs.plane.rhs)
        else:
            rows.append(h)
            rhs.append(hs.plane.rhs)
    return np.array(rows), np.array(rhs)


def _region_starts(region, dim: int, n_extra: int, rng) -> list:
    """Witness plus corner points found by random-objective LP probes."""
    starts = [np.asarray(region.witness, dtype=float)]
    a, b = (None, None)
    if region.halves:
        a, b = _region_constraint_rows(region)
    bounds = [(0.0, np.pi / 2)] * dim
    for _ in range(n_extra):
        c = rng.normal(size=dim)
        res = linprog(c, A_ub=a, b_ub=b, bounds=bounds, method="highs")
        if res.success:
            starts.append(res.x)
    return starts


def _min_distance_in_region(region, theta_query, dim: int, rng) -> tuple:
    """Minimize angular distance to the query ray over one convex region."""
    target = unit_ray(theta_query)

    def objective(theta):
        u = unit_ray(np.clip(theta, 0.0, np.pi / 2))
        return -float(u @ target)  # maximize cosine = minimize angle

    constraints = []
    if region.halves:
        a, b = _region_constraint_rows(region)
        constraints.append({"type": "ineq",
                            "fun": lambda t, a=a, b=b: b - a @ t})
    best = None
    for start in _region_starts(region, dim, n_extra=2 * dim, rng=rng):
        res = minimize(objective, start, method="SLSQP",
                       bounds=[(0.0, np.pi / 2)] * dim,
                       constraints=constraints,
                       options={"maxiter": 200, "ftol": 1e-12})
        if not res.success and res.x is None:
            continue
        theta = np.clip(res.x, 0.0, np.pi / 2)
        if region.halves and not all(hs.satisfied(theta, margin=-1e-9)
                                     for hs in region.halves):
            continue
        d = float(np.arccos(np.clip(unit_ray(theta) @ target, -1.0, 1.0)))
        if best is None or d < best[0]:
            best = (d, theta)
    if best is None:
        theta = np.asarray(region.witness, dtype=float)
        best = (float(np.arccos(np.clip(unit_ray(theta) @ target, -1.0, 1.0))), theta)
    return best


def _verified_suggestion(dataset, oracle, region, theta, r):
    """Oracle-check theta; walk back toward the region witness if needed."""
    witness = np.asarray(region.witness, dtype=float)
    for frac in (0.0, 1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0):
        probe = theta * (1 - frac) + witness * frac
        w = to_cartesian(r, probe)
        if oracle.satisfies_weights(dataset, w):
            return probe, w
    return None, None


def md_baseline(regions, dataset: Dataset, oracle: Oracle, w, rng=None) -> QueryResult:
    """Exact nearest-satisfactory search over the full region list."""
    w = np.asarray(w, dtype=float)
    if oracle.satisfies_weights(dataset, w):
        return _satisfied_result(w, EXACT)
    if not regions:
        raise Unsatisfiable("no satisfactory region exists")
    rng = np.random.default_rng(7) if rng is None else rng
    r, theta_q = to_polar(w)
    dim = theta_q.size
    best = None
    for region in regions:
        d, theta = _min_distance_in_region(region, theta_q, dim, rng)
        probe, sugg = _verified_suggestion(dataset, oracle, region, theta, r)
        if probe is None:
            continue
        d = weight_angle_distance(w, sugg)
        if best is None or d < best[0]:
            best = (d, sugg)
    if best is None:
        raise Unsatisfiable("no region yielded a verifiable suggestion")
    return QueryResult(input_w=w, satisfactory_as_is=False, suggestion=best[1],
                       distance=best[0], verified=True, mode=EXACT)


# ---------------------------------------------------------------------------
# approximate path


def md_online(index: CellIndex, dataset: Dataset, oracle: Oracle, w) -> QueryResult:
    """Cell-index lookup: O(log N) after the initial oracle check."""
    w = np.asarray(w, dtype=float)
    if oracle.satisfies_weights(dataset, w):
        return _satisfied_result(w, APPROXIMATE)
    if index.unsatisfiable:
        raise Unsatisfiable("index holds no satisfactory function")
    r, theta_q = to_polar(w)
    cell = index.partition.locate(theta_q)
    theta = index.assigned[cell]
    sugg = to_cartesian(r, theta)
    if oracle.satisfies_weights(dataset, sugg):
        return QueryResult(input_w=w, satisfactory_as_is=False, suggestion=sugg,
                           distance=weight_angle_distance(w, sugg),
                           verified=True, mode=APPROXIMATE)
    # Assigned function failed re-verification (possible when the index was
    # built on a sample of the data): fall back to the nearest directly
    # discovered function that does verify.
    log.warning("cell %d function failed verification; scanning direct cells", cell)
    u_q = unit_ray(theta_q)
    candidates = sorted(
        {tuple(index.assigned[c]) for c in index.direct_cells()},
        key=lambda t: -float(unit_ray(np.array(t)) @ u_q))
    for cand in candidates:
        sugg = to_cartesian(r, np.array(cand))
        if oracle.satisfies_weights(dataset, sugg):
            return QueryResult(input_w=w, satisfactory_as_is=False,
                               suggestion=sugg,
                               distance=weight_angle_distance(w, sugg),
                               verified=True, mode=APPROXIMATE)
    raise Unsatisfiable("no indexed function verifies against this dataset")


def locate_only(index: CellIndex, w):
    """Index lookup without the oracle pass; used for latency measurements."""
    _, theta_q = to_polar(np.asarray(w, dtype=float))
    cell = index.partition.locate(theta_q)
    return cell, index.assigned[cell]
