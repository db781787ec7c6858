"""Equal-area angle-space grid index: the approximation pipeline.

Offline: partition the angle orthant into ~N equal-area cells, attach to each
cell the exchange hyperplanes crossing it, search each cell's local
arrangement for an oracle-verified satisfactory function (early stop on first
hit), then assign each remaining cell the angularly nearest discovered
function.  The result answers nearest-satisfactory queries in O(log N).
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from math import gamma as gamma_fn

import numpy as np

from .data import Dataset
from .errors import Unsatisfiable
from .fairness import Oracle
from .feasibility import MINUS, PLUS, Box, HalfSpace, find_feasible_point, \
    hyperplane_crosses, plane_crosses_box
from .geometry import to_cartesian, unit_ray

log = logging.getLogger(__name__)


class PartitionStalled(Exception):
    """The next-angle recurrence failed to advance."""


def orthant_area(d: int) -> float:
    """Surface area of the first orthant of the unit hypersphere in R^d."""
    return np.pi ** (d / 2.0) / (2 ** (d - 1) * gamma_fn(d / 2.0))


def gamma_for(N: int, d: int) -> float:
    """Angular side length of an equal-area cell for target cell count N."""
    if N < 1 or d < 2:
        raise ValueError("need N >= 1 and d >= 2")
    eta_cell = orthant_area(d) / N
    return 2.0 * np.arcsin(eta_cell ** (1.0 / (d - 1)) / 2.0)


def _next_angle(prev_angles, theta: float, gamma: float) -> float:
    """Advance along one axis so consecutive rays are gamma apart.

    alpha and beta come from rewriting the ray-distance formula for two
    points differing in a single angle coordinate (theta_0 = pi/2 prepended);
    the sum in alpha telescopes to 1, so the move follows a great circle.
    """
    angles = [np.pi / 2.0] + list(prev_angles)
    total = 0.0
    for k in range(len(angles)):
        term = np.sin(angles[k]) ** 2
        for l in range(k + 1, len(angles)):
            term *= np.cos(angles[l]) ** 2
        total += term
    alpha = np.cos(theta) * total
    beta = np.sin(theta)
    delta = np.arctan2(beta, alpha)
    big_delta = np.hypot(alpha, beta)
    ratio = np.clip(np.cos(gamma) / big_delta, -1.0, 1.0)
    return float(np.arccos(ratio) + delta)


def _axis_breaks(prev_angles, gamma: float) -> np.ndarray:
    """Range boundaries along one axis; the last range is clamped at pi/2."""
    half_pi = np.pi / 2.0
    breaks = [0.0]
    theta = 0.0
    while theta < half_pi - 1e-12:
        nxt = _next_angle(prev_angles, theta, gamma)
        if nxt <= theta + 1e-12:
            raise PartitionStalled(f"no progress at theta={theta}")
        if nxt >= half_pi - 1e-9:
            nxt = half_pi
        breaks.append(nxt)
        theta = nxt
    breaks[-1] = half_pi
    return np.array(breaks)


@dataclass(frozen=True)
class AnglePartition:
    """Product grid over [0, pi/2]^(d-1) with ~equal-area cells.

    The next-angle recurrence is independent of the previous axes' angles
    (single-axis moves are great circles), so every row of an axis shares the
    same breaks and the nested partition tree collapses to a product grid.
    """

    breaks: tuple  # one sorted boundary array per angle axis
    gamma: float
    n_target: int
    d: int

    @property
    def shape(self) -> tuple:
        return tuple(b.size - 1 for b in self.breaks)

    @property
    def n_actual(self) -> int:
        return int(np.prod(self.shape))

    def cell_multi_index(self, cell: int) -> tuple:
        return tuple(int(v) for v in np.unravel_index(cell, self.shape))

    def cell_box(self, cell: int) -> Box:
        idx = self.cell_multi_index(cell)
        lo = np.array([self.breaks[a][i] for a, i in enumerate(idx)])
        hi = np.array([self.breaks[a][i + 1] for a, i in enumerate(idx)])
        return Box(lo=lo, hi=hi)

    def cell_center(self, cell: int) -> np.ndarray:
        box = self.cell_box(cell)
        return box.center

    def centers(self) -> np.ndarray:
        mids = [(b[:-1] + b[1:]) / 2.0 for b in self.breaks]
        grids = np.meshgrid(*mids, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def locate(self, theta) -> int:
        """Leaf cell containing theta; boundary points go to the lower cell."""
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.d - 1,):
            raise ValueError("angle vector has the wrong dimension")
        if np.any(theta < 0) or np.any(theta > np.pi / 2):
            raise ValueError("angle vector outside the orthant")
        idx = []
        for a, b in enumerate(self.breaks):
            i = int(np.searchsorted(b, theta[a], side="left")) - 1
            idx.append(min(max(i, 0), b.size - 2))
        return int(np.ravel_multi_index(idx, self.shape))

    def neighbors(self, cell: int):
        idx = list(self.cell_multi_index(cell))
        shape = self.shape
        for a in range(len(idx)):
            for step in (-1, 1):
                j = idx[a] + step
                if 0 <= j < shape[a]:
                    other = idx.copy()
                    other[a] = j
                    yield int(np.ravel_multi_index(other, shape))


def partition(N: int, d: int) -> AnglePartition:
    gamma = gamma_for(N, d)
    first = _axis_breaks([], gamma)
    breaks = [first]
    prev = [0.0]
    for _ in range(1, d - 1):
        breaks.append(_axis_breaks(prev, gamma))
        prev = prev + [0.0]
    return AnglePartition(breaks=tuple(breaks), gamma=gamma, n_target=N, d=d)


def locate_cell(part: AnglePartition, theta) -> int:
    return part.locate(theta)


# ---------------------------------------------------------------------------
# plane-to-cell assignment


def assign_planes(part: AnglePartition, planes, method: str = "auto"):
    """HC map: for every cell, the ids of planes crossing its box."""
    n_cells = part.n_actual
    hc = [[] for _ in range(n_cells)]
    if method == "auto":
        method = "scan" if len(planes) * n_cells > 2_000_000 else "recursive"
    if method == "recursive":
        shape = part.shape
        for pid, plane in enumerate(planes):
            _cellplane(part, plane, pid, [0] * len(shape),
                       [s - 1 for s in shape], 0, hc)
    elif method == "scan":
        lo_c, hi_c = _corner_matrices(part)
        for pid, plane in enumerate(planes):
            h = np.asarray(plane.coeffs, dtype=float)
            pos = np.where(h >= 0, h, 0.0)
            neg = np.where(h < 0, h, 0.0)
            lo_sum = lo_c @ pos + hi_c @ neg
            hi_sum = hi_c @ pos + lo_c @ neg
            for c in np.nonzero((lo_sum <= plane.rhs) & (plane.rhs <= hi_sum))[0]:
                hc[int(c)].append(pid)
    else:
        raise ValueError(f"unknown method {method!r}")
    return hc


def _corner_matrices(part: AnglePartition):
    los = [b[:-1] for b in part.breaks]
    his = [b[1:] for b in part.breaks]
    lo_grid = np.meshgrid(*los, indexing="ij")
    hi_grid = np.meshgrid(*his, indexing="ij")
    lo_c = np.stack([g.ravel() for g in lo_grid], axis=1)
    hi_c = np.stack([g.ravel() for g in hi_grid], axis=1)
    return lo_c, hi_c


def _cellplane(part, plane, pid, low, high, turn, hc):
    """Quadtree-style recursion: halve index ranges, prune missed rectangles."""
    lo = np.array([part.breaks[a][low[a]] for a in range(len(low))])
    hi = np.array([part.breaks[a][high[a] + 1] for a in range(len(high))])
    if not plane_crosses_box(plane, Box(lo=lo, hi=hi)):
        return
    if low == high:
        cell = int(np.ravel_multi_index(low, part.shape))
        hc[cell].append(pid)
        return
    k = len(low)
    while high[turn] == low[turn]:
        turn = (turn + 1) % k
    mid = (low[turn] + high[turn]) // 2
    left_high = high.copy()
    left_high[turn] = mid
    right_low = low.copy()
    right_low[turn] = mid + 1
    _cellplane(part, plane, pid, low, left_high, (turn + 1) % k, hc)
    _cellplane(part, plane, pid, right_low, high, (turn + 1) % k, hc)


class LazyPlaneAssignment:
    """Per-cell crossing-plane lookup without materializing every incidence.

    Precomputing HC lists costs memory proportional to planes x cells touched;
    with hundreds of thousands of exchange planes that is prohibitive, so the
    corner test runs vectorized over all planes when a cell is visited.
    """

    def __init__(self, part: AnglePartition, planes):
        self.part = part
        self.planes = planes
        coeffs = np.array([p.coeffs for p in planes]) if planes else \
            np.zeros((0, part.d - 1))
        self._rhs = np.array([p.rhs for p in planes])
        self._pos = np.where(coeffs >= 0, coeffs, 0.0)
        self._neg = np.where(coeffs < 0, coeffs, 0.0)

    def crossing(self, cell: int) -> np.ndarray:
        box = self.part.cell_box(cell)
        lo_sum = self._pos @ box.lo + self._neg @ box.hi
        hi_sum = self._pos @ box.hi + self._neg @ box.lo
        return np.nonzero((lo_sum <= self._rhs) & (self._rhs <= hi_sum))[0]


def naive_assign_planes(part: AnglePartition, planes):
    """All-pairs cell x plane scan, for cross-checking."""
    hc = [[] for _ in range(part.n_actual)]
    for c in range(part.n_actual):
        box = part.cell_box(c)
        for pid, plane in enumerate(planes):
            if plane_crosses_box(plane, box):
                hc[c].append(pid)
    return hc


# ---------------------------------------------------------------------------
# per-cell early-stopping search


class _SearchBudget:
    def __init__(self, max_probes):
        self.left = max_probes if max_probes is not None else float("inf")

    def spend(self) -> bool:
        self.left -= 1
        return self.left >= 0


class _CellNode:
    __slots__ = ("plane", "left", "right")

    def __init__(self, plane):
        self.plane = plane
        self.left = None
        self.right = None


def cell_search(box: Box, planes, dataset: Dataset, oracle: Oracle,
                max_probes: int | None = None):
    """First oracle-verified satisfactory angle point in the cell, or None.

    Explores the cell-local arrangement incrementally, testing both sides of
    each newly added plane and stopping at the first satisfactory witness.
    `max_probes` caps oracle probes per cell; None means exhaust the cell.
    """
    budget = _SearchBudget(max_probes)

    def ok(theta) -> bool:
        if theta is None or not budget.spend():
            return False
        return oracle.satisfies_weights(dataset, to_cartesian(1.0, theta))

    if not planes:
        center = box.center
        return center if ok(center) else None

    first = planes[0]
    for sign in (MINUS, PLUS):
        p = find_feasible_point([HalfSpace(first, sign)], box=box)
        if ok(p):
            return p
    root = _CellNode(first)
    for plane in planes[1:]:
        if budget.left <= 0:
            return None
        hit = _harrangement_cell(root, plane, box, (), ok)
        if hit is not None:
            return hit
    return None


def _harrangement_cell(node, plane, box, sigma, ok):
    for sign, attr in ((MINUS, "left"), (PLUS, "right")):
        side = sigma + (HalfSpace(node.plane, sign),)
        if not hyperplane_crosses(plane, list(side), box=box):
            continue
        child = getattr(node, attr)
        if child is None:
            child = _CellNode(plane)
            setattr(node, attr, child)
            for new_sign in (MINUS, PLUS):
                p = find_feasible_point(list(side) + [HalfSpace(plane, new_sign)],
                                        box=box)
                if p is not None and ok(p):
                    return p
        else:
            hit = _harrangement_cell(child, plane, box, side, ok)
            if hit is not None:
                return hit
    return None


# ---------------------------------------------------------------------------
# index container + coloring


DIRECT = "direct"
COLORED = "colored"


@dataclass
class CellIndex:
    partition: AnglePartition
    planes: list
    hc: list
    assigned: list = field(default_factory=list)   # per cell: theta or None
    distance: np.ndarray | None = None
    source: list = field(default_factory=list)     # per cell: direct|colored|None
    timings: dict = field(default_factory=dict)

    @property
    def n_cells(self) -> int:
        return self.partition.n_actual

    @property
    def unsatisfiable(self) -> bool:
        return all(s is None for s in self.source)

    def direct_cells(self) -> list:
        return [c for c, s in enumerate(self.source) if s == DIRECT]

    def fully_assigned(self) -> bool:
        return all(t is not None for t in self.assigned)


def color_cells(index: CellIndex, chunk: int = 4096) -> CellIndex:
    """Assign every empty cell the discovered function angularly nearest to
    its center.

    Neighbor-relaxation propagation (shortest-path style) is only a heuristic
    here: the nearest-function regions need not be connected on the grid
    graph, so the minimization is computed directly, vectorized over the
    distinct discovered functions and chunked over cells.
    """
    part = index.partition
    n = index.n_cells
    seeds = index.direct_cells()
    if not seeds:
        raise Unsatisfiable("no cell holds a satisfactory function")

    # one representative per distinct discovered function
    func_of = {}
    for c in seeds:
        func_of.setdefault(tuple(index.assigned[c]), c)
    reps = list(func_of.values())
    seed_units = np.array([unit_ray(index.assigned[c]) for c in reps])

    empty = np.array([c for c in range(n) if index.source[c] is None],
                     dtype=int)
    for c in seeds:
        index.distance[c] = 0.0
    for start in range(0, empty.size, chunk):
        cells = empty[start:start + chunk]
        centers = np.array([unit_ray(part.cell_center(c)) for c in cells])
        dots = centers @ seed_units.T
        pick = np.argmax(dots, axis=1)
        for row, c in enumerate(cells):
            cosv = float(np.clip(dots[row, pick[row]], -1.0, 1.0))
            index.assigned[c] = index.assigned[reps[pick[row]]]
            index.source[c] = COLORED
            index.distance[c] = float(np.arccos(cosv))
    return index


def build_cell_index(dataset: Dataset, oracle: Oracle, N: int, planes=None,
                     max_probes: int | None = None,
                     assign_method: str = "auto",
                     progress=None) -> CellIndex:
    """Full offline pipeline for d >= 3: partition, assign, search, color."""
    from .arrangement import build_exchange_set

    timings = {}
    t0 = time.perf_counter()
    part = partition(N, dataset.d)
    timings["partition_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if planes is None:
        planes = build_exchange_set(dataset)
    timings["hyperplanes_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    lazy = None
    if assign_method == "lazy":
        lazy = LazyPlaneAssignment(part, planes)
        hc = [[] for _ in range(part.n_actual)]
    else:
        hc = assign_planes(part, planes, method=assign_method)
    timings["assign_s"] = time.perf_counter() - t0

    index = CellIndex(partition=part, planes=planes, hc=hc,
                      assigned=[None] * part.n_actual,
                      distance=np.zeros(part.n_actual),
                      source=[None] * part.n_actual,
                      timings=timings)
    t0 = time.perf_counter()
    for c in range(part.n_actual):
        pids = lazy.crossing(c) if lazy is not None else hc[c]
        hit = cell_search(part.cell_box(c), [planes[p] for p in pids],
                          dataset, oracle, max_probes=max_probes)
        if hit is not None:
            index.assigned[c] = hit
            index.source[c] = DIRECT
        if progress is not None and c % 500 == 0:
            progress(c, part.n_actual)
    timings["cell_search_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if index.direct_cells():
        color_cells(index)
    else:
        log.warning("no satisfactory cell found; index is unsatisfiable")
    timings["coloring_s"] = time.perf_counter() - t0
    return index
