"""Ordering-exchange construction.

The exchange of a pair of items is the set of scoring functions giving both
the same score.  In 2D it is a single angle; in weight space it is the
hyperplane <a - b, w> = 0; in angle coordinates we fit the hyperplane through
d-1 ray images of points on that weight-space plane (the angle image is a
curved surface for d >= 3; the fitted hyperplane is the linearization used
throughout the index, with all downstream answers re-verified by the oracle).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import to_polar

RESIDUAL_TOL = 1e-6  # relative score-difference tolerance at construction points


class DegenerateExchange(Exception):
    """Raised when no valid angle hyperplane can be fitted for a pair."""


@dataclass(frozen=True)
class WeightSpaceExchange:
    normal: np.ndarray  # a.attrs - b.attrs
    item_i: int
    item_j: int


@dataclass(frozen=True)
class AngleHyperplane:
    """Surface sum_k coeffs[k] * theta_k = 1 (or = 0 when homogeneous)."""

    coeffs: np.ndarray
    item_i: int = -1
    item_j: int = -1
    homogeneous: bool = False
    # weight-space points the fit went through; kept for residual checks
    points: np.ndarray | None = None

    @property
    def rhs(self) -> float:
        return 0.0 if self.homogeneous else 1.0

    def eval(self, theta) -> float:
        return float(np.dot(self.coeffs, theta))


def dominates(a, b) -> bool:
    """True iff a >= b on every attribute and > on at least one."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("dimension mismatch")
    return bool(np.all(a >= b) and np.any(a > b))


def exchange_angle_2d(a, b):
    """Angle in [0, pi/2] where f_theta scores a and b equally, or None.

    Returns (angle, reason): reason is None on success, otherwise one of
    "dominance" or "coincident".
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != (2,) or b.shape != (2,):
        raise ValueError("exchange_angle_2d requires 2-D items")
    if np.array_equal(a, b):
        return None, "coincident"
    if dominates(a, b) or dominates(b, a):
        return None, "dominance"
    # (a1-b1) cos t + (a2-b2) sin t = 0, deltas have strictly opposite signs
    d1, d2 = a - b
    theta = float(np.arctan2(-d1, d2)) if d2 > 0 else float(np.arctan2(d1, -d2))
    return theta, None


def weight_space_exchange(a_item, b_item) -> WeightSpaceExchange:
    normal = np.asarray(a_item.attrs, dtype=float) - np.asarray(b_item.attrs, dtype=float)
    if np.allclose(normal, 0.0):
        raise DegenerateExchange("coincident items")
    return WeightSpaceExchange(normal=normal, item_i=a_item.id, item_j=b_item.id)


def _positive_plane_point(normal: np.ndarray) -> np.ndarray:
    """A strictly positive point on <normal, w> = 0 (needs mixed-sign normal)."""
    pos = normal > 0
    neg = normal < 0
    if not pos.any() or not neg.any():
        raise DegenerateExchange("plane does not cross the open first orthant")
    sp = float(normal[pos].sum())
    sn = float(-normal[neg].sum())
    w = np.ones_like(normal)
    # balance so the dot product cancels exactly: sp*sn - sn*sp = 0
    w[pos] = sn
    w[neg] = sp
    return w / np.max(w)


def _plane_points(normal: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """d-1 linearly independent non-negative points on <normal, w> = 0.

    Starts from an interior point and scales one free dimension at a time,
    compensating on the largest-magnitude pivot; scales that would push the
    pivot negative are reflected (shrunk instead of grown).
    """
    d = normal.size
    w0 = _positive_plane_point(normal)
    m = int(np.argmax(np.abs(normal)))
    free = [k for k in range(d) if k != m]
    points = []
    for k in free:
        scale = 2.0 + rng.uniform(0.0, 0.5)
        for _ in range(30):
            p = w0.copy()
            p[k] = scale * w0[k]
            p[m] = w0[m] - normal[k] * w0[k] * (scale - 1.0) / normal[m]
            if p[m] >= 0 and p[k] >= 0:
                break
            scale = 1.0 + (scale - 1.0) / -2.0  # reflect toward shrinking
        else:
            raise DegenerateExchange("could not keep sampled point in the orthant")
        points.append(p)
    return np.array(points)


def hyperpolar(a_item, b_item, retries: int = 8, rng=None) -> AngleHyperplane:
    """Fit the angle-space hyperplane of the pair's ordering exchange.

    Solves Theta x h = 1 where the rows of Theta are the angle vectors of
    d-1 linearly independent weight-space points with equal scores for both
    items.  The construction points are kept in the first orthant.
    """
    exch = weight_space_exchange(a_item, b_item)
    a = np.asarray(a_item.attrs, dtype=float)
    b = np.asarray(b_item.attrs, dtype=float)
    if dominates(a, b) or dominates(b, a):
        raise DegenerateExchange("dominated pair has no exchange")
    d = exch.normal.size
    if d < 3:
        raise ValueError("hyperpolar requires d >= 3; use exchange_angle_2d in 2D")
    if rng is None:
        lo, hi = sorted((a_item.id, b_item.id))
        rng = np.random.default_rng(0x5EED ^ (lo * 1000003 + hi))

    scale = max(float(np.linalg.norm(a)), float(np.linalg.norm(b)), 1.0)
    last_err = None
    for _ in range(retries):
        try:
            pts = _plane_points(exch.normal, rng)
        except DegenerateExchange as err:
            last_err = err
            continue
        if np.linalg.matrix_rank(pts) < d - 1:
            continue
        theta_rows = np.array([to_polar(p)[1] for p in pts])
        # residual check on the construction points themselves
        score_gap = pts @ exch.normal
        if np.any(np.abs(score_gap) > RESIDUAL_TOL * scale * np.linalg.norm(pts, axis=1)):
            continue
        try:
            coeffs = np.linalg.solve(theta_rows, np.ones(d - 1))
        except np.linalg.LinAlgError:
            # angle images may be affinely dependent through the origin
            coeffs = _homogeneous_fit(theta_rows)
            if coeffs is None:
                continue
            return AngleHyperplane(coeffs=coeffs, item_i=a_item.id,
                                   item_j=b_item.id, homogeneous=True, points=pts)
        return AngleHyperplane(coeffs=coeffs, item_i=a_item.id,
                               item_j=b_item.id, points=pts)
    raise DegenerateExchange(f"degenerate exchange for pair "
                             f"({a_item.id}, {b_item.id}): {last_err}")


def _homogeneous_fit(theta_rows: np.ndarray):
    """Nullspace fit sum h[k] theta_k = 0 for through-origin angle planes."""
    _, s, vt = np.linalg.svd(theta_rows)
    if s[-1] > 1e-9 * max(s[0], 1.0):
        return None
    h = vt[-1]
    return h / np.max(np.abs(h))


