"""Linear feasibility over signed half-spaces in angle coordinates.

Everything lives in the box [0, pi/2]^(d-1).  Region interiors are open
(orderings are ambiguous exactly on exchange surfaces), so "find a point"
requires a slack margin DELTA from every half-space boundary; crossing tests
are closed (no margin).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .exchange import AngleHyperplane

DELTA = 1e-7  # interior slack margin, in units of distance to the hyperplane

PLUS = "+"
MINUS = "-"


@dataclass(frozen=True)
class HalfSpace:
    plane: AngleHyperplane
    sign: str

    def __post_init__(self):
        if self.sign not in (PLUS, MINUS):
            raise ValueError("sign must be '+' or '-'")

    def satisfied(self, theta, margin: float = 0.0) -> bool:
        gap = self.plane.eval(theta) - self.plane.rhs
        norm = float(np.linalg.norm(self.plane.coeffs))
        if self.sign == PLUS:
            return gap >= margin * norm
        return gap <= -margin * norm


@dataclass(frozen=True)
class Box:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=float)
        hi = np.asarray(self.hi, dtype=float)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo.shape != hi.shape or np.any(lo > hi):
            raise ValueError("box needs lo <= hi per coordinate")
        if np.any(lo < -1e-12) or np.any(hi > np.pi / 2 + 1e-12):
            raise ValueError("box must lie inside [0, pi/2]^(d-1)")

    @property
    def center(self) -> np.ndarray:
        return (self.lo + self.hi) / 2.0

    def contains(self, theta) -> bool:
        theta = np.asarray(theta, dtype=float)
        return bool(np.all(theta >= self.lo) and np.all(theta <= self.hi))


def _dims(constraints, box, dim):
    if box is not None:
        return box.lo.size
    if constraints:
        return constraints[0].plane.coeffs.size
    if dim is None:
        raise ValueError("dimension is ambiguous without constraints or a box")
    return dim


def _bounds(box, k):
    if box is None:
        return [(0.0, np.pi / 2)] * k
    return [(max(0.0, float(box.lo[i])), min(np.pi / 2, float(box.hi[i])))
            for i in range(k)]


def find_feasible_point(constraints, box: Box | None = None, dim: int | None = None,
                        margin: float = DELTA):
    """A point satisfying every half-space with slack `margin`, or None.

    Maximizes the common slack via LP; feasible iff the best slack reaches
    the margin.  The returned point also lies inside the box (or the full
    orthant box when none is given).
    """
    k = _dims(constraints, box, dim)
    if not constraints:
        return np.array([(lo + hi) / 2 for lo, hi in _bounds(box, k)])
    a_ub, b_ub = [], []
    for hs in constraints:
        h = np.asarray(hs.plane.coeffs, dtype=float)
        norm = float(np.linalg.norm(h))
        if hs.sign == PLUS:
            a_ub.append(np.append(-h, norm))
            b_ub.append(-hs.plane.rhs)
        else:
            a_ub.append(np.append(h, norm))
            b_ub.append(hs.plane.rhs)
    c = np.zeros(k + 1)
    c[-1] = -1.0  # maximize slack
    bounds = _bounds(box, k) + [(-1.0, 1.0)]
    res = linprog(c, A_ub=np.array(a_ub), b_ub=np.array(b_ub), bounds=bounds,
                  method="highs")
    if not res.success or res.x[-1] < margin:
        return None
    return res.x[:-1]


def hyperplane_crosses(plane: AngleHyperplane, constraints, box: Box | None = None,
                       dim: int | None = None) -> bool:
    """True iff some point of the plane satisfies all constraints (closed test)."""
    k = _dims(constraints or [HalfSpace(plane, PLUS)], box, dim)
    a_ub, b_ub = [], []
    for hs in constraints:
        h = np.asarray(hs.plane.coeffs, dtype=float)
        if hs.sign == PLUS:
            a_ub.append(-h)
            b_ub.append(-hs.plane.rhs)
        else:
            a_ub.append(h)
            b_ub.append(hs.plane.rhs)
    res = linprog(np.zeros(k),
                  A_ub=np.array(a_ub) if a_ub else None,
                  b_ub=np.array(b_ub) if b_ub else None,
                  A_eq=np.asarray(plane.coeffs, dtype=float).reshape(1, -1),
                  b_eq=np.array([plane.rhs]),
                  bounds=_bounds(box, k), method="highs")
    return bool(res.success)


def plane_crosses_box(plane: AngleHyperplane, box: Box) -> bool:
    """Exact corner test: does the plane meet the box?

    Per coordinate the corner minimizing/maximizing the linear form is picked,
    which also handles mixed-sign coefficients.
    """
    h = np.asarray(plane.coeffs, dtype=float)
    lo_term = np.minimum(h * box.lo, h * box.hi)
    hi_term = np.maximum(h * box.lo, h * box.hi)
    return bool(lo_term.sum() <= plane.rhs <= hi_term.sum())
