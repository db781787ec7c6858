"""Angle/weight coordinate conversions and angular distance between scoring rays.

A linear scoring function over d non-negative weights is equivalent up to
positive scaling, so it is identified with a ray from the origin through the
first orthant.  Rays are stored as d-1 polar angles, each in [0, pi/2].

Convention: with theta_0 fixed to pi/2 and the given angles theta_1..theta_{d-1},
component k of the unit Cartesian point is

    p[k] = sin(theta_k) * prod_{l=k+1}^{d-1} cos(theta_l)

so theta == (0, ..., 0) is the first coordinate axis and, in 2D,
weights are (cos theta, sin theta).
"""

from __future__ import annotations

import numpy as np

ATOL = 1e-9


def _as_weights(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise ValueError("weight vector must be 1-D with at least 2 components")
    if not np.all(np.isfinite(w)):
        raise ValueError("weight vector must be finite")
    if np.any(w < 0):
        raise ValueError("weight components must be non-negative")
    if not np.any(w > 0):
        raise ValueError("weight vector must not be zero")
    return w


def _as_angles(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1 or theta.size < 1:
        raise ValueError("angle vector must be 1-D with at least 1 component")
    if np.any(theta < -ATOL) or np.any(theta > np.pi / 2 + ATOL):
        raise ValueError("angles must lie in [0, pi/2]")
    return np.clip(theta, 0.0, np.pi / 2)


def to_polar(w) -> tuple[float, np.ndarray]:
    """Convert a weight vector to (r, theta) with r = ||w||.

    theta has d-1 components, each in [0, pi/2]; to_cartesian(1, theta)
    is the unit ray of w.
    """
    w = _as_weights(w)
    r = float(np.linalg.norm(w))
    u = w / r
    d = u.size
    theta = np.zeros(d - 1)
    for k in range(d - 1, 0, -1):
        prefix = float(np.linalg.norm(u[:k]))
        theta[k - 1] = np.arctan2(u[k], prefix)
    return r, theta


def to_cartesian(r: float, theta) -> np.ndarray:
    """Inverse of to_polar: weight vector of norm r on the ray of theta."""
    if not np.isfinite(r) or r <= 0:
        raise ValueError("r must be positive")
    theta = _as_angles(theta)
    d = theta.size + 1
    w = np.empty(d)
    # running product of cos(theta_l) for l > k, built from the top axis down
    cos_suffix = 1.0
    for k in range(d - 1, 0, -1):
        w[k] = np.sin(theta[k - 1]) * cos_suffix
        cos_suffix *= np.cos(theta[k - 1])
    w[0] = cos_suffix  # sin(pi/2) * prod cos
    return r * np.clip(w, 0.0, None)


def unit_ray(theta) -> np.ndarray:
    """Unit Cartesian vector of an angle vector."""
    return to_cartesian(1.0, theta)


def angle_distance(a, b) -> float:
    """Angle in [0, pi/2] between the rays of two angle vectors."""
    ua = unit_ray(_as_angles(a))
    ub = unit_ray(_as_angles(b))
    c = float(np.dot(ua, ub))
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def weight_angle_distance(wa, wb) -> float:
    """Angle between the rays of two weight vectors."""
    wa = _as_weights(wa)
    wb = _as_weights(wb)
    c = float(np.dot(wa, wb) / (np.linalg.norm(wa) * np.linalg.norm(wb)))
    return float(np.arccos(np.clip(c, -1.0, 1.0)))
