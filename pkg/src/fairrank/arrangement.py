"""Incremental hyperplane arrangement over the angle orthant.

Regions are convex cells of the arrangement of ordering-exchange hyperplanes;
inside one cell the induced item ordering is fixed (under the angle-space
linearization), so one oracle call per cell classifies it.  The arrangement
tree prunes insertion work: a subtree whose root-path region the new plane
misses cannot contain a crossed leaf.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .exchange import AngleHyperplane, DegenerateExchange, dominates, hyperpolar
from .fairness import Oracle
from .feasibility import (DELTA, MINUS, PLUS, HalfSpace, find_feasible_point,
                          hyperplane_crosses)
from .geometry import to_cartesian

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Region:
    halves: tuple
    witness: np.ndarray  # point strictly inside, margin >= DELTA

    def key(self):
        """Order-free identity of the region as a set of signed planes."""
        return frozenset((id(h.plane), h.sign) for h in self.halves)


class ArrangementTree:
    """Binary tree of signed half-spaces; leaves are the arrangement regions."""

    class _Node:
        __slots__ = ("plane", "left", "right", "region")

        def __init__(self, region=None):
            self.plane = None
            self.left = None
            self.right = None
            self.region = region

    def __init__(self, dim: int):
        self.dim = dim
        center = np.full(dim, np.pi / 4)
        self._root = self._Node(region=Region(halves=(), witness=center))

    def leaves(self) -> list:
        out = []
        stack = [self._root]
        while stack:
            node = stack.pop()
            if node.plane is None:
                out.append(node.region)
            else:
                stack.append(node.right)
                stack.append(node.left)
        return out

    @property
    def leaf_count(self) -> int:
        return len(self.leaves())

    def insert(self, plane: AngleHyperplane):
        self._insert(self._root, plane, ())

    def _insert(self, node, plane, path):
        if node.plane is None:
            self._try_split(node, plane)
            return
        sigma_l = path + (HalfSpace(node.plane, MINUS),)
        if hyperplane_crosses(plane, list(sigma_l), dim=self.dim):
            self._insert(node.left, plane, sigma_l)
        sigma_r = path + (HalfSpace(node.plane, PLUS),)
        if hyperplane_crosses(plane, list(sigma_r), dim=self.dim):
            self._insert(node.right, plane, sigma_r)

    def _try_split(self, leaf, plane):
        halves = leaf.region.halves
        if not hyperplane_crosses(plane, list(halves), dim=self.dim):
            return
        minus = halves + (HalfSpace(plane, MINUS),)
        plus = halves + (HalfSpace(plane, PLUS),)
        w_minus = find_feasible_point(list(minus), dim=self.dim, margin=DELTA)
        w_plus = find_feasible_point(list(plus), dim=self.dim, margin=DELTA)
        if w_minus is None or w_plus is None:
            # near-tangent: a sliver thinner than the margin is not split
            return
        leaf.plane = plane
        leaf.left = self._Node(region=Region(halves=minus, witness=w_minus))
        leaf.right = self._Node(region=Region(halves=plus, witness=w_plus))
        leaf.region = None


def insert_hyperplane(tree: ArrangementTree, plane: AngleHyperplane) -> ArrangementTree:
    tree.insert(plane)
    return tree


def collapse_coincident(dataset: Dataset) -> list:
    """Row indices with one representative per distinct attribute vector."""
    seen = {}
    keep = []
    for i in range(dataset.n):
        key = dataset.attrs[i].tobytes()
        if key not in seen:
            seen[key] = i
            keep.append(i)
    return keep


def build_exchange_set(dataset: Dataset) -> list:
    """One angle hyperplane per non-dominated, non-coincident pair, in (i, j) order."""
    if dataset.d < 3:
        raise ValueError("build_exchange_set requires d >= 3")
    rows = collapse_coincident(dataset)
    planes = []
    for a_pos in range(len(rows) - 1):
        i = rows[a_pos]
        a = dataset.item(i)
        for j in rows[a_pos + 1:]:
            b = dataset.item(j)
            if dominates(a.attrs, b.attrs) or dominates(b.attrs, a.attrs):
                continue
            try:
                planes.append(hyperpolar(a, b))
            except DegenerateExchange as err:
                log.warning("skipping pair (%d, %d): %s", a.id, b.id, err)
    return planes


def naive_regions(planes, dim: int) -> list:
    """Scan-all-regions arrangement build, for cross-checking the tree."""
    center = np.full(dim, np.pi / 4)
    regions = [Region(halves=(), witness=center)]
    for plane in planes:
        next_regions = []
        for region in regions:
            if not hyperplane_crosses(plane, list(region.halves), dim=dim):
                next_regions.append(region)
                continue
            minus = region.halves + (HalfSpace(plane, MINUS),)
            plus = region.halves + (HalfSpace(plane, PLUS),)
            w_minus = find_feasible_point(list(minus), dim=dim, margin=DELTA)
            w_plus = find_feasible_point(list(plus), dim=dim, margin=DELTA)
            if w_minus is None or w_plus is None:
                next_regions.append(region)
                continue
            next_regions.append(Region(halves=minus, witness=w_minus))
            next_regions.append(Region(halves=plus, witness=w_plus))
        regions = next_regions
    return regions


def sat_regions(dataset: Dataset, oracle: Oracle, planes=None,
                return_tree: bool = False):
    """All arrangement regions whose witness ordering passes the oracle."""
    if planes is None:
        planes = build_exchange_set(dataset)
    dim = dataset.d - 1
    tree = ArrangementTree(dim)
    for plane in planes:
        tree.insert(plane)
    satisfactory = []
    for region in tree.leaves():
        w = to_cartesian(1.0, region.witness)
        if oracle.satisfies_weights(dataset, w):
            satisfactory.append(region)
    if return_tree:
        return satisfactory, tree
    return satisfactory
