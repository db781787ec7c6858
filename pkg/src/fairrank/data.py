"""Dataset container shared by the geometry and fairness layers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Item:
    """One ranked item: stable id, d scoring attributes, coded type attributes."""

    id: int
    attrs: np.ndarray
    types: dict[str, int] = field(default_factory=dict)


class Dataset:
    """Immutable collection of items with a shared attribute schema.

    attrs is the n x d scoring matrix (non-negative, typically min-max
    normalized); types maps each type-attribute name to an n-vector of
    small integer group codes.
    """

    def __init__(self, attrs, types=None, ids=None,
                 attr_names=None, codebooks=None):
        attrs = np.asarray(attrs, dtype=float)
        if attrs.ndim != 2 or attrs.shape[1] < 2:
            raise ValueError("attrs must be an n x d matrix with d >= 2")
        if not np.all(np.isfinite(attrs)) or np.any(attrs < 0):
            raise ValueError("scoring attributes must be finite and non-negative")
        self.attrs = attrs
        self.attrs.setflags(write=False)
        self.n, self.d = attrs.shape
        self.types = {}
        for name, col in (types or {}).items():
            col = np.asarray(col, dtype=int)
            if col.shape != (self.n,):
                raise ValueError(f"type column {name!r} has wrong length")
            col.setflags(write=False)
            self.types[name] = col
        self.ids = np.arange(self.n) if ids is None else np.asarray(ids, dtype=int)
        self.attr_names = list(attr_names) if attr_names else [f"a{j}" for j in range(self.d)]
        # type code -> original label, per type attribute
        self.codebooks = dict(codebooks or {})

    def item(self, i: int) -> Item:
        return Item(id=int(self.ids[i]),
                    attrs=self.attrs[i],
                    types={k: int(v[i]) for k, v in self.types.items()})

    def __len__(self) -> int:
        return self.n
