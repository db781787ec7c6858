"""Dataset ingestion, sampling, oracle-config parsing, index persistence."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset
from .fairness import Constraint, OracleConfig

INDEX_FORMAT_VERSION = 1

HIGHER_BETTER = "higher"
LOWER_BETTER = "lower"


class IngestError(Exception):
    pass


class IndexFormatError(Exception):
    pass


@dataclass(frozen=True)
class DatasetSpec:
    """Which columns score and which describe protected groups."""

    scoring: tuple          # (column name, direction) pairs, >= 2 of them
    type_attrs: tuple = ()  # type-attribute column names
    delimiter: str = ","

    def __post_init__(self):
        object.__setattr__(self, "scoring", tuple(tuple(s) for s in self.scoring))
        object.__setattr__(self, "type_attrs", tuple(self.type_attrs))
        names = [s[0] for s in self.scoring]
        if len(names) < 2:
            raise ValueError("need at least 2 scoring attributes")
        if len(set(names)) != len(names):
            raise ValueError("scoring attribute names must be distinct")
        for _, direction in self.scoring:
            if direction not in (HIGHER_BETTER, LOWER_BETTER):
                raise ValueError(f"direction must be {HIGHER_BETTER!r} or {LOWER_BETTER!r}")

    def to_doc(self) -> dict:
        return {"scoring": [list(s) for s in self.scoring],
                "type_attrs": list(self.type_attrs),
                "delimiter": self.delimiter}

    @classmethod
    def from_doc(cls, doc: dict) -> "DatasetSpec":
        return cls(scoring=doc["scoring"], type_attrs=doc.get("type_attrs", ()),
                   delimiter=doc.get("delimiter", ","))


class IngestedDataset(Dataset):
    """Dataset plus the normalization bookkeeping needed to invert it."""

    def __init__(self, *args, norms=None, **kwargs):
        super().__init__(*args, **kwargs)
        self.norms = norms or {}  # attr name -> (min, max, direction)

    def denormalize(self) -> np.ndarray:
        out = np.empty_like(self.attrs)
        for j, name in enumerate(self.attr_names):
            lo, hi, direction = self.norms[name]
            col = self.attrs[:, j]
            if direction == LOWER_BETTER:
                col = 1.0 - col
            out[:, j] = col * (hi - lo) + lo
        return out


def ingest(spec: DatasetSpec, path) -> IngestedDataset:
    """Load a delimited text file and min-max normalize the scoring columns."""
    import csv

    with open(path, newline="") as fh:
        reader = csv.DictReader(fh, delimiter=spec.delimiter)
        rows = list(reader)
    if not rows:
        raise IngestError("empty dataset file")
    header = rows[0].keys()
    wanted = [name for name, _ in spec.scoring] + list(spec.type_attrs)
    for name in wanted:
        if name not in header:
            raise IngestError(f"missing column {name!r}")

    n = len(rows)
    attrs = np.empty((n, len(spec.scoring)))
    norms = {}
    for j, (name, direction) in enumerate(spec.scoring):
        try:
            col = np.array([float(r[name]) for r in rows])
        except ValueError as err:
            raise IngestError(f"non-numeric value in column {name!r}: {err}") from err
        lo, hi = float(col.min()), float(col.max())
        if hi == lo:
            raise IngestError(f"constant column {name!r} (max == min)")
        scaled = (col - lo) / (hi - lo)
        if direction == LOWER_BETTER:
            scaled = 1.0 - scaled
        attrs[:, j] = scaled
        norms[name] = (lo, hi, direction)

    types = {}
    codebooks = {}
    for name in spec.type_attrs:
        labels = [r[name] for r in rows]
        book = {}
        for lab in labels:
            if lab not in book:
                book[lab] = len(book)
        types[name] = np.array([book[lab] for lab in labels], dtype=int)
        codebooks[name] = book

    return IngestedDataset(attrs, types=types,
                           attr_names=[name for name, _ in spec.scoring],
                           codebooks=codebooks, norms=norms)


def fingerprint(dataset: Dataset) -> str:
    """Content hash binding an index to the data it was built from."""
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(dataset.attrs, dtype=np.float64).tobytes())
    for name in sorted(dataset.types):
        h.update(name.encode())
        h.update(np.ascontiguousarray(dataset.types[name], dtype=np.int64).tobytes())
    return h.hexdigest()


def sample_uniform(dataset: Dataset, m: int, seed: int) -> Dataset:
    """m distinct items chosen uniformly; row order (and ids) preserved."""
    if not 1 <= m <= dataset.n:
        raise ValueError(f"sample size {m} outside [1, {dataset.n}]")
    rng = np.random.default_rng(seed)
    rows = np.sort(rng.choice(dataset.n, size=m, replace=False))
    return Dataset(dataset.attrs[rows],
                   types={k: v[rows] for k, v in dataset.types.items()},
                   ids=dataset.ids[rows],
                   attr_names=dataset.attr_names,
                   codebooks=dataset.codebooks)


# ---------------------------------------------------------------------------
# oracle config document


def parse_oracle_config(doc, dataset: Dataset | None = None) -> OracleConfig:
    """Build an OracleConfig from {mode, constraints:[{attr, group, k, min?, max?}]}.

    Group labels (strings) are resolved through the dataset's code book when
    a dataset is supplied.
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    constraints = []
    for c in doc.get("constraints", []):
        group = c["group"]
        if isinstance(group, str):
            if dataset is None or c["attr"] not in dataset.codebooks:
                raise ValueError(f"cannot resolve group label {group!r} without data")
            group = dataset.codebooks[c["attr"]][group]
        constraints.append(Constraint(type_attr=c["attr"], group=int(group),
                                      k=c["k"], min_count=c.get("min"),
                                      max_count=c.get("max")))
    return OracleConfig(mode=doc.get("mode", "FM1"), constraints=constraints)


def oracle_config_doc(config: OracleConfig) -> dict:
    return {"mode": config.mode,
            "constraints": [{"attr": c.type_attr, "group": c.group, "k": c.k,
                             "min": c.min_count, "max": c.max_count}
                            for c in config.constraints]}


# ---------------------------------------------------------------------------
# index persistence


@dataclass
class IndexFile:
    mode: str                 # "2d" or "md"
    d: int
    fingerprint: str
    payload: dict
    oracle_config: dict | None = None
    dataset_spec: dict | None = None
    metadata: dict = field(default_factory=dict)
    version: int = INDEX_FORMAT_VERSION

    def to_doc(self) -> dict:
        return {"version": self.version, "mode": self.mode, "d": self.d,
                "fingerprint": self.fingerprint, "payload": self.payload,
                "oracle_config": self.oracle_config,
                "dataset_spec": self.dataset_spec,
                "metadata": self.metadata}

    @classmethod
    def from_doc(cls, doc: dict) -> "IndexFile":
        version = doc.get("version")
        if not isinstance(version, int):
            raise IndexFormatError("corrupt index: missing version")
        if version > INDEX_FORMAT_VERSION:
            raise IndexFormatError(f"index version {version} is newer than supported "
                                   f"({INDEX_FORMAT_VERSION})")
        try:
            return cls(mode=doc["mode"], d=doc["d"], fingerprint=doc["fingerprint"],
                       payload=doc["payload"], oracle_config=doc.get("oracle_config"),
                       dataset_spec=doc.get("dataset_spec"),
                       metadata=doc.get("metadata", {}), version=version)
        except KeyError as err:
            raise IndexFormatError(f"corrupt index: missing field {err}") from err


def save_index(index: IndexFile, path) -> None:
    # canonical form (sorted keys, shortest round-trip floats) so that
    # load -> save is byte-identical
    text = json.dumps(index.to_doc(), sort_keys=True, separators=(",", ":"),
                      allow_nan=False)
    with open(path, "w") as fh:
        fh.write(text)
        fh.write("\n")


def load_index(path) -> IndexFile:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as err:
        raise IndexFormatError(f"corrupt index: {err}") from err
    if not isinstance(doc, dict):
        raise IndexFormatError("corrupt index: not an object")
    return IndexFile.from_doc(doc)


# conversions between runtime structures and the persisted payload


def ranges_to_payload(ranges) -> dict:
    return {"boundaries": [[theta, kind] for theta, kind in ranges.boundaries]}


def payload_to_ranges(payload: dict):
    from .planner2d import SatisfactoryRanges2D

    return SatisfactoryRanges2D(
        boundaries=tuple((float(t), str(k)) for t, k in payload["boundaries"]))


def cell_index_to_payload(index) -> dict:
    part = index.partition
    return {
        "breaks": [b.tolist() for b in part.breaks],
        "gamma": part.gamma,
        "n_target": part.n_target,
        "assigned": [None if t is None else list(map(float, t))
                     for t in index.assigned],
        "distance": [float(x) for x in index.distance],
        "source": list(index.source),
    }


def payload_to_cell_index(payload: dict, d: int):
    from .gridindex import AnglePartition, CellIndex

    part = AnglePartition(breaks=tuple(np.array(b) for b in payload["breaks"]),
                          gamma=float(payload["gamma"]),
                          n_target=int(payload["n_target"]), d=d)
    assigned = [None if t is None else np.array(t, dtype=float)
                for t in payload["assigned"]]
    return CellIndex(partition=part, planes=[], hc=[[] for _ in assigned],
                     assigned=assigned,
                     distance=np.array(payload["distance"], dtype=float),
                     source=[None if s is None else str(s)
                             for s in payload["source"]])
