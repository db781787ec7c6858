"""Build and query orchestration shared by the CLI and the HTTP service."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import dataio
from .data import Dataset
from .fairness import Oracle, oracle_from_config
from .geometry import weight_angle_distance
from .gridindex import build_cell_index
from .planner2d import online_2d, raysweep_2d
from .query import EXACT, QueryResult, md_online

MODE_2D = "2d"
MODE_MD = "md"


def resolve_mode(mode: str, d: int) -> str:
    if mode == "auto":
        return MODE_2D if d == 2 else MODE_MD
    if mode not in (MODE_2D, MODE_MD):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == MODE_2D and d != 2:
        raise ValueError("2d mode requires exactly 2 scoring attributes")
    if mode == MODE_MD and d < 3:
        raise ValueError("md mode requires at least 3 scoring attributes")
    return mode


@dataclass
class Engine:
    """A loaded dataset + oracle + index, ready to answer queries."""

    dataset: Dataset
    oracle: Oracle
    mode: str
    ranges: object = None      # SatisfactoryRanges2D in 2d mode
    cell_index: object = None  # CellIndex in md mode
    fingerprint: str = ""

    @property
    def unsatisfiable(self) -> bool:
        if self.mode == MODE_2D:
            return self.ranges.empty
        return self.cell_index.unsatisfiable

    def query(self, w) -> QueryResult:
        w = np.asarray(w, dtype=float)
        if w.shape != (self.dataset.d,):
            raise ValueError(f"expected {self.dataset.d} weights, got {w.size}")
        if self.mode == MODE_2D:
            if self.oracle.satisfies_weights(self.dataset, w):
                return QueryResult(input_w=w, satisfactory_as_is=True,
                                   suggestion=w, distance=0.0, verified=True,
                                   mode=EXACT)
            sugg = online_2d(self.ranges, w)
            verified = self.oracle.satisfies_weights(self.dataset, sugg)
            if not verified:
                # the boundary angle itself can be an ordering tie; nudge
                # into the closed range and retry, as the build phase does
                r = float(np.linalg.norm(sugg))
                theta = float(np.arctan2(sugg[1], sugg[0]))
                for cand in (theta + 1e-9, theta - 1e-9):
                    cand = min(max(cand, 0.0), np.pi / 2)
                    probe = np.array([r * np.cos(cand), r * np.sin(cand)])
                    if self.ranges.contains(cand) and \
                            self.oracle.satisfies_weights(self.dataset, probe):
                        sugg, verified = probe, True
                        break
            return QueryResult(input_w=w, satisfactory_as_is=False,
                               suggestion=sugg,
                               distance=weight_angle_distance(w, sugg),
                               verified=verified, mode=EXACT)
        return md_online(self.cell_index, self.dataset, self.oracle, w)


def build_engine(dataset: Dataset, oracle: Oracle, mode: str = "auto",
                 cells: int = 1000, sample: int | None = None, seed: int = 0,
                 max_probes: int | None = None, progress=None):
    """Run the offline phase; returns (Engine, build report dict)."""
    mode = resolve_mode(mode, dataset.d)
    build_data = dataset
    if sample is not None and sample < dataset.n:
        build_data = dataio.sample_uniform(dataset, sample, seed)
    report = {"mode": mode, "n": dataset.n, "d": dataset.d,
              "sample": None if build_data is dataset else build_data.n,
              "seed": seed, "cells": None}
    engine = Engine(dataset=dataset, oracle=oracle, mode=mode,
                    fingerprint=dataio.fingerprint(dataset))
    if mode == MODE_2D:
        t0 = time.perf_counter()
        engine.ranges = raysweep_2d(build_data, oracle)
        report["timings"] = {"raysweep_s": time.perf_counter() - t0}
        report["ranges"] = len(engine.ranges.boundaries) // 2
    else:
        index = build_cell_index(build_data, oracle, N=cells,
                                 max_probes=max_probes, progress=progress)
        engine.cell_index = index
        report["cells"] = index.n_cells
        report["timings"] = dict(index.timings)
        report["direct_cells"] = len(index.direct_cells())
        report["colored_cells"] = sum(1 for s in index.source if s == "colored")
    report["unsatisfiable"] = engine.unsatisfiable
    return engine, report


def engine_to_index_file(engine: Engine, report: dict,
                         spec_doc: dict | None = None,
                         oracle_doc: dict | None = None) -> dataio.IndexFile:
    if engine.mode == MODE_2D:
        payload = dataio.ranges_to_payload(engine.ranges)
    else:
        payload = dataio.cell_index_to_payload(engine.cell_index)
    return dataio.IndexFile(mode=engine.mode, d=engine.dataset.d,
                            fingerprint=engine.fingerprint, payload=payload,
                            oracle_config=oracle_doc, dataset_spec=spec_doc,
                            metadata=report)


def engine_from_index_file(index: dataio.IndexFile, dataset: Dataset,
                           oracle: Oracle | None = None) -> Engine:
    """Rehydrate an engine; fingerprint mismatch is surfaced, not fatal."""
    if oracle is None:
        if index.oracle_config is None:
            raise ValueError("index carries no oracle config; pass an oracle")
        oracle = oracle_from_config(
            dataio.parse_oracle_config(index.oracle_config, dataset))
    engine = Engine(dataset=dataset, oracle=oracle, mode=index.mode,
                    fingerprint=dataio.fingerprint(dataset))
    if index.mode == MODE_2D:
        engine.ranges = dataio.payload_to_ranges(index.payload)
    else:
        engine.cell_index = dataio.payload_to_cell_index(index.payload, index.d)
    return engine


def query_result_doc(result: QueryResult) -> dict:
    return {"input": [float(x) for x in result.input_w],
            "satisfactory_as_is": result.satisfactory_as_is,
            "suggestion": None if result.suggestion is None
            else [float(x) for x in result.suggestion],
            "distance": result.distance,
            "verified": result.verified,
            "mode": result.mode}
