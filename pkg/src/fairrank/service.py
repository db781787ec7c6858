"""HTTP API powering the companion UI.

Single-tenant: the app holds exactly one engine at a time. Rebuilds run in a
background thread and swap in atomically; queries against a building service
get 409. Every response carries the dataset fingerprint so clients can detect
stale state.
"""

from __future__ import annotations

import math
import threading

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import pipeline
from .dataio import oracle_config_doc
from .errors import Unsatisfiable
from .fairness import order_by

STATUS_IDLE = "idle"
STATUS_BUILDING = "building"
STATUS_READY = "ready"
STATUS_UNSATISFIABLE = "unsatisfiable"


class QueryBody(BaseModel):
    weights: list[float]


class RankBody(BaseModel):
    weights: list[float]
    k: int


class BuildBody(BaseModel):
    mode: str = "auto"
    cells: int = 1000
    sample: int | None = None
    seed: int = 0
    max_probes: int | None = None


class _State:
    def __init__(self, engine=None):
        self.lock = threading.Lock()
        self.engine = engine
        self.report = {}
        self.progress = {}
        if engine is None:
            self.status = STATUS_IDLE
        else:
            self.status = (STATUS_UNSATISFIABLE if engine.unsatisfiable
                           else STATUS_READY)


def _checked_weights(state, weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    d = state.engine.dataset.d
    if w.shape != (d,) or not np.all(np.isfinite(w)) or np.any(w < 0) \
            or not np.any(w > 0):
        raise HTTPException(status_code=422,
                            detail=f"weights must be {d} finite non-negative "
                                   "values, not all zero")
    return w


def _require_ready(state):
    if state.status == STATUS_BUILDING:
        raise HTTPException(status_code=409, detail="index is building")
    if state.engine is None:
        raise HTTPException(status_code=409, detail="no index loaded")


def create_app(engine=None) -> FastAPI:
    app = FastAPI(title="fairrank")
    state = _State(engine)
    app.state.fairrank = state

    @app.get("/meta")
    def meta():
        doc = {"status": state.status, "progress": state.progress}
        eng = state.engine
        if eng is not None:
            doc.update({"d": eng.dataset.d, "n": eng.dataset.n,
                        "mode": eng.mode, "fingerprint": eng.fingerprint,
                        "attr_names": eng.dataset.attr_names,
                        "codebooks": eng.dataset.codebooks,
                        "oracle": (oracle_config_doc(eng.oracle.config)
                                   if eng.oracle.config is not None else None),
                        "report": state.report})
            if eng.mode == pipeline.MODE_MD:
                doc["cells"] = eng.cell_index.n_cells
        return doc

    @app.post("/query")
    def query(body: QueryBody):
        _require_ready(state)
        eng = state.engine
        w = _checked_weights(state, body.weights)
        try:
            result = eng.query(w)
            doc = pipeline.query_result_doc(result)
            doc["unsatisfiable"] = False
        except Unsatisfiable:
            doc = {"input": [float(x) for x in w], "satisfactory_as_is": False,
                   "suggestion": None, "distance": None, "verified": False,
                   "mode": eng.mode, "unsatisfiable": True}
        doc["fingerprint"] = eng.fingerprint
        return doc

    @app.get("/ranges2d")
    def ranges2d():
        _require_ready(state)
        eng = state.engine
        if eng.mode != pipeline.MODE_2D:
            raise HTTPException(status_code=400,
                                detail="ranges are only defined in 2d mode")
        return {"boundaries": [[t, k] for t, k in eng.ranges.boundaries],
                "fingerprint": eng.fingerprint}

    @app.post("/rank")
    def rank(body: RankBody):
        _require_ready(state)
        eng = state.engine
        w = _checked_weights(state, body.weights)
        dataset = eng.dataset
        if not 1 <= body.k <= dataset.n:
            raise HTTPException(status_code=422,
                                detail=f"k must be in [1, {dataset.n}]")
        ranking = order_by(dataset, w)
        top = ranking.positions[:body.k]
        items = [{"id": int(dataset.ids[p]),
                  "score": float(ranking.scores[i]),
                  "groups": {a: int(col[p]) for a, col in dataset.types.items()}}
                 for i, p in enumerate(top)]
        counts = {}
        for attr, col in dataset.types.items():
            vals, cnts = np.unique(col[top], return_counts=True)
            counts[attr] = {int(v): int(c) for v, c in zip(vals, cnts)}
        return {"k": body.k, "items": items, "group_counts": counts,
                "codebooks": eng.dataset.codebooks,
                "fingerprint": eng.fingerprint}

    @app.get("/cells")
    def cells(slice: str = ""):
        _require_ready(state)
        eng = state.engine
        if eng.mode != pipeline.MODE_MD:
            raise HTTPException(status_code=400,
                                detail="cell map is only defined in md mode")
        index = eng.cell_index
        part = index.partition
        shape = part.shape
        fixed = [int(s) for s in slice.split(",") if s != ""]
        if len(fixed) != max(0, len(shape) - 2):
            raise HTTPException(status_code=422,
                                detail=f"slice must fix {len(shape) - 2} axes")
        for a, i in enumerate(fixed):
            if not 0 <= i < shape[a + 2]:
                raise HTTPException(status_code=422,
                                    detail=f"slice index {i} out of range")
        rows = []
        cols = shape[1] if len(shape) > 1 else 1
        for i in range(shape[0]):
            row = []
            for j in range(cols):
                idx = (i, j, *fixed) if len(shape) > 1 else (i,)
                c = int(np.ravel_multi_index(idx, shape))
                row.append({"source": index.source[c],
                            "distance": None if index.distance is None
                            or not math.isfinite(index.distance[c])
                            else float(index.distance[c])})
            rows.append(row)
        return {"axis0_breaks": part.breaks[0].tolist(),
                "axis1_breaks": (part.breaks[1].tolist()
                                 if len(shape) > 1 else [0.0, math.pi / 2]),
                "cells": rows, "fingerprint": eng.fingerprint}

    @app.post("/build")
    def build(body: BuildBody):
        with state.lock:
            if state.status == STATUS_BUILDING:
                raise HTTPException(status_code=409,
                                    detail="a build is already running")
            if state.engine is None:
                raise HTTPException(status_code=409,
                                    detail="no dataset loaded to rebuild from")
            dataset, oracle = state.engine.dataset, state.engine.oracle
            state.status = STATUS_BUILDING
            state.progress = {"phase": "starting", "done": 0, "total": 0}

        def progress(done, total):
            state.progress = {"phase": "cell_search", "done": done,
                              "total": total}

        def run():
            try:
                engine, report = pipeline.build_engine(
                    dataset, oracle, mode=body.mode, cells=body.cells,
                    sample=body.sample, seed=body.seed,
                    max_probes=body.max_probes, progress=progress)
                with state.lock:
                    state.engine = engine
                    state.report = report
                    state.progress = {}
                    state.status = (STATUS_UNSATISFIABLE
                                    if engine.unsatisfiable else STATUS_READY)
            except Exception as err:
                with state.lock:
                    state.progress = {"error": str(err)}
                    state.status = (STATUS_UNSATISFIABLE
                                    if state.engine.unsatisfiable
                                    else STATUS_READY)

        threading.Thread(target=run, daemon=True).start()
        return {"status": STATUS_BUILDING}

    return app
