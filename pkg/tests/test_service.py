import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from conftest import fm1_oracle, make_dataset
from fairrank import pipeline
from fairrank.fairness import oracle_from_predicate
from fairrank.service import create_app


def _client(engine):
    return TestClient(create_app(engine))


@pytest.fixture
def client_2d():
    ds = make_dataset(30, 2, seed=20)
    engine, _ = pipeline.build_engine(ds, fm1_oracle(k=6, min_count=2))
    return _client(engine)


@pytest.fixture
def client_md():
    ds = make_dataset(10, 3, seed=21)
    engine, _ = pipeline.build_engine(ds, fm1_oracle(k=3, min_count=1),
                                      cells=80)
    return _client(engine)


def test_meta(client_2d):
    doc = client_2d.get("/meta").json()
    assert doc["status"] == "ready"
    assert doc["d"] == 2 and doc["n"] == 30 and doc["mode"] == "2d"
    assert doc["fingerprint"]


def test_query_endpoint_satisfactory(client_2d):
    doc = client_2d.post("/query", json={"weights": [1.0, 1.0]}).json()
    if doc["satisfactory_as_is"]:
        assert doc["distance"] == 0.0
    assert doc["fingerprint"]


def test_query_idempotent(client_2d):
    a = client_2d.post("/query", json={"weights": [0.9, 0.1]}).json()
    b = client_2d.post("/query", json={"weights": [0.9, 0.1]}).json()
    assert a == b


def test_query_malformed_weights(client_2d):
    assert client_2d.post("/query", json={"weights": [1.0]}).status_code == 422
    assert client_2d.post("/query", json={"weights": [-1.0, 1.0]}).status_code == 422
    assert client_2d.post("/query", json={"weights": [0.0, 0.0]}).status_code == 422
    assert client_2d.post("/query", json={"weights": "nope"}).status_code == 422


def test_ranges2d_endpoint(client_2d, client_md):
    doc = client_2d.get("/ranges2d").json()
    assert isinstance(doc["boundaries"], list)
    assert client_md.get("/ranges2d").status_code == 400


def test_ranges2d_constant_true():
    ds = make_dataset(10, 2, seed=22)
    engine, _ = pipeline.build_engine(ds, oracle_from_predicate(lambda r, d: True))
    doc = _client(engine).get("/ranges2d").json()
    assert doc["boundaries"] == [[0.0, "start"], [np.pi / 2, "end"]]


def test_rank_endpoint_counts():
    # two-color layout where f = x + y has 3 of group 0 and 1 of group 1
    # in its top 4, while a y-heavier function flips to a 2/2 split
    attrs = np.array([[0.95, 0.35], [0.8, 0.45], [0.7, 0.42], [0.9, 0.1],
                      [0.32, 0.95], [0.25, 0.85], [0.1, 0.9], [0.05, 0.8]])
    groups = np.array([0, 0, 0, 0, 1, 1, 1, 1])
    from fairrank import Dataset

    ds = Dataset(attrs, types={"g": groups},
                 codebooks={"g": {"orange": 0, "blue": 1}})
    engine, _ = pipeline.build_engine(ds, fm1_oracle(k=4, min_count=2))
    client = _client(engine)
    doc = client.post("/rank", json={"weights": [1.0, 1.0], "k": 4}).json()
    assert doc["group_counts"]["g"] == {"0": 3, "1": 1}
    doc = client.post("/rank", json={"weights": [0.97, 1.3], "k": 4}).json()
    assert doc["group_counts"]["g"] == {"0": 2, "1": 2}


def test_rank_validation(client_2d):
    assert client_2d.post("/rank", json={"weights": [1.0, 1.0], "k": 0}).status_code == 422
    assert client_2d.post("/rank", json={"weights": [1.0, 1.0], "k": 999}).status_code == 422


def test_cells_endpoint(client_md, client_2d):
    doc = client_md.get("/cells").json()
    assert len(doc["cells"]) == len(doc["axis0_breaks"]) - 1
    assert len(doc["cells"][0]) == len(doc["axis1_breaks"]) - 1
    sources = {c["source"] for row in doc["cells"] for c in row}
    assert sources <= {"direct", "colored", None}
    assert client_2d.get("/cells").status_code == 400


def test_unsatisfiable_status():
    ds = make_dataset(10, 2, seed=23)
    engine, _ = pipeline.build_engine(ds, oracle_from_predicate(lambda r, d: False))
    client = _client(engine)
    assert client.get("/meta").json()["status"] == "unsatisfiable"
    doc = client.post("/query", json={"weights": [1.0, 1.0]}).json()
    assert doc["unsatisfiable"] is True
    assert doc["suggestion"] is None


def test_background_build_and_atomic_swap(client_md):
    r = client_md.post("/build", json={"cells": 50})
    assert r.status_code == 200
    for _ in range(200):
        status = client_md.get("/meta").json()["status"]
        if status == "ready":
            break
        time.sleep(0.05)
    assert status == "ready"
    doc = client_md.post("/query", json={"weights": [0.5, 0.4, 0.6]}).json()
    assert doc["verified"] or doc["satisfactory_as_is"]
