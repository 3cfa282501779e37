from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from main import app
from tests.conftest import testdata_path


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def _load(*parts: str) -> dict:
    return json.loads(testdata_path(*parts).read_text(encoding="utf-8"))


def test_health(client) -> None:
    response = client.get("/api/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_group_endrank(client) -> None:
    response = client.post("/groups/run", json={"group": "S3", "subgroup": "(1 2)", "p": 3, "op": "endrank"})
    assert response.status_code == 200
    report = response.json()
    assert report["results"]["end_rank"] == 2
    assert report["results"]["double_cosets"] == 2
    assert "timings" not in report


def test_timings_on_request(client) -> None:
    response = client.post("/groups/run?timings=true", json={"group": "C2", "p": 2, "op": "double-cosets"})
    assert response.status_code == 200
    assert "compute" in response.json()["timings"]


def test_catalog(client) -> None:
    response = client.get("/groups/catalog")
    assert response.status_code == 200
    body = response.json()
    assert "S3" in body["groups"]
    assert "V4" in body["aliases"]


def test_witt_add(client) -> None:
    response = client.post("/witt/run", json={"op": "add", "p": 2, "N": 2, "x": [1, 0], "y": [1, 0]})
    assert response.status_code == 200
    assert response.json()["results"]["digits"] == [[0], [1]]


def test_composite_prime_is_a_bad_request(client) -> None:
    response = client.post("/witt/run", json={"op": "add", "p": 4, "x": [1], "y": [1]})
    assert response.status_code == 400


def test_precision_exhausted_is_unprocessable(client) -> None:
    response = client.post("/witt/run", json={"op": "to-digits", "p": 2, "N": 2, "x": 3, "l": 5})
    assert response.status_code == 422


def test_group_too_large(client) -> None:
    response = client.post("/groups/run", json={"group": "(1 2 3 4 5),(1 2)", "p": 2})
    assert response.status_code == 413


def test_rigidity_check(client) -> None:
    body = {
        "order": _load("orders", "oc2_p2.json"),
        "lattice": _load("lattices", "oc2_regular.json"),
    }
    response = client.post("/rigidity/check", json=body)
    assert response.status_code == 200
    report = response.json()
    assert report["results"]["rigid"] is True
    assert set(report["inputs"]) == {"request"}


def test_census_run(client) -> None:
    body = {
        "order": _load("orders", "oc2_p2.json"),
        "lattice": _load("lattices", "oc2_regular.json"),
        "max_colength": 1,
    }
    response = client.post("/census/run", json=body)
    assert response.status_code == 200
    assert response.json()["results"]["level_counts"] == {"0": 1, "1": 1}


def test_generic_valuation(client) -> None:
    polynomial = _load("polynomials", "x1.json")
    body = {
        "context": polynomial["context"],
        "polynomial": polynomial,
        "point": _load("points", "origin_l1.json"),
    }
    response = client.post("/genval/valuation", json=body)
    assert response.status_code == 200
    assert response.json()["results"]["generic_valuation"] == 1
