import json
import math

import pytest
from fastapi.testclient import TestClient

from biharp.main import create_app

FIXTURE = {
    "maxLevel": 1,
    "coeffs": [
        {"iLevel": 0, "iIndex": 0, "jLevel": 0, "jIndex": 0, "value": 1.0},
        {"iLevel": 1, "iIndex": 0, "jLevel": 1, "jIndex": 0, "value": 3.0},
    ],
}


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_norms(client):
    response = client.post("/api/norms", json={"expansion": FIXTURE, "p": 1.0})
    assert response.status_code == 200
    body = response.json()
    assert body["hp_norm"] == pytest.approx(0.75 + math.sqrt(10.0) / 4.0)
    assert body["grid"] == 2


def test_zero_expansion_is_rejected(client):
    response = client.post("/api/norms", json={"expansion": {"maxLevel": 1, "coeffs": []}})
    assert response.status_code == 400


def test_depth_limit(client):
    deep = {"maxLevel": 12, "coeffs": [{"iLevel": 0, "iIndex": 0, "jLevel": 0, "jIndex": 0, "value": 1.0}]}
    assert client.post("/api/norms", json={"expansion": deep}).status_code == 400


def test_duplicate_rectangles_are_rejected(client):
    twice = {"maxLevel": 0, "coeffs": [FIXTURE["coeffs"][0], FIXTURE["coeffs"][0]]}
    assert client.post("/api/norms", json={"expansion": twice}).status_code == 400


def test_out_of_range_p_is_a_validation_error(client):
    assert client.post("/api/norms", json={"expansion": FIXTURE, "p": 3.0}).status_code == 422


def test_decomposition(client):
    response = client.post("/api/decompositions", json={"expansion": FIXTURE, "p": 1.0})
    assert response.status_code == 200
    body = response.json()
    assert [level["n"] for level in body["levels"]] == [-1, 1]
    assert body["levels"][1]["star_measure"] == {"numerator": 1, "denominator": 4}
    assert body["b"] == pytest.approx(1.75)


def test_weights(client):
    response = client.post("/api/weights", json={"expansion": FIXTURE, "p": 1.0})
    assert response.status_code == 200
    omegas = sorted(entry["omega"] for entry in response.json()["weights"])
    assert omegas == pytest.approx([3.0 / 7.0, 4.0 / 7.0])


def test_ap_weights_need_a_constant(client):
    response = client.post("/api/weights", json={"expansion": FIXTURE, "mode": "ap"})
    assert response.status_code == 422


def test_verify_domination(client):
    payload = {"expansion": FIXTURE, "p": 1.0, "trials": 10, "iterations": 100, "sequences": 2}
    response = client.post("/api/verify/domination", json=payload)
    assert response.status_code == 200
    body = response.json()
    assert body["given"]["ratio"] == pytest.approx((0.75 + math.sqrt(10.0) / 4.0) / 1.75)
    assert body["adversarial"]["worst_ratio"] <= 1.0 + 1e-9


def test_zero_multiplier_is_rejected(client):
    payload = {"expansion": FIXTURE, "phi_fill": 0.0}
    assert client.post("/api/verify/domination", json=payload).status_code == 400


def test_verify_atomic(client):
    response = client.post("/api/verify/atomic", json={"expansion": FIXTURE, "p": 1.0})
    assert response.status_code == 200
    assert response.json()["chain"]["b"] == pytest.approx(1.75)


def test_factorize_and_x0(client):
    response = client.post("/api/factorize", json={"expansion": FIXTURE, "p": 1.5, "budget": 10})
    assert response.status_code == 200
    assert response.json()["y_h2"] == pytest.approx(1.0)
    response = client.post("/api/x0", json={"expansion": FIXTURE, "target_p": 1.5, "budget": 10})
    assert response.status_code == 200
    body = response.json()
    assert body["lower"] <= body["upper"] + 1e-9


def test_upload(client):
    files = {"file": ("fixture.json", json.dumps(FIXTURE), "application/json")}
    response = client.post("/api/expansions/upload", files=files)
    assert response.status_code == 200
    body = response.json()
    assert body["filename"] == "fixture.json"
    assert body["support_size"] == 2


def test_upload_rejects_garbage(client):
    files = {"file": ("fixture.json", "not json", "application/json")}
    assert client.post("/api/expansions/upload", files=files).status_code == 400


def test_ensembles_are_reproducible(client):
    spec = {"kind": "denseGaussian", "maxLevel": 2, "count": 3, "seed": 5}
    first = client.post("/api/ensembles", json=spec)
    second = client.post("/api/ensembles", json=spec)
    assert first.status_code == 200
    assert first.json() == second.json()
    assert len(first.json()["expansions"]) == 3


def test_suite_size_limit(client):
    config = {"ensembles": [{"kind": "singleAtom", "maxLevel": 1, "count": 100}], "p_values": [0.5, 1.0, 1.5]}
    assert client.post("/api/suite", json=config).status_code == 400


def test_small_suite(client):
    config = {
        "ensembles": [{"kind": "singleAtom", "maxLevel": 1, "count": 2, "seed": 3}],
        "p_values": [1.0],
        "trials": 5,
        "adversarial_budget": 20,
        "x0_budget": 5,
    }
    response = client.post("/api/suite", json=config)
    assert response.status_code == 200
    body = response.json()
    assert body["schema"] == "biharp.run-report/1"
    assert body["failures"] == []
