import numpy as np
import pytest
from fastapi.testclient import TestClient

from formcalc.channels import transpose_map
from formcalc.harness import channel_to_payload, matrix_to_payload, payload_to_matrix
from formcalc.service import app

KL_QUBIT = 0.14384103622589042


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def mat(M):
    return matrix_to_payload(np.asarray(M, dtype=complex))


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"
    assert "monotonicity" in body["suites"]


class TestReprBuild:
    def test_worked_pair(self, client):
        r = client.post(
            "/repr/build",
            json={"p": mat([[2, 1], [1, 2]]), "q": mat([[2, 1j], [-1j, 2]])},
        )
        assert r.status_code == 200
        body = r.json()
        assert body["support_dim"] == 2
        p_op = payload_to_matrix(body["p_op"])
        q_op = payload_to_matrix(body["q_op"])
        assert np.linalg.norm(p_op + q_op - np.eye(2)) < 1e-12

    def test_dimension_mismatch_is_400(self, client):
        r = client.post("/repr/build", json={"p": mat(np.eye(2)), "q": mat(np.eye(3))})
        assert r.status_code == 400

    def test_not_psd_is_400(self, client):
        r = client.post(
            "/repr/build", json={"p": mat([[1, 2], [2, 1]]), "q": mat(np.eye(2))}
        )
        assert r.status_code == 400


class TestInterpolate:
    def test_scalar(self, client):
        r = client.post(
            "/interpolate", json={"p": mat([[4.0]]), "q": mat([[9.0]]), "t": 0.5}
        )
        M = payload_to_matrix(r.json()["matrix"])
        assert M[0, 0] == pytest.approx(6.0)

    def test_endpoint(self, client):
        r = client.post(
            "/interpolate",
            json={"p": mat(np.diag([1.0, 2.0])), "q": mat(np.eye(2)), "t": 0.0},
        )
        assert np.allclose(payload_to_matrix(r.json()["matrix"]), np.diag([1.0, 2.0]))

    def test_bad_t_is_400(self, client):
        r = client.post(
            "/interpolate", json={"p": mat([[1.0]]), "q": mat([[1.0]]), "t": 2.0}
        )
        assert r.status_code == 400

    def test_nan_entry_is_422(self, client):
        body = (
            '{"p": {"rows":1,"cols":1,"data":[[NaN,0]]}, '
            '"q": {"rows":1,"cols":1,"data":[[1,0]]}, "t": 0.5}'
        )
        r = client.post(
            "/interpolate", content=body, headers={"content-type": "application/json"}
        )
        assert r.status_code == 422


class TestGeomean:
    def test_diagonal(self, client):
        r = client.post(
            "/geomean", json={"p": mat(np.diag([4.0, 1.0])), "q": mat(np.diag([1.0, 9.0]))}
        )
        assert np.allclose(payload_to_matrix(r.json()["matrix"]), np.diag([2.0, 3.0]))


class TestEntropy:
    def test_closed(self, client):
        r = client.post(
            "/entropy",
            json={
                "omega": mat(np.diag([0.5, 0.5])),
                "nu": mat(np.diag([0.75, 0.25])),
                "method": "closed",
            },
        )
        assert r.json()["value"] == pytest.approx(KL_QUBIT, abs=1e-12)
        assert r.json()["diagnostics"] is None

    def test_limit_with_diagnostics(self, client):
        r = client.post(
            "/entropy",
            json={
                "omega": mat(np.diag([0.5, 0.5])),
                "nu": mat(np.diag([0.75, 0.25])),
                "method": "limit",
            },
        )
        body = r.json()
        assert body["value"] == pytest.approx(KL_QUBIT, abs=1e-5)
        assert body["diagnostics"]["converged"] is True
        assert len(body["diagnostics"]["quotients"]) == 20

    def test_support_violation_serializes_inf(self, client):
        r = client.post(
            "/entropy",
            json={
                "omega": mat(np.diag([0.5, 0.5])),
                "nu": mat(np.diag([1.0, 0.0])),
                "method": "closed",
            },
        )
        assert r.json()["value"] == "inf"

    def test_limit_flags_divergence(self, client):
        r = client.post(
            "/entropy",
            json={
                "omega": mat(np.diag([0.5, 0.5])),
                "nu": mat(np.diag([1.0, 0.0])),
                "method": "limit",
            },
        )
        assert r.json()["value"] == "inf"
        assert r.json()["diagnostics"]["diverged"] is True


class TestChannelEndpoints:
    def pinching(self):
        return {
            "kind": "kraus",
            "kraus": [mat(np.diag([1.0, 0.0])), mat(np.diag([0.0, 1.0]))],
        }

    def test_apply(self, client):
        r = client.post(
            "/channel/apply",
            json={"channel": self.pinching(), "input": mat([[0.5, 0.2], [0.2, 0.5]])},
        )
        assert np.allclose(payload_to_matrix(r.json()["matrix"]), np.diag([0.5, 0.5]))

    def test_pullback(self, client):
        r = client.post(
            "/channel/pullback",
            json={"channel": self.pinching(), "omega": mat([[0.5, 0.2], [0.2, 0.5]])},
        )
        assert np.allclose(payload_to_matrix(r.json()["matrix"]), np.diag([0.5, 0.5]))

    def test_pullback_superoperator_is_400(self, client):
        r = client.post(
            "/channel/pullback",
            json={
                "channel": channel_to_payload(transpose_map(2)),
                "omega": mat(np.eye(2) / 2),
            },
        )
        assert r.status_code == 400

    def test_non_unital_is_400(self, client):
        r = client.post(
            "/channel/apply",
            json={
                "channel": {"kind": "kraus", "kraus": [mat(np.eye(2) / 2)]},
                "input": mat(np.eye(2)),
            },
        )
        assert r.status_code == 400

    def test_check_schwarz_transpose(self, client):
        r = client.post(
            "/channel/check-schwarz",
            json={
                "channel": channel_to_payload(transpose_map(2)),
                "trials": 10,
                "seed": 0,
            },
        )
        body = r.json()
        assert body["passed"] is False
        assert body["min_eigenvalue"] == pytest.approx(-1.0)
        witness = payload_to_matrix(body["witness"])
        assert witness[0, 1] == 1.0

    def test_check_schwarz_cp_passes(self, client):
        from formcalc.channels import random_unital_cp

        r = client.post(
            "/channel/check-schwarz",
            json={
                "channel": channel_to_payload(random_unital_cp(2, 2, 2, seed=5)),
                "trials": 200,
                "seed": 1,
            },
        )
        assert r.json()["passed"] is True


class TestVerifyEndpoints:
    def test_verify_paper_example(self, client):
        r = client.post("/verify", json={"suites": ["paper_example"], "trials": 1, "seed": 2})
        assert r.status_code == 200
        assert r.json()["passed"] is True
        assert r.json()["report"]["config"]["seed"] == 2

    def test_verify_unknown_suite_is_400(self, client):
        r = client.post("/verify", json={"suites": ["wat"], "trials": 1})
        assert r.status_code == 400

    def test_env_seed_override_echoed(self, client, monkeypatch):
        monkeypatch.setenv("FORMCALC_SEED", "314")
        r = client.post("/verify", json={"suites": ["paper_example"], "trials": 1})
        cfg = r.json()["report"]["config"]
        assert cfg["seed"] == 314
        assert cfg["seed_source"] == "env:FORMCALC_SEED"

    def test_verify_bad_trials_is_422(self, client):
        r = client.post("/verify", json={"trials": 0})
        assert r.status_code == 422

    def test_recheck_round_trip(self, client):
        r = client.post(
            "/verify",
            json={
                "suites": ["schwarz"],
                "trials": 3,
                "seed": 3,
                "tolerances": {"gap_threshold": 1e6},
            },
        )
        body = r.json()
        assert body["passed"] is False
        cex = body["report"]["results"]["schwarz"]["counterexample"]
        r2 = client.post("/verify/recheck", json={"counterexample": cex})
        assert r2.json()["reproduced"] is True

    def test_recheck_bad_payload_is_400(self, client):
        r = client.post("/verify/recheck", json={"counterexample": {"suite": "bogus"}})
        assert r.status_code == 400
