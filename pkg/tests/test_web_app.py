from fastapi.testclient import TestClient

from src.web_app import create_app

SQUARE = "0 <= x + y <= 1; 0 <= x - y <= 1;"


def _client() -> TestClient:
    return TestClient(create_app())


def test_health_reports_ok() -> None:
    response = _client().get("/health")

    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_solve_returns_certified_bounds() -> None:
    response = _client().post("/solve", json={"model": SQUARE, "solver": "lin"})

    assert response.status_code == 200
    payload = response.json()
    assert payload["status"] == "solved"
    assert payload["solver"] == "lin"
    x, y = payload["variables"]["x"], payload["variables"]["y"]
    assert x["lo"] <= 0.0 <= x["lo"] + 1e-9
    assert x["hi"] - 1e-9 <= 1.0 <= x["hi"]
    assert y["lo"] <= -0.5 and y["hi"] >= 0.5
    assert payload["report"]["sweeps"] >= 1
    assert "message" not in payload


def test_solve_with_elimination_order() -> None:
    response = _client().post("/solve", json={"model": SQUARE, "solver": "gauss", "order": ["y", "x"]})

    variables = response.json()["variables"]
    assert variables["x"] == {"lo": 0.0, "hi": 1.0}
    assert variables["y"] == {"lo": -1.0, "hi": 1.0}


def test_unbounded_variables_are_spelled_out() -> None:
    response = _client().post("/solve", json={"model": "x + y <= 1; x >= 0;", "solver": "lin"})

    variables = response.json()["variables"]
    assert variables["x"] == {"lo": 0.0, "hi": "inf"}
    assert variables["y"]["lo"] == "-inf"


def test_solve_reports_infeasible_models() -> None:
    response = _client().post("/solve", json={"model": "x <= 1; x >= 2;"})

    assert response.status_code == 200
    payload = response.json()
    assert payload["status"] == "infeasible"
    assert payload["message"]


def test_syntax_errors_are_unprocessable() -> None:
    response = _client().post("/solve", json={"model": "x + * 2 = 0;"})

    assert response.status_code == 422
    assert response.json()["detail"].startswith("1:5:")


def test_invalid_request_fields_are_rejected() -> None:
    client = _client()

    assert client.post("/solve", json={"model": SQUARE, "solver": "simplex"}).status_code == 422
    assert client.post("/solve", json={"model": SQUARE, "digits": 0}).status_code == 422
    assert client.post("/solve", json={}).status_code == 422


def test_report_page_renders_outward_rounded_rows() -> None:
    response = _client().post("/report", json={"model": SQUARE, "solver": "gauss", "order": ["x", "y"], "digits": 3})

    assert response.status_code == 200
    assert "Certified enclosure" in response.text
    assert "<td>x</td><td>-0.5</td><td>1.5</td>" in response.text
    assert "<td>y</td><td>-0.5</td><td>0.5</td>" in response.text
    assert "0 &lt;= x + y &lt;= 1;" in response.text


def test_report_page_for_infeasible_model() -> None:
    response = _client().post("/report", json={"model": "x <= 1; x >= 2;"})

    assert response.status_code == 200
    assert "Infeasible at stage relax" in response.text
