from app.chow.divisors import class_H, class_per
from app.chow.keys import class_to_map
from app.chow.pullbacks import pullback_compose


def test_basis_with_quotient(client):
    """Test the basis of Y_{2,0} and its quotient M(2,0)."""
    # Test
    response = client.get("/api/v1/picard/basis", params={"d": 2, "n": 0})

    # Assert
    assert response.status_code == 200
    data = response.json()
    assert data["generators"] == ["D|B=|k=1", "D|B=|k=2"]
    assert data["rank"] == 2
    assert data["unstable"] == ["D|B=|k=2"]
    assert data["surviving"] == ["D|B=|k=1"]
    assert data["quotient_rank"] == 1


def test_basis_with_weights(client):
    """Test weights are accepted as a comma list."""
    response = client.get("/api/v1/picard/basis", params={"d": 2, "n": 1, "weights": "0"})
    assert response.status_code == 200
    assert response.json()["weights"] == ["0"]


def test_basis_inadmissible(client):
    """Test that an inadmissible weight tuple is a client error."""
    response = client.get("/api/v1/picard/basis", params={"d": 1, "n": 0})
    assert response.status_code == 422
    assert "inadmissible" in response.json()["detail"]


def test_basis_degree_limit(client):
    """Test the server-side degree limit."""
    response = client.get("/api/v1/picard/basis", params={"d": 50, "n": 0})
    assert response.status_code == 422


def test_build_class(client):
    """Test D_p on Y_{2,0} through the classes endpoint."""
    # Test
    response = client.post("/api/v1/picard/classes", json={"d": 2, "n": 0, "expression": "Dp"})

    # Assert
    assert response.status_code == 200
    assert response.json() == {"d": 2, "n": 0, "coefficients": {"D|B=|k=1": "1/4", "D|B=|k=2": "1/1"}}


def test_build_class_blank_expression(client):
    response = client.post("/api/v1/picard/classes", json={"d": 2, "n": 0, "expression": "  "})
    assert response.status_code == 422


def test_identify(client):
    """Test the profile of H on Y_{1,1} identifies H."""
    # Setup
    payload = {"d": 1, "n": 1, "profile": {"1|0": "1", "1|1": "1"}}

    # Test
    response = client.post("/api/v1/picard/identify", json=payload)

    # Assert
    assert response.status_code == 200
    assert response.json()["coefficients"] == {"H": "1/1"}


def test_identify_unknown_curve(client):
    response = client.post("/api/v1/picard/identify", json={"d": 1, "n": 1, "profile": {"7|0": "1"}})
    assert response.status_code == 422


def test_intersection_and_cache(client):
    """Test the plane line squared, answered from the cache the second time."""
    # Setup
    payload = {"d": 2, "weights": [], "factors": [{"D|B=|k=1": "1"}, "D|B=|k=1"]}

    # Test
    first = client.post("/api/v1/intersections", json=payload)
    second = client.post("/api/v1/intersections", json=payload)

    # Assert
    assert first.status_code == 200
    assert first.json()["value"] == "1/1"
    assert first.json()["cache_hit"] is False
    assert second.json()["cache_hit"] is True
    assert second.json()["digest"] == first.json()["digest"]


def test_intersection_with_pivot(client):
    """Test a forced pivot on M(2|0)."""
    payload = {
        "d": 2,
        "weights": ["0"],
        "factors": ["D|B=1|k=1", "D|B=|k=1", "D|B=|k=1"],
        "pivot": "D|B=1|k=1",
    }
    response = client.post("/api/v1/intersections", json=payload)
    assert response.status_code == 200
    assert response.json()["value"] == "5/2"


def test_intersection_dimension_mismatch(client):
    """Test a wrong number of factors is a client error."""
    payload = {"d": 2, "weights": [], "factors": ["D|B=|k=1"]}
    response = client.post("/api/v1/intersections", json=payload)
    assert response.status_code == 422


def test_compose(client):
    """Test the composition pullback of H_{1,2} on Y_{2,1}."""
    # Setup
    payload = {"d1": 1, "n1": 1, "d2": 2, "coefficients": class_to_map(class_H(2, 1, 1, 2))}
    first, second = pullback_compose(1, 1, 2, class_H(2, 1, 1, 2))

    # Test
    response = client.post("/api/v1/pullbacks/compose", json=payload)

    # Assert
    assert response.status_code == 200
    assert response.json()["first"]["coefficients"] == class_to_map(first)
    assert response.json()["second"]["coefficients"] == class_to_map(second)


def test_selfcompose(client):
    """Test Per_1 on Y_{4,0} pulls back to Per_2 on Y_{2,0}."""
    payload = {"d": 2, "n": 0, "m": 2, "coefficients": class_to_map(class_per(4, 0, 1))}
    response = client.post("/api/v1/pullbacks/selfcompose", json=payload)
    assert response.status_code == 200
    assert response.json()["coefficients"] == class_to_map(class_per(2, 0, 2))
