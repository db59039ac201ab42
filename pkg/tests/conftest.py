import os
import sys
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

# Add the parent directory to the Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

os.environ.setdefault("LOG_TO_FILE", "False")

from app.api.v1.routes.intersections import get_cache  # noqa: E402
from app.chow import engine  # noqa: E402
from app.chow.picard import DivClass, GeneratorId  # noqa: E402
from app.chow.weights import WeightTuple  # noqa: E402
from app.core.cache import ResultCache  # noqa: E402
from app.main import app  # noqa: E402


@pytest.fixture(scope="module")
def client(tmp_path_factory):
    cache_path = tmp_path_factory.mktemp("api") / "results.cache"
    app.dependency_overrides[get_cache] = lambda: ResultCache(cache_path)
    with TestClient(app) as test_client:
        yield test_client
    app.dependency_overrides.clear()


@pytest.fixture(autouse=True)
def set_test_env(monkeypatch, tmp_path):
    """Point the result cache at a per-test file."""
    from app.core.config import settings

    monkeypatch.setenv("SELFMAP_CHOW_CACHE", str(tmp_path / "selfmap.cache"))
    monkeypatch.setattr(settings, "SELFMAP_CHOW_CACHE", str(tmp_path / "selfmap.cache"))


@pytest.fixture
def fresh_memo():
    engine.clear_memo()
    yield
    engine.clear_memo()


@pytest.fixture
def m20():
    """M(2,0): projective plane, basis D_{0,1}."""
    return WeightTuple.of(2)


@pytest.fixture
def m2_0():
    """M(2|0): one weight-0 marking."""
    return WeightTuple.of(2, [0])


@pytest.fixture
def m11():
    """M(1|1)."""
    return WeightTuple.of(1, [1])


@pytest.fixture
def unit():
    def make(d: int, n: int, kind: str = "D", B=(), k: int = 0) -> DivClass:
        g = GeneratorId(kind) if kind in ("H", "G") else GeneratorId.boundary(B, k)
        return DivClass.unit(d, n, g)

    return make
