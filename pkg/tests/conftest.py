import math
from pathlib import Path

import numpy as np
import pytest

from deltainv.applications.catalog import BuiltinCatalog, sphere_domain, sphere_metric_entries
from deltainv.config import OptimizerOptions
from deltainv.extrinsic.immersion import SecondFundamentalForm, curvature_via_gauss
from deltainv.geometry.metric import MetricField

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


@pytest.fixture
def catalog() -> BuiltinCatalog:
    """A fresh catalog so cached records never leak between tests."""
    return BuiltinCatalog()


@pytest.fixture
def fast_options() -> OptimizerOptions:
    """Fewer restarts than the defaults; enough for dimension <= 5."""
    return OptimizerOptions(restarts=8, max_iters=200, seed=7)


@pytest.fixture
def sphere_metric():
    """Factory for the hyperspherical chart metric of S^n(r)."""

    def build(n: int, r: float = 1.0) -> MetricField:
        variables = [f"u{i}" for i in range(1, n + 1)]
        return MetricField.from_strings(sphere_metric_entries(variables, r), variables, sphere_domain(n))

    return build


@pytest.fixture
def interior_sphere_points(rng):
    """Factory for random chart points of S^n kept away from the coordinate poles."""

    def draw(n: int, count: int) -> np.ndarray:
        polar = rng.uniform(0.4, math.pi - 0.4, size=(count, n - 1))
        azimuth = rng.uniform(0.4, 2 * math.pi - 0.4, size=(count, 1))
        return np.hstack([polar, azimuth])

    return draw


@pytest.fixture
def gauss_tensor(rng):
    """Factory for random Gauss-realizable curvature tensors from a random h."""

    def draw(n: int, codim: int = 2, c: float = 0.0):
        h = rng.normal(size=(n, n, codim))
        sff = SecondFundamentalForm(h)
        return curvature_via_gauss(sff, c), sff

    return draw
