import math

import pytest

from deltainv.applications.records import ManifoldRecord, PointData
from deltainv.applications.spectral import (
    average_bound_test,
    best_living_test,
    rigidity_bound,
    rigidity_bound_check,
    spectral_bound_check,
)
from deltainv.delta.invariants import delta_hat0, delta_profile
from deltainv.exceptions import MissingMetadataError
from deltainv.geometry.curvature import constant_curvature_tensor
from deltainv.sampling import midpoint_grid

SPHERE_POINT = [1.0, 1.2, 2.0]


def profile_of(record, fast_options, point=SPHERE_POINT):
    return delta_profile(record.curvature_at(point), fast_options)


class TestSpectralBound:
    def test_sphere_attains_nagano_bound(self, catalog, fast_options):
        results = spectral_bound_check(catalog.resolve("sphere:3"), profile_of(catalog.resolve("sphere:3"), fast_options))
        assert all(result.passed for result in results)
        assert min(result.margin for result in results) == pytest.approx(0.0, abs=1e-9)
        assert results[0].details["normalized_scalar"]
        assert results[-1].check == "spectral-hat"

    def test_projective_space_margin(self, catalog, fast_options):
        record = catalog.resolve("rp:3")
        results = spectral_bound_check(record, profile_of(record, fast_options))
        assert all(result.passed for result in results)
        assert min(result.margin for result in results) == pytest.approx(5.0, abs=1e-3)

    def test_flat_torus(self, catalog, fast_options):
        record = catalog.resolve("flat-torus")
        results = spectral_bound_check(record, profile_of(record, fast_options, [0.5, 0.5]))
        assert results[-1].margin == pytest.approx(4 * math.pi**2)

    def test_requires_lambda1(self, fast_options):
        record = ManifoldRecord("pd", "point-data", point_data=PointData(constant_curvature_tensor(3, 1.0)))
        with pytest.raises(MissingMetadataError):
            spectral_bound_check(record, delta_profile(record.curvature_at(), fast_options))

    def test_inhomogeneous_is_inconclusive(self, fast_options):
        record = ManifoldRecord(
            "pd", "point-data", point_data=PointData(constant_curvature_tensor(3, 1.0)), lambda1=3.0
        )
        [result] = spectral_bound_check(record, delta_profile(record.curvature_at(), fast_options))
        assert not result.passed
        assert result.margin == -1.0
        assert "homogeneity" in result.details["inconclusive"]


class TestBestLiving:
    def test_sphere_lives_best(self, catalog, fast_options):
        record = catalog.resolve("sphere:3")
        dhat0, _ = delta_hat0(record.curvature_at(SPHERE_POINT), fast_options)
        result = best_living_test(record, dhat0)
        assert result.verdict is True
        assert result.passed

    def test_projective_space_does_not(self, catalog, fast_options):
        record = catalog.resolve("rp:3")
        dhat0, _ = delta_hat0(record.curvature_at(SPHERE_POINT), fast_options)
        assert dhat0 == pytest.approx(1.0, abs=1e-4)
        assert best_living_test(record, dhat0).verdict is False

    def test_flat_torus_does_not(self, catalog):
        assert best_living_test(catalog.resolve("flat-torus"), 0.0).verdict is False


class TestAverageBound:
    def test_sphere_quadrature_volume(self, catalog, fast_options):
        record = catalog.resolve("sphere:2")
        result = average_bound_test(record, midpoint_grid(record.domain, 40), fast_options)
        assert result.details["quadrature_volume"] == pytest.approx(4 * math.pi, rel=0.01)
        assert result.details["mean_dhat0"] == pytest.approx(1.0, abs=1e-6)
        assert result.verdict is False

    def test_projective_space_fires(self, catalog, fast_options):
        record = catalog.resolve("rp:3")
        result = average_bound_test(record, midpoint_grid(record.domain, 3), fast_options)
        assert result.details["mean_dhat0"] == pytest.approx(1.0, abs=1e-2)
        assert result.verdict is True

    def test_flat_torus_fires(self, catalog, fast_options):
        record = catalog.resolve("flat-torus")
        result = average_bound_test(record, midpoint_grid(record.domain, 4), fast_options)
        assert result.margin == pytest.approx(4 * math.pi**2, abs=1e-6)
        assert result.verdict is True

    def test_requires_volume(self, catalog):
        record = catalog.resolve("catenoid")
        with pytest.raises(MissingMetadataError):
            average_bound_test(record, midpoint_grid(record.domain, 2))


class TestRigidity:
    def test_bounds(self):
        assert rigidity_bound(4) == 1.0
        assert rigidity_bound(3, 2) == pytest.approx(4 / 9)
        assert rigidity_bound(5, 5) == pytest.approx(1 / 25)

    @pytest.mark.parametrize("n1", [1, 6])
    def test_n1_range(self, n1):
        with pytest.raises(ValueError):
            rigidity_bound(5, n1)

    def test_sphere_equality(self):
        result = rigidity_bound_check(1.0, 3)
        assert result.passed
        assert result.verdict is True

    def test_hypercylinder_equality(self):
        result = rigidity_bound_check((2 / 3) ** 2, 3, 2)
        assert result.verdict is True

    def test_below_bound(self):
        result = rigidity_bound_check(0.5, 3)
        assert not result.passed
        assert result.verdict is False
