import pytest

from deltainv.applications.obstructions import NOT_DETECTED, lagrangian_obstruction, minimal_obstruction
from deltainv.applications.records import Topology
from deltainv.geometry.curvature import constant_curvature_tensor


def curvature_samples(record, points):
    return [record.curvature_at(p) for p in points]


class TestMinimalObstruction:
    def test_sphere_fires_both(self, catalog, fast_options):
        samples = curvature_samples(catalog.resolve("sphere:2"), [[1.0, 2.0], [2.0, 4.0]])
        result = minimal_obstruction(samples, fast_options)
        assert result.verdict is True
        assert result.details["ricci_fires"]
        assert result.details["label"] == "no-minimal-immersion-into-euclidean"

    def test_flat_fires_neither(self, fast_options):
        result = minimal_obstruction([constant_curvature_tensor(3, 0.0)], fast_options)
        assert result.verdict is False
        assert not result.details["ricci_fires"]
        assert result.details["label"] == NOT_DETECTED

    def test_catenoid_fires_neither(self, catalog, fast_options):
        samples = curvature_samples(catalog.resolve("catenoid"), [[0.5, -0.5], [1.0, 0.0], [3.0, 0.8]])
        result = minimal_obstruction(samples, fast_options)
        assert result.verdict is False
        assert not result.details["ricci_fires"]
        assert result.details["max_delta"] < 0

    def test_empty_sample(self, fast_options):
        result = minimal_obstruction([], fast_options)
        assert result.verdict is False
        assert result.details["max_delta"] is None


class TestLagrangianObstruction:
    def test_projective_space_fires(self, catalog, fast_options):
        record = catalog.resolve("rp:3")
        samples = curvature_samples(record, [[1.0, 1.2, 2.0], [0.7, 2.0, 4.0]])
        result = lagrangian_obstruction(samples, record.topology, fast_options)
        assert result.verdict is True
        assert "(2)" in result.details["positive_tuples"]
        assert result.details["label"] == "no-lagrangian-immersion-into-complex-euclidean"

    def test_flat_torus_hypothesis_fails(self, catalog, fast_options):
        record = catalog.resolve("flat-torus")
        result = lagrangian_obstruction(curvature_samples(record, [[0.5, 0.5]]), record.topology, fast_options)
        assert result.verdict is False
        assert result.details["hypothesis"] is False

    @pytest.mark.parametrize("topology", [None, Topology()])
    def test_missing_topology_is_inconclusive(self, topology, fast_options):
        result = lagrangian_obstruction([constant_curvature_tensor(3, 1.0)], topology, fast_options)
        assert not result.passed
        assert result.verdict is None

    def test_whitney_sphere_does_not_fire(self, catalog, fast_options):
        record = catalog.resolve("whitney:3")
        samples = curvature_samples(record, [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.3, -0.4, 0.5]])
        result = lagrangian_obstruction(samples, record.topology, fast_options, tol=1e-4)
        assert result.verdict is False
        assert result.details["positive_tuples"] == []

    def test_positivity_must_hold_at_every_point(self, fast_options):
        samples = [constant_curvature_tensor(3, 1.0), constant_curvature_tensor(3, 0.0)]
        result = lagrangian_obstruction(samples, Topology(b1_zero=True), fast_options)
        assert result.verdict is False
        assert result.details["min_delta"]["(2)"] == pytest.approx(0.0)
