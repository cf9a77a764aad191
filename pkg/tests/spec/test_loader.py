import json
import math

import numpy as np
import pytest

from deltainv.applications.records import RecordKind
from deltainv.exceptions import SpecValidationError
from deltainv.geometry.curvature import constant_curvature
from deltainv.spec import load_spec, parse_spec, validate_spec_json
from deltainv.spec.model import SpecDocument


@pytest.fixture
def point_data_spec() -> dict:
    return {"kind": "point-data", "name": "pd", "dim": 2, "curvature": np.zeros((2, 2, 2, 2)).tolist()}


class TestLoadValidFiles:
    def test_immersion(self, fixtures_dir):
        document = load_spec(fixtures_dir / "unit_sphere.json")
        assert isinstance(document, SpecDocument)
        assert document.parameters == {"r": 1.0}
        record = document.to_record()
        assert record.kind is RecordKind.IMMERSION
        assert record.lambda1 == 2.0
        assert record.topology.finite_pi1
        assert record.homogeneous
        assert constant_curvature(record.curvature_at([1.0, 2.0]), 1e-9) == pytest.approx(1.0)

    def test_metric(self, fixtures_dir):
        record = load_spec(fixtures_dir / "hyperbolic_plane.json").to_record()
        assert record.kind is RecordKind.METRIC
        assert not record.topology.asserted
        assert constant_curvature(record.curvature_at([0.0, 1.0]), 1e-4) == pytest.approx(-1.0, abs=1e-4)

    def test_warped(self, fixtures_dir):
        record = load_spec(fixtures_dir / "warped_cylinder.json").to_record()
        assert record.kind is RecordKind.WARPED
        assert record.dim == 2
        assert record.warped.warping_value([0.3]) == 1.0

    def test_point_data(self, fixtures_dir):
        record = load_spec(fixtures_dir / "umbilical_point.json").to_record()
        assert record.kind is RecordKind.POINT_DATA
        assert constant_curvature(record.curvature_at()) == pytest.approx(1.0)

    def test_schema_accepts_fixture_files(self, fixtures_dir):
        for name in ("unit_sphere.json", "hyperbolic_plane.json", "warped_cylinder.json", "umbilical_point.json"):
            assert validate_spec_json(json.loads((fixtures_dir / name).read_text())) == []


class TestLoadInvalidFiles:
    def test_missing_components_names_the_field(self, fixtures_dir):
        with pytest.raises(SpecValidationError) as exc_info:
            load_spec(fixtures_dir / "missing_components.json")
        assert any("components" in error for error in exc_info.value.errors)
        assert exc_info.value.source.endswith("missing_components.json")

    def test_empty_box(self, fixtures_dir):
        with pytest.raises(SpecValidationError, match="empty box"):
            load_spec(fixtures_dir / "empty_box.json")

    def test_bad_expression(self, fixtures_dir):
        with pytest.raises(SpecValidationError) as exc_info:
            load_spec(fixtures_dir / "bad_expression.json")
        assert any("metric/0/0" in error for error in exc_info.value.errors)

    def test_not_json(self, fixtures_dir):
        with pytest.raises(SpecValidationError, match="invalid JSON"):
            load_spec(fixtures_dir / "not_json.json")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_spec(tmp_path / "absent.json")


class TestParseSpec:
    def test_unknown_key_is_rejected(self, point_data_spec):
        point_data_spec["lambda_1"] = 2.0
        with pytest.raises(SpecValidationError, match="lambda_1"):
            parse_spec(point_data_spec)

    def test_curvature_shape(self, point_data_spec):
        point_data_spec["dim"] = 3
        with pytest.raises(SpecValidationError, match="curvature: expected shape"):
            parse_spec(point_data_spec)

    def test_point_data_needs_tensor(self):
        with pytest.raises(SpecValidationError):
            parse_spec({"kind": "point-data", "name": "pd", "dim": 2})

    def test_variable_count(self):
        data = {
            "kind": "metric",
            "name": "m",
            "dim": 2,
            "variables": ["x"],
            "metric": [["1", "0"], ["0", "1"]],
            "domain": [[0, 1], [0, 1]],
        }
        with pytest.raises(SpecValidationError, match="variables: expected 2 names"):
            parse_spec(data)

    def test_ambient_dimension_must_exceed(self):
        data = {
            "kind": "immersion",
            "name": "i",
            "dim": 3,
            "ambient_dim": 3,
            "variables": ["a", "b", "c"],
            "components": ["a", "b", "c"],
            "domain": [[0, 1]] * 3,
        }
        with pytest.raises(SpecValidationError, match="must exceed"):
            parse_spec(data)

    def test_warped_dimensions_must_sum(self):
        factor = {"variables": ["t"], "metric": [["1"]], "domain": [[0, 1]]}
        data = {
            "kind": "warped",
            "name": "w",
            "dim": 3,
            "warped": {"base": factor, "fiber": {**factor, "variables": ["s"]}, "warping": "1"},
        }
        with pytest.raises(SpecValidationError, match="do not sum to 3"):
            parse_spec(data)

    def test_unbound_parameter(self):
        data = {
            "kind": "immersion",
            "name": "i",
            "dim": 2,
            "ambient_dim": 3,
            "variables": ["u", "v"],
            "components": ["u", "v", "a*u*v"],
            "domain": [[0, 1], [0, 1]],
        }
        with pytest.raises(SpecValidationError, match="components/2"):
            parse_spec(data)
        data["parameters"] = {"a": math.e}
        assert parse_spec(data).to_record().immersion.ambient_dim == 3
