import csv
import io
import json

import numpy as np
import pytest
from pydantic import ValidationError

from deltainv.custom_types import CheckResult, TupleSpec
from deltainv.exceptions import SpecValidationError
from deltainv.report import OptimizerMeta, ReportRecord, read_report, render, to_csv, to_json, write_report
from deltainv.report.model import to_plain


@pytest.fixture
def records() -> list[ReportRecord]:
    chen = CheckResult.from_margin(
        "chen",
        lhs=2.0,
        rhs=2.25,
        tolerance=1e-6,
        tuple_spec=TupleSpec(3, (2,)),
        details={"H2": np.float64(1.0), "eigenvalues": np.array([1.0, 2.0])},
    )
    gauss = CheckResult.from_residual("gauss", 2e-3, 1e-3)
    return [
        ReportRecord.from_check(chen, "sphere:3", point=[1.0, 1.2, 2.0], optimizer=OptimizerMeta(restarts=8, seed=7)),
        ReportRecord.from_check(gauss, "whitney:3", timestamp="2026-01-01T00:00:00+00:00"),
    ]


class TestReportRecord:
    def test_passed_must_match_margin(self):
        with pytest.raises(ValidationError, match="disagrees"):
            ReportRecord(check="chen", name="x", margin=-1.0, passed=True, tolerance=1e-6)

    def test_accepts_tuple_alias(self):
        record = ReportRecord.model_validate(
            {"check": "chen", "name": "x", "margin": 0.0, "passed": True, "tolerance": 0.0, "tuple": [2, 2]}
        )
        assert record.tuple_parts == [2, 2]

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            ReportRecord(check="chen", name="x", margin=float("nan"), passed=False, tolerance=0.0)

    def test_from_check(self, records):
        chen = records[0]
        assert chen.tuple_parts == [2]
        assert chen.margin == pytest.approx(0.25)
        assert chen.details == {"H2": 1.0, "eigenvalues": [1.0, 2.0]}
        assert records[1].passed is False


class TestToPlain:
    def test_conversions(self):
        plain = to_plain({1: (np.int64(3), TupleSpec(4, (2, 2))), "x": float("inf")})
        assert plain == {"1": [3, [2, 2]], "x": "inf"}
        assert type(plain["1"][0]) is int


class TestJson:
    def test_layout(self, records):
        text = to_json(records)
        assert text.endswith("\n")
        assert text.startswith('[\n  {\n    "check": "chen"')
        data = json.loads(text)
        assert "timestamp" not in data[0]
        assert "point" not in data[1]
        assert data[0]["tuple"] == [2]
        assert data[0]["optimizer"] == {"restarts": 8, "seed": 7}

    def test_deterministic(self, records):
        assert to_json(records) == to_json(list(records))

    def test_round_trip_through_file(self, records, tmp_path):
        path = write_report(records, tmp_path / "out" / "report.json")
        assert read_report(path) == records

    def test_read_rejects_invalid(self, tmp_path):
        path = tmp_path / "report.json"
        path.write_text('[{"check": "chen"}]')
        with pytest.raises(SpecValidationError, match="required"):
            read_report(path)

    def test_read_rejects_garbage(self, tmp_path):
        path = tmp_path / "report.json"
        path.write_text("[{")
        with pytest.raises(SpecValidationError, match="invalid JSON"):
            read_report(path)


class TestCsv:
    def test_columns(self, records):
        rows = list(csv.DictReader(io.StringIO(to_csv(records))))
        assert len(rows) == 2
        assert rows[0]["tuple"] == "[2]"
        assert rows[0]["point"] == "[1.0, 1.2, 2.0]"
        assert rows[0]["restarts"] == "8"
        assert rows[1]["seed"] == ""
        assert json.loads(rows[0]["details"]) == {"H2": 1.0, "eigenvalues": [1.0, 2.0]}

    def test_render_dispatch(self, records):
        assert render(records, "csv") == to_csv(records)
        with pytest.raises(ValueError, match="Unknown report format"):
            render(records, "xml")
