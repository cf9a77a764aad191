import json
from unittest.mock import patch

import pytest

from deltainv.__main__ import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main, parse_point


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPartitions:
    def test_cardinality(self, capsys):
        code, out, _ = run(capsys, "partitions", "--n", "10")
        assert code == EXIT_OK
        assert out == "41\n"

    def test_extras(self, capsys):
        code, out, _ = run(capsys, "partitions", "--n", "3", "--asymptotic", "--nash")
        lines = out.splitlines()
        assert code == EXIT_OK
        assert lines[0] == "2"
        assert lines[2] == "120"

    def test_small_n_is_a_usage_error(self, capsys):
        code, _, err = run(capsys, "partitions", "--n", "1")
        assert code == EXIT_USAGE
        assert "--n must be at least 2" in err


class TestUsageErrors:
    def test_missing_command(self, capsys):
        assert run(capsys)[0] == EXIT_USAGE

    def test_help_exits_cleanly(self, capsys):
        assert run(capsys, "--help")[0] == EXIT_OK

    def test_spec_and_catalog_are_exclusive(self, capsys, fixtures_dir):
        code, _, _ = run(capsys, "compute", "--catalog", "sphere:2", "--spec", str(fixtures_dir / "unit_sphere.json"))
        assert code == EXIT_USAGE

    def test_unknown_catalog_name(self, capsys):
        code, _, err = run(capsys, "compute", "--catalog", "klein-bottle")
        assert code == EXIT_USAGE
        assert "Unknown catalog entry 'klein-bottle'" in err

    def test_point_dimension(self, capsys):
        code, _, err = run(capsys, "compute", "--catalog", "sphere:3", "--point", "1,2")
        assert code == EXIT_USAGE
        assert "dimension 3" in err

    def test_invalid_spec(self, capsys, fixtures_dir):
        code, _, err = run(capsys, "check", "chen", "--spec", str(fixtures_dir / "missing_components.json"))
        assert code == EXIT_USAGE
        assert "components" in err

    def test_missing_spec_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "check", "chen", "--spec", str(tmp_path / "absent.json"))
        assert code == EXIT_USAGE
        assert "is not a file" in err

    @pytest.mark.parametrize(
        "extra, message",
        [
            (["--case", "L2"], "--case only applies"),
            (["--rigidity", "sphere"], "--rigidity only applies"),
            (["--grid", "0"], "--grid must be at least 1"),
            (["--tol", "-1"], "--tol must be positive"),
            (["--restarts", "0"], "--restarts must be at least 1"),
        ],
    )
    def test_check_argument_rules(self, capsys, extra, message):
        code, _, err = run(capsys, "check", "chen", "--catalog", "sphere:2", *extra)
        assert code == EXIT_USAGE
        assert message in err

    def test_bad_tuple(self, capsys):
        code, _, err = run(capsys, "compute", "--catalog", "sphere:3", "--tuple", "3")
        assert code == EXIT_USAGE
        assert "not valid for n=3" in err


class TestCompute:
    def test_whitney_double_point(self, capsys):
        code, out, _ = run(
            capsys, "compute", "--catalog", "whitney:3", "--point", "0,0,0", "--tuple", "2", "--no-timestamp"
        )
        [row] = json.loads(out)
        assert code == EXIT_OK
        assert row["tuple"] == [2]
        assert row["delta"] == pytest.approx(0.0, abs=1e-5)
        assert "timestamp" not in row or row["timestamp"] is None

    def test_chart_center_and_csv(self, capsys):
        code, out, _ = run(capsys, "compute", "--catalog", "sphere:3", "--format", "csv", "--no-timestamp")
        lines = out.splitlines()
        assert code == EXIT_OK
        assert lines[0].startswith("name,point,tuple,delta")
        assert len(lines) == 1 + 2

    def test_spec_file(self, capsys, fixtures_dir):
        code, out, _ = run(capsys, "compute", "--spec", str(fixtures_dir / "umbilical_point.json"), "--no-timestamp")
        rows = json.loads(out)
        assert code == EXIT_OK
        assert [row["tuple"] for row in rows] == [[], [2]]
        assert rows[1]["delta"] == pytest.approx(2.0)


class TestCheck:
    def test_chen_on_sphere(self, capsys):
        code, out, _ = run(capsys, "check", "chen", "--catalog", "sphere:3", "--grid", "4", "--all-tuples")
        records = json.loads(out)
        assert code == EXIT_OK
        assert len(records) == 4**3 * 2
        assert all(record["passed"] for record in records)

    def test_failure_exit_code(self, capsys, tmp_path):
        spec = tmp_path / "point.json"
        spec.write_text(json.dumps({"kind": "point-data", "name": "pd", "dim": 2, "h": [[1, 0], [0, 1]], "lambda1": 2.0}))
        code, out, _ = run(capsys, "check", "spectral", "--spec", str(spec), "--no-timestamp")
        records = json.loads(out)
        assert code == EXIT_FAILED
        assert all(record["details"]["inconclusive"] == "homogeneity is not asserted" for record in records)

    def test_ideality_verdict_sets_the_exit_code(self, capsys):
        argv = ["check", "ideality", "--catalog", "whitney:3", "--grid", "2", "--restarts", "8", "--no-timestamp"]
        code, out, _ = run(capsys, *argv)
        summary = json.loads(out)[-1]
        assert code == EXIT_FAILED
        assert summary["check"] == "ideal-immersion"
        assert summary["verdict"] is False

    def test_ideal_sphere_exits_cleanly(self, capsys):
        argv = ["check", "ideality", "--catalog", "sphere:2", "--grid", "2", "--restarts", "8", "--no-timestamp"]
        code, out, _ = run(capsys, *argv)
        assert code == EXIT_OK
        assert json.loads(out)[-1]["verdict"] is True

    def test_output_is_reproducible(self, tmp_path, capsys):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for path in paths:
            argv = ["check", "chen", "--catalog", "hypercylinder:1:2", "--grid", "2", "--seed", "3"]
            assert main(argv + ["--no-timestamp", "--output", str(path)]) == EXIT_OK
        assert paths[0].read_bytes() == paths[1].read_bytes()
        assert capsys.readouterr().out == ""

    def test_seed_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("DINV_SEED", "11")
        code, out, _ = run(capsys, "check", "chen", "--catalog", "sphere:2", "--grid", "1", "--no-timestamp")
        assert code == EXIT_OK
        assert json.loads(out)[0]["optimizer"]["seed"] == 11

    def test_timestamp_is_stamped(self, capsys):
        with patch("deltainv.__main__.utc_timestamp", return_value="2026-01-01T00:00:00+00:00"):
            _, out, _ = run(capsys, "check", "gauss", "--catalog", "sphere:2", "--grid", "1")
        assert json.loads(out)[0]["timestamp"] == "2026-01-01T00:00:00+00:00"

    def test_explicit_points(self, capsys):
        code, out, _ = run(
            capsys, "check", "gauss", "--catalog", "sphere:2", "--point", "1,2", "--point", "2,4", "--no-timestamp"
        )
        assert code == EXIT_OK
        assert [record["point"] for record in json.loads(out)] == [[1.0, 2.0], [2.0, 4.0]]


class TestReport:
    def test_re_emit_as_csv(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        assert main(["check", "gauss", "--catalog", "sphere:2", "--grid", "2", "--output", str(path)]) == EXIT_OK
        code, out, _ = run(capsys, "report", "--input", str(path), "--format", "csv")
        assert code == EXIT_OK
        assert out.splitlines()[0].startswith("check,name,point")
        assert len(out.splitlines()) == 1 + 4


class TestCatalog:
    def test_list(self, capsys):
        code, out, _ = run(capsys, "catalog", "list")
        names = [entry["name"] for entry in json.loads(out)]
        assert code == EXIT_OK
        assert "whitney:3" in names


def test_parse_point():
    assert parse_point("(0.5, -1,2)") == [0.5, -1.0, 2.0]
