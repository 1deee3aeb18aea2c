import csv
import json

import jsonschema
import numpy as np
import pytest

from lindscat.pipeline import run_command
from lindscat.report import dumps_report, plain, validate_report, write_outputs
from lindscat.scenario import preset_scenario


@pytest.fixture(scope="module")
def free_report():
    return run_command("run", preset_scenario("free"))


def test_plain_conversions():
    out = plain({"a": np.float64(1.5), "b": np.array([1, 2]), "c": (np.bool_(True),), "d": float("inf"), "e": 1j})
    assert out == {"a": 1.5, "b": [1, 2], "c": [True], "d": "inf", "e": [0.0, 1.0]}


def test_report_validates_and_is_deterministic(free_report):
    validate_report(free_report)
    again = run_command("run", preset_scenario("free"))
    assert dumps_report(free_report) == dumps_report(again)
    assert free_report["status"]["exit_code"] == 0


def test_schema_rejects_malformed_reports(free_report):
    bad = dict(free_report, schema="lindscat.report/v0")
    with pytest.raises(jsonschema.ValidationError):
        validate_report(bad)
    bad = dict(free_report, status={"exit_code": 7})
    with pytest.raises(jsonschema.ValidationError):
        validate_report(bad)


def test_outputs_written(free_report, tmp_path):
    paths = write_outputs(free_report, tmp_path, "json+csv", runtime=0.5)
    names = sorted(p.name for p in paths)
    assert names == ["report.json", "report.meta.json", "report.timeseries.csv"]
    main = json.loads((tmp_path / "report.json").read_text())
    assert "created" not in json.dumps(main)
    meta = json.loads((tmp_path / "report.meta.json").read_text())
    assert meta["runtime_seconds"] == 0.5 and "created" in meta
    with open(tmp_path / "report.timeseries.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "t" and len(rows) == 1 + 9
    assert rows[2][0] == "%.12e" % 0.25


def test_unknown_format_rejected(free_report, tmp_path):
    with pytest.raises(ValueError):
        write_outputs(free_report, tmp_path, "xml")
