import json
import math
from pathlib import Path

from lindscat.pipeline import run_command
from lindscat.report import dumps_report
from lindscat.scenario import preset_scenario

GOLDEN = Path(__file__).parent / "golden" / "siegmann-demo.json"


def assert_close(actual, expected, path="$"):
    if isinstance(expected, dict):
        assert sorted(actual) == sorted(expected), path
        for k in expected:
            assert_close(actual[k], expected[k], f"{path}.{k}")
    elif isinstance(expected, list):
        assert len(actual) == len(expected), path
        for i, (a, e) in enumerate(zip(actual, expected)):
            assert_close(a, e, f"{path}[{i}]")
    elif isinstance(expected, float) and not isinstance(expected, bool):
        assert math.isclose(actual, expected, rel_tol=1e-6, abs_tol=1e-10), (path, actual, expected)
    else:
        assert actual == expected, path


def test_spin_zeeman_demo_matches_golden_report():
    report = json.loads(dumps_report(run_command("run", preset_scenario("siegmann-demo"))))
    assert_close(report, json.loads(GOLDEN.read_text()))
    assert report["status"]["exit_code"] == 0
