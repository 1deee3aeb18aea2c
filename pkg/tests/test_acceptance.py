"""Acceptance criteria 1-9 at their stated tolerances.  Each test prints
one summary line and fails when any check of its criterion fails."""
import pytest

from lindscat.acceptance import CRITERIA, run_criteria


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    (result,) = run_criteria([number], seed=0)
    with capsys.disabled():
        print(f"\n{result.line()}")
        for key, check in result.checks.items():
            if not check["passed"]:
                print(f"    {key}: measured {check['measured']} vs {check['relation']} {check['threshold']}")
    assert result.passed, result.failed_checks
