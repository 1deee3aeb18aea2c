import numpy as np
import pytest
from hypothesis import given, strategies as st

from lindscat.limits import (
    Schedule, hilbert_metric, plateau_limit, probe_operators, same_sign_exponentials, superop_metric,
)
from lindscat.operator_core import op_norm


def test_schedule_validation():
    with pytest.raises(ValueError):
        Schedule((1.0,))
    with pytest.raises(ValueError):
        Schedule((0.0, 2.0, 1.0))
    with pytest.raises(ValueError):
        Schedule((0.0, 1.0), tol=0.0)
    s = Schedule.for_lattice(10, 0.5, count=5)
    assert s.t_max == pytest.approx(3.0)
    assert s.with_tol(1e-3).tol == 1e-3
    assert s.with_probes(np.ones(4)).probes.shape == (4, 1)
    assert s.as_dict()["probe_count"] == 0


@given(st.floats(0.5, 3.0))
def test_exponential_approach_converges_to_limit(rate):
    target = np.array([[1.0, 2.0], [0.0, 1.0]])
    sch = Schedule.linear(40.0, 81, tol=1e-8)
    res = plateau_limit(lambda t: target * (1 - np.exp(-rate * t)), sch, op_norm)
    assert res.converged and not res.recurrence_detected
    assert op_norm(res.value - target) < 1e-7
    assert res.plateau[1] == pytest.approx(40.0)


def test_recurrence_is_detected():
    # settles, then revives near the end of the window
    def f(t):
        return np.array([[np.exp(-t) + (t > 8.0) * (t - 8.0)]])

    sch = Schedule.linear(10.0, 41, tol=1e-3)
    res = plateau_limit(f, sch, op_norm)
    assert res.recurrence_detected and not res.converged
    unguarded = plateau_limit(f, Schedule(sch.checkpoints, 1e-3, recurrence_guard=False), op_norm)
    assert unguarded.converged


def test_never_converging_reports_best_window():
    res = plateau_limit(lambda t: np.array([[np.cos(t)]]), Schedule.linear(10.0, 21, tol=1e-6), op_norm)
    assert not res.converged and res.plateau is None
    assert res.window is not None
    assert res.summary()["min_residual"] > 1e-6


def test_sign_table():
    assert same_sign_exponentials("plus") == (1, -1)
    assert same_sign_exponentials("minus") == (-1, 1)
    with pytest.raises(ValueError):
        same_sign_exponentials("both")


def test_metrics():
    p = np.eye(3)[:, :1]
    diff = np.diag([1.0, 5.0, 0.0])
    assert hilbert_metric(p)(diff) == pytest.approx(1.0)
    assert hilbert_metric(None)(diff) == pytest.approx(5.0)
    assert probe_operators(np.eye(2)).shape == (4, 4)
    swap = np.eye(4)
    assert superop_metric(None, 2)(swap) == pytest.approx(1.0)
