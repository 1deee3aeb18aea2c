"""Plateau detection for strong limits on finite lattices.

A limit s-lim F(t) is estimated from F at a list of checkpoints.  Consecutive
Cauchy residuals are measured either in operator norm or, when the schedule
carries probe vectors, strongly on that probe frame.  A plateau is a run of
at least ``min_plateau`` consecutive residuals below ``tol``; the estimate is
the mean of F over the last ``min_plateau`` steps of the plateau, and the
spread is measured over the whole plateau.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .operator_core import dagger, op_norm, superop_dim, trace_norm


@dataclass(frozen=True)
class Schedule:
    checkpoints: tuple
    tol: float = 1e-6
    recurrence_guard: bool = True
    probes: np.ndarray | None = None
    min_plateau: int = 3

    def __post_init__(self):
        ts = np.asarray(self.checkpoints, dtype=float)
        if ts.ndim != 1 or ts.size < 2:
            raise ValueError("schedule needs at least two checkpoints")
        if np.any(np.diff(ts) <= 0) or ts[0] < 0:
            raise ValueError("checkpoints must be nonnegative and strictly increasing")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        object.__setattr__(self, "checkpoints", tuple(float(t) for t in ts))
        if self.probes is not None:
            p = np.asarray(self.probes, dtype=complex)
            if p.ndim == 1:
                p = p[:, None]
            object.__setattr__(self, "probes", p)

    @property
    def t_max(self) -> float:
        return self.checkpoints[-1]

    @classmethod
    def linear(cls, t_max: float, count: int = 25, t_min: float = 0.0, **kw) -> "Schedule":
        return cls(tuple(np.linspace(t_min, t_max, count)), **kw)

    @classmethod
    def geometric(cls, t_min: float, t_max: float, count: int = 20, **kw) -> "Schedule":
        return cls(tuple(np.geomspace(t_min, t_max, count)), **kw)

    @classmethod
    def for_lattice(cls, sites: int, spacing: float = 1.0, count: int = 25, **kw) -> "Schedule":
        """Default window t_max = 0.6 * n * h."""
        return cls.linear(0.6 * sites * spacing, count, **kw)

    def with_probes(self, probes) -> "Schedule":
        return Schedule(self.checkpoints, self.tol, self.recurrence_guard, probes, self.min_plateau)

    def with_tol(self, tol: float) -> "Schedule":
        return Schedule(self.checkpoints, tol, self.recurrence_guard, self.probes, self.min_plateau)

    def as_dict(self) -> dict:
        return {
            "t_max": self.t_max,
            "checkpoints": list(self.checkpoints),
            "tol": self.tol,
            "recurrence_guard": self.recurrence_guard,
            "probe_count": 0 if self.probes is None else int(self.probes.shape[1]),
            "min_plateau": self.min_plateau,
        }


@dataclass
class LimitResult:
    value: np.ndarray
    checkpoints: list
    plateau: tuple | None
    recurrence_detected: bool
    converged: bool
    tol: float
    spread: float = 0.0
    metric: str = "operator"
    label: str = ""
    window: tuple | None = None
    extra: dict = field(default_factory=dict)

    @property
    def last_residual(self) -> float:
        return self.checkpoints[-1][1]

    def summary(self) -> dict:
        return {
            "label": self.label,
            "converged": bool(self.converged),
            "recurrence_detected": bool(self.recurrence_detected),
            "plateau": None if self.plateau is None else [float(x) for x in self.plateau],
            "window": None if self.window is None else [float(x) for x in self.window],
            "tol": float(self.tol),
            "spread": float(self.spread),
            "metric": self.metric,
            "min_residual": float(min(r for _, r in self.checkpoints[1:])) if len(self.checkpoints) > 1 else 0.0,
            "checkpoints": [[float(t), float(r)] for t, r in self.checkpoints],
        }


def hilbert_metric(probes: np.ndarray | None) -> Callable[[np.ndarray], float]:
    """Operator norm, or the largest image norm over probe columns."""
    if probes is None:
        return op_norm
    return lambda diff: float(np.linalg.norm(diff @ probes, axis=0).max())


def probe_operators(probes: np.ndarray) -> np.ndarray:
    """Stacked |p_a><p_b| for all probe pairs, as columns."""
    m = probes.shape[1]
    cols = [np.kron(probes[:, a], np.conj(probes[:, b])) for a in range(m) for b in range(m)]
    return np.array(cols).T


def superop_metric(probes: np.ndarray | None, dim: int) -> Callable[[np.ndarray], float]:
    """Largest trace norm of the image of a probe operator.

    Without probes the frame is the matrix units |j><k|, i.e. the columns
    of the superoperator matrix."""
    frame = np.eye(dim * dim, dtype=complex) if probes is None else probe_operators(probes)

    def metric(diff: np.ndarray) -> float:
        imgs = diff @ frame
        return max(trace_norm(imgs[:, j].reshape(dim, dim)) for j in range(imgs.shape[1]))

    return metric


def _runs(mask: Sequence[bool]) -> list[tuple[int, int]]:
    """Maximal runs [start, end] (inclusive) of True entries."""
    runs, start = [], None
    for i, m in enumerate(mask):
        if m and start is None:
            start = i
        if not m and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(mask) - 1))
    return runs


def plateau_limit(evaluate: Callable[[float], np.ndarray], schedule: Schedule,
                  metric: Callable[[np.ndarray], float], label: str = "",
                  metric_name: str = "operator") -> LimitResult:
    """Run the checkpoint schedule and assemble a LimitResult."""
    ts = schedule.checkpoints
    values = [evaluate(t) for t in ts]
    res = [0.0] + [metric(values[k] - values[k - 1]) for k in range(1, len(ts))]
    table = list(zip(ts, res))
    ok = [r <= schedule.tol for r in res[1:]]
    runs = [(a + 1, b + 1) for a, b in _runs(ok) if b - a + 1 >= schedule.min_plateau]
    last = len(ts) - 1
    final = [r for r in runs if r[1] == last]
    recurrence = bool(runs) and not final
    if final:
        run = final[0]
        converged = True
    elif runs and not schedule.recurrence_guard:
        run = runs[0]
        converged = True
    else:
        converged = False
        run = runs[0] if runs else _best_window(res, schedule.min_plateau)
    lo, hi = run[0] - 1, run[1]
    # average over the trailing min_plateau steps so that limits computed on
    # one schedule share their averaging window and compose consistently
    a = max(lo, hi - schedule.min_plateau)
    mean = sum(values[a:hi + 1]) / (hi + 1 - a)
    spread = float(np.sqrt(np.mean([metric(v - mean) ** 2 for v in values[lo:hi + 1]])))
    plateau = (ts[lo], ts[hi]) if converged or runs else None
    return LimitResult(mean, table, plateau, recurrence, converged, schedule.tol, spread,
                       metric_name, label, window=(ts[a], ts[hi]))


def _best_window(res: list[float], width: int) -> tuple[int, int]:
    """Residual indices [a, b] of the width-long run with the smallest maximum."""
    width = min(width, len(res) - 1)
    best, arg = np.inf, (1, width)
    for a in range(1, len(res) - width + 1):
        worst = max(res[a:a + width])
        if worst < best:
            best, arg = worst, (a, a + width - 1)
    return arg


def same_sign_exponentials(sign: str) -> tuple[int, int]:
    """Time multipliers (for the left and right factor) of the limit
    exp(-i s1 t A) exp(-i s2 t B) used for W^sign / Omega^sign as t -> +inf."""
    if sign == "plus":
        return 1, -1
    if sign == "minus":
        return -1, 1
    raise ValueError("sign must be 'plus' or 'minus'")
