"""Scenario runs: constants, Hilbert-space wave operators, Lindblad
completeness and capture sweeps, assembled into report dictionaries."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .capture import capture_amplitude_sweep
from .hilbert_scattering import four_wave_operators
from .limits import LimitResult, Schedule, hilbert_metric
from .lindblad import build_lindbladian, dissipative_hamiltonian
from .lindblad_scattering import completeness_report
from .operator_core import op_norm
from .report import REPORT_SCHEMA_ID, plain
from .scenario import Scenario, build_model, build_schedule
from .smoothness import estimate_c0, estimate_c_tilde0

EXIT_OK, EXIT_VERDICT, EXIT_NONCONVERGED = 0, 1, 2


@dataclass
class RunContext:
    scenario: Scenario
    model: object
    couplings: list
    hamiltonian: np.ndarray
    generator: np.ndarray
    schedule: Schedule
    superop_schedule: Schedule

    @classmethod
    def from_scenario(cls, sc: Scenario) -> "RunContext":
        model = build_model(sc)
        cs = list(model.couplings)
        return cls(sc, model, cs, dissipative_hamiltonian(model.h_v, cs), build_lindbladian(model.h_v, cs),
                   build_schedule(sc, model), build_schedule(sc, model, superop=True))


class ReportBuilder:
    """Collects verdicts, limits and tables for one command."""

    def __init__(self, command: str, scenario: Scenario | None):
        self.command = command
        self.scenario = scenario
        self.constants: dict = {}
        self.limits: dict = {}
        self.verdicts: dict = {}
        self.details: dict = {}
        self.timeseries: dict | None = None
        self.sweep: dict | None = None

    def verdict(self, key: str, passed: bool, measured=None, threshold=None, **extra) -> None:
        self.verdicts[key] = {"passed": bool(passed), "measured": plain(measured), "threshold": plain(threshold),
                              **plain(extra)}

    def add_limits(self, limits: dict) -> None:
        for key, lim in limits.items():
            self.limits[key] = lim.summary()

    @property
    def exit_code(self) -> int:
        if any(not lim["converged"] for lim in self.limits.values()):
            return EXIT_NONCONVERGED
        if any(not v["passed"] for v in self.verdicts.values()):
            return EXIT_VERDICT
        return EXIT_OK

    def build(self) -> dict:
        out = {
            "schema": REPORT_SCHEMA_ID,
            "command": self.command,
            "scenario": None if self.scenario is None else self.scenario.as_dict(),
            "status": {
                "exit_code": self.exit_code,
                "verdicts_passed": all(v["passed"] for v in self.verdicts.values()),
                "all_converged": all(lim["converged"] for lim in self.limits.values()),
            },
            "constants": self.constants,
            "limits": self.limits,
            "verdicts": self.verdicts,
            "details": self.details,
        }
        if self.timeseries is not None:
            out["timeseries"] = self.timeseries
        if self.sweep is not None:
            out["sweep"] = self.sweep
        return plain(out)


def residual_timeseries(limits: dict) -> dict:
    """Cauchy residuals of every limit against the shared checkpoint times."""
    keys = sorted(limits)
    if not keys:
        return {"columns": ["t"], "rows": []}
    times = [t for t, _ in limits[keys[0]]["checkpoints"]]
    rows = []
    for i, t in enumerate(times):
        rows.append([t] + [limits[k]["checkpoints"][i][1] for k in keys])
    return {"columns": ["t"] + keys, "rows": rows}


def smoothness_section(ctx: RunContext, rep: ReportBuilder, dt: float | None = None) -> tuple[float, float]:
    T = ctx.schedule.t_max
    c0 = estimate_c0(ctx.model.h0, ctx.couplings, T, dt)
    ct = estimate_c_tilde0(ctx.hamiltonian, ctx.couplings, T, dt)
    rep.constants["c0"] = c0.as_dict()
    rep.constants["c_tilde0"] = ct.as_dict()
    rep.verdict("c0 below 2 (existence)", c0.value < 2.0, c0.value, 2.0)
    rep.verdict("c0 below 2 - sqrt(2) (completeness)", c0.value < 2.0 - np.sqrt(2.0), c0.value, 2.0 - np.sqrt(2.0))
    rep.verdict("c_tilde0 below 1/sqrt(2) (uniform bound)", ct.value < 1.0 / np.sqrt(2.0), ct.value,
                1.0 / np.sqrt(2.0))
    return c0.value, ct.value


def wave_operator_section(ctx: RunContext, rep: ReportBuilder) -> dict[str, LimitResult]:
    tol = ctx.scenario.tolerances
    h, h0 = ctx.hamiltonian, ctx.model.h0
    waves = four_wave_operators(h, h0, ctx.schedule)
    rep.add_limits(waves)
    metric = hilbert_metric(ctx.schedule.probes)
    eye = np.eye(h.shape[0], dtype=complex)
    for a, b in (("W+(H,H0)", "W+(H0,H)"), ("W-(H,H0)", "W-(H0,H)")):
        r = metric(waves[a].value @ waves[b].value - eye)
        rep.verdict(f"inverse {a}{b}", r <= tol["inverse"], r, tol["inverse"])
    ops = {"H": h, "H0": h0}
    for key, (left, right) in {"W+(H,H0)": ("H", "H0"), "W-(H,H0)": ("H", "H0"),
                               "W+(H0,H)": ("H0", "H"), "W-(H0,H)": ("H0", "H")}.items():
        w = waves[key].value
        a, b = ops[left], ops[right]
        r = metric(a @ w - w @ b) / (1.0 + op_norm(a) * op_norm(w))
        rep.verdict(f"intertwining {key}", r <= tol["intertwining"], r, tol["intertwining"])
    for key in ("W+(H,H0)", "W-(H0,H)"):
        n = op_norm(waves[key].value)
        rep.verdict(f"contraction {key}", n <= 1.0 + 1e-8, n, 1.0)
    return waves


def lindblad_section(ctx: RunContext, rep: ReportBuilder, c0: float, ct: float, waves: dict | None = None) -> None:
    sc = ctx.scenario
    w_plus = None if waves is None else waves["W+(H,H0)"]
    cr = completeness_report(ctx.generator, ctx.model.h0, c0, ct, ctx.superop_schedule,
                             hamiltonian=ctx.hamiltonian, couplings=ctx.couplings or None, w_plus=w_plus,
                             seed=sc.seed, tol=sc.tolerances["inverse"])
    rep.add_limits(cr.limits)
    for key, entry in cr.entries.items():
        if "verdict" not in entry:
            continue
        if key.startswith("states_"):
            thr = 1e-8
        elif key == "uniform_bound":
            bound = entry.get("claimed_bound")
            thr = None if bound is None else 1.05 * bound
        elif key == "integrability":
            thr = None
        else:
            thr = sc.tolerances["inverse"]
        rep.verdict(f"lindblad {key}", entry["verdict"], entry["residual"], thr,
                    hypothesis={"constant": entry["measured_constant"], "bound": entry["claimed_threshold"]})
    rep.details["completeness"] = {k: v for k, v in cr.entries.items()}
    rep.details["similarity_certified"] = cr.similarity_certified


def capture_section(ctx: RunContext, rep: ReportBuilder) -> None:
    amps = ctx.scenario.model["amplitudes"]
    if amps is None:
        raise ValueError("capture needs model.amplitudes")
    if not ctx.couplings:
        raise ValueError("capture needs a coupling shape")
    out = capture_amplitude_sweep(ctx.model, amps, ctx.schedule.with_probes(None),
                               tol=ctx.scenario.tolerances["classification"])
    cols = ["amplitude", "c_V", "c1", "hypothesis_norm", "hypothesis_holds", "escape_mean", "escape_min",
            "converged", "min_residual"]
    rep.sweep = {"columns": cols, "rows": [[r[c] for c in cols] for r in out["rows"]]}
    rep.constants["c1"] = out["c1"]
    rep.details["capture_monotone_decreasing"] = out["monotone_decreasing"]
    for r in out["rows"]:
        rep.verdict(f"escape in [0,1] at amplitude {r['amplitude']:g}",
                    -1e-9 <= r["escape_min"] and r["escape_mean"] <= 1.0 + 1e-9, r["escape_mean"], 1.0)


def run_command(command: str, sc: Scenario, dt: float | None = None) -> dict:
    """Execute ``run``, ``smoothness``, ``wave-op`` or ``capture`` on a scenario."""
    ctx = RunContext.from_scenario(sc)
    rep = ReportBuilder(command, sc)
    rep.details["schedule"] = ctx.schedule.as_dict()
    rep.details["superop_tol"] = ctx.superop_schedule.tol
    if command == "smoothness":
        smoothness_section(ctx, rep, dt)
    elif command == "wave-op":
        wave_operator_section(ctx, rep)
    elif command == "capture":
        capture_section(ctx, rep)
    elif command == "run":
        c0, ct = smoothness_section(ctx, rep, dt)
        waves = wave_operator_section(ctx, rep)
        lindblad_section(ctx, rep, c0, ct, waves)
        if sc.model["amplitudes"] is not None and "sweep" in sc.outputs["kinds"]:
            capture_section(ctx, rep)
    else:
        raise ValueError(f"unknown command {command!r}")
    if rep.limits:
        rep.timeseries = residual_timeseries(rep.limits)
    return rep.build()
