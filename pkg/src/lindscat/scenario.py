"""Scenario files: TOML with [model], [schedule], [tolerances] and [outputs]
sections, named presets, and expansion into lattice models.

A file may set ``preset = "<name>"`` at top level; the preset supplies
every section and explicit keys in the file override it key by key.
"""
from __future__ import annotations

import copy
import re
import sys
from dataclasses import dataclass, field

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .capture import default_packets
from .fixtures import spin_lowering
from .lattice import (
    BOUNDARIES, FIELD_PRESETS, LatticeModel, coupling_mixed, coupling_position, coupling_spin,
    field_values, lattice_model, spin_matrices, zeeman_hamiltonian,
)
from .limits import Schedule


class ScenarioError(ValueError):
    """Invalid scenario; ``field`` is the dotted key and ``line`` the
    1-based line in the source text when it can be located."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if field:
            where.append(f"field '{field}'")
        if line:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


MODEL_DEFAULTS = {
    "sites": None,
    "spacing": 1.0,
    "boundary": "dirichlet",
    "internal_dim": 1,
    "h_int": None,
    "potential": None,
    "coupling": {"family": "none"},
    "zeeman": None,
    "amplitudes": None,
}
SCHEDULE_DEFAULTS = {
    "t_max": None,
    "checkpoints": 25,
    "tol": 1e-4,
    "min_plateau": 3,
    "recurrence_guard": True,
    "probes": "packets",
    "packet_width": 1.4,
    "packet_offset": 0.0,
}
TOLERANCE_DEFAULTS = {
    "inverse": 1e-4,
    "intertwining": 1e-4,
    "states": 1e-8,
    "superop_factor": 2.0,
    "classification": 1e-9,
}
OUTPUT_DEFAULTS = {"kinds": ["report"]}
TOP_LEVEL = {"name", "seed", "preset", "model", "schedule", "tolerances", "outputs"}
OUTPUT_KINDS = ("report", "timeseries", "sweep")
COUPLING_FAMILIES = ("none", "position", "spin", "mixed")
SPIN_COMPONENTS = ("x", "y", "z", "minus", "plus")

PRESETS: dict[str, dict] = {
    "free": {
        "name": "free",
        "model": {"sites": 8, "coupling": {"family": "none"}},
        "schedule": {"t_max": 2.0, "checkpoints": 9, "tol": 1e-8, "probes": "none"},
    },
    "position-decoherence": {
        "name": "position-decoherence",
        "model": {"sites": 12, "coupling": {"family": "position",
                                            "field": {"preset": "gaussian", "width": 0.6, "amplitude": 0.3}}},
        "schedule": {"t_max": 3.5, "checkpoints": 29, "tol": 1e-4},
    },
    "capture-well": {
        "name": "capture-well",
        "model": {"sites": 13, "internal_dim": 2, "h_int": [0.0, 0.5],
                  "potential": {"preset": "box", "radius": 0.5, "amplitude": -2.0},
                  "coupling": {"family": "spin", "spin": "minus",
                               "field": {"preset": "gaussian", "width": 0.5, "amplitude": 1.0}},
                  "amplitudes": [0.0, 0.5, 1.0, 2.0, 4.0]},
        "schedule": {"t_max": 4.0, "checkpoints": 21, "tol": 2e-4},
        "outputs": {"kinds": ["report", "sweep"]},
    },
    # spin-1/2 particle, H_int = diag(0, 1/2), Zeeman field B = (0, 0, b(x))
    # with b a Gaussian of width 0.5 and height 0.1 at beta = 1/2, and
    # C = g(X) (x) S_x with g a Gaussian of width 0.6 and height 0.3.  The
    # Zeeman term is attractive in one spin channel; the shallow bound state
    # it carries keeps intertwining residuals near 1.4e-4, hence the looser
    # residual tolerances.
    "siegmann-demo": {
        "name": "siegmann-demo",
        "model": {"sites": 12, "internal_dim": 2, "h_int": [0.0, 0.5],
                  "coupling": {"family": "spin", "spin": "x",
                               "field": {"preset": "gaussian", "width": 0.6, "amplitude": 0.3}},
                  "zeeman": {"beta": 0.5,
                             "field": [0.0, 0.0, {"preset": "gaussian", "width": 0.5, "amplitude": 0.1}]}},
        "schedule": {"t_max": 3.5, "checkpoints": 36, "tol": 1e-4},
        "tolerances": {"inverse": 5e-4, "intertwining": 5e-4},
        "outputs": {"kinds": ["report", "timeseries"]},
    },
}


@dataclass
class Scenario:
    name: str
    model: dict
    schedule: dict
    tolerances: dict
    outputs: dict
    seed: int = 0
    preset: str | None = None
    source_lines: dict = field(default_factory=dict, repr=False, compare=False)

    def as_dict(self) -> dict:
        return {"name": self.name, "seed": self.seed, "preset": self.preset,
                "model": copy.deepcopy(self.model), "schedule": copy.deepcopy(self.schedule),
                "tolerances": dict(self.tolerances), "outputs": copy.deepcopy(self.outputs)}

    @property
    def t_max(self) -> float:
        t = self.schedule["t_max"]
        return 0.6 * self.model["sites"] * self.model["spacing"] if t is None else float(t)

    def with_overrides(self, t_max: float | None = None, tol: float | None = None,
                       seed: int | None = None) -> "Scenario":
        out = copy.deepcopy(self)
        if t_max is not None:
            _positive(t_max, "schedule.t_max")
            out.schedule["t_max"] = float(t_max)
        if tol is not None:
            _positive(tol, "schedule.tol")
            out.schedule["tol"] = float(tol)
        if seed is not None:
            out.seed = int(seed)
        return out


def _positive(value, name: str, line: int | None = None):
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not value > 0:
        raise ScenarioError(f"must be a positive number, got {value!r}", name, line)


def _line_index(text: str) -> dict:
    """Map 'section.key' (or 'key' at top level) to its 1-based line."""
    out, section = {}, ""
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        head = re.match(r"^\[([A-Za-z0-9_.\-]+)\]", line)
        if head:
            section = head.group(1)
            out.setdefault(section, i)
            continue
        m = re.match(r"^([A-Za-z0-9_\-]+)\s*=", line)
        if m:
            key = f"{section}.{m.group(1)}" if section else m.group(1)
            out.setdefault(key, i)
    return out


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        out[k] = copy.deepcopy(v)
    return out


def _validate_field(spec, name: str, line, allow_list: bool = True):
    if isinstance(spec, dict):
        params = dict(spec)
        preset = params.pop("preset", None)
        if preset not in FIELD_PRESETS:
            raise ScenarioError(f"unknown field preset {preset!r}", name, line)
        for k, v in params.items():
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ScenarioError(f"field parameter {k!r} must be a number", name, line)
        return
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return
    if allow_list and isinstance(spec, list) and all(isinstance(v, (int, float)) for v in spec):
        return
    raise ScenarioError("field must be a preset table, a number or a per-site list", name, line)


def _validate(sc: Scenario) -> None:
    lines = sc.source_lines
    m = sc.model
    loc = lambda key: lines.get(key) or lines.get(key.split(".")[0])  # noqa: E731
    if m["sites"] is None:
        raise ScenarioError("missing required field", "model.sites", loc("model"))
    if not isinstance(m["sites"], int) or isinstance(m["sites"], bool) or m["sites"] < 2:
        raise ScenarioError("must be an integer >= 2", "model.sites", loc("model.sites"))
    _positive(m["spacing"], "model.spacing", loc("model.spacing"))
    if m["boundary"] not in BOUNDARIES:
        raise ScenarioError(f"must be one of {BOUNDARIES}", "model.boundary", loc("model.boundary"))
    if not isinstance(m["internal_dim"], int) or m["internal_dim"] < 1:
        raise ScenarioError("must be a positive integer", "model.internal_dim", loc("model.internal_dim"))
    if m["h_int"] is not None:
        hi = m["h_int"]
        if not isinstance(hi, list) or len(hi) != m["internal_dim"] or any(
                not isinstance(v, (int, float)) or v < 0 for v in hi):
            raise ScenarioError("must list internal_dim nonnegative energies", "model.h_int", loc("model.h_int"))
    if m["potential"] is not None:
        _validate_field(m["potential"], "model.potential", loc("model.potential"))
    cp = m["coupling"]
    if not isinstance(cp, dict) or cp.get("family") not in COUPLING_FAMILIES:
        raise ScenarioError(f"coupling.family must be one of {COUPLING_FAMILIES}", "model.coupling",
                            loc("model.coupling"))
    allowed = {"none": {"family"}, "position": {"family", "field"},
               "spin": {"family", "field", "spin"}, "mixed": {"family", "field", "alpha", "beta", "momentum_width"}}
    extra = set(cp) - allowed[cp["family"]]
    if extra:
        raise ScenarioError(f"unknown key {sorted(extra)[0]!r}", f"model.coupling.{sorted(extra)[0]}",
                            loc("model.coupling"))
    if cp["family"] != "none":
        if "field" not in cp:
            raise ScenarioError("missing required field", "model.coupling.field", loc("model.coupling"))
        _validate_field(cp["field"], "model.coupling.field", loc("model.coupling"))
    if cp["family"] == "spin":
        if m["internal_dim"] < 2:
            raise ScenarioError("spin coupling needs internal_dim >= 2", "model.internal_dim", loc("model.internal_dim"))
        if cp.get("spin", "minus") not in SPIN_COMPONENTS:
            raise ScenarioError(f"must be one of {SPIN_COMPONENTS}", "model.coupling.spin", loc("model.coupling"))
    if cp["family"] == "mixed":
        if m["sites"] < 3:
            raise ScenarioError("mixed coupling needs sites >= 3", "model.sites", loc("model.sites"))
        if "momentum_width" in cp:
            _positive(cp["momentum_width"], "model.coupling.momentum_width", loc("model.coupling"))
    z = m["zeeman"]
    if z is not None:
        if not isinstance(z, dict) or set(z) - {"beta", "field"} or "field" not in z:
            raise ScenarioError("zeeman needs exactly 'beta' and 'field'", "model.zeeman", loc("model.zeeman"))
        if m["internal_dim"] < 2:
            raise ScenarioError("zeeman term needs internal_dim >= 2", "model.internal_dim", loc("model.internal_dim"))
        if not isinstance(z["field"], list) or len(z["field"]) != 3:
            raise ScenarioError("zeeman field must be a triple", "model.zeeman.field", loc("model.zeeman"))
        for j, f in enumerate(z["field"]):
            _validate_field(f, f"model.zeeman.field[{j}]", loc("model.zeeman"), allow_list=True)
    if m["amplitudes"] is not None:
        amps = m["amplitudes"]
        if not isinstance(amps, list) or not amps or any(
                not isinstance(a, (int, float)) or a < 0 for a in amps):
            raise ScenarioError("must be a nonempty list of nonnegative numbers", "model.amplitudes",
                                loc("model.amplitudes"))

    s = sc.schedule
    if s["t_max"] is not None:
        _positive(s["t_max"], "schedule.t_max", loc("schedule.t_max"))
    if not isinstance(s["checkpoints"], int) or s["checkpoints"] < 2:
        raise ScenarioError("must be an integer >= 2", "schedule.checkpoints", loc("schedule.checkpoints"))
    _positive(s["tol"], "schedule.tol", loc("schedule.tol"))
    if not isinstance(s["min_plateau"], int) or s["min_plateau"] < 1:
        raise ScenarioError("must be a positive integer", "schedule.min_plateau", loc("schedule.min_plateau"))
    if s["probes"] not in ("packets", "none"):
        raise ScenarioError("must be 'packets' or 'none'", "schedule.probes", loc("schedule.probes"))
    _positive(s["packet_width"], "schedule.packet_width", loc("schedule.packet_width"))

    for k, v in sc.tolerances.items():
        _positive(v, f"tolerances.{k}", loc(f"tolerances.{k}"))
    kinds = sc.outputs["kinds"]
    if not isinstance(kinds, list) or any(k not in OUTPUT_KINDS for k in kinds):
        raise ScenarioError(f"entries must be among {OUTPUT_KINDS}", "outputs.kinds", loc("outputs.kinds"))


def _section(raw: dict, name: str, defaults: dict, preset: dict, lines: dict) -> dict:
    given = raw.get(name, {})
    if not isinstance(given, dict):
        raise ScenarioError("must be a table", name, lines.get(name))
    for key in given:
        if key not in defaults:
            raise ScenarioError(f"unknown key {key!r}", f"{name}.{key}", lines.get(f"{name}.{key}"))
    return _merge(_merge(defaults, preset.get(name, {})), given)


def scenario_from_dict(raw: dict, lines: dict | None = None) -> Scenario:
    lines = {} if lines is None else lines
    for key in raw:
        if key not in TOP_LEVEL:
            raise ScenarioError(f"unknown key {key!r}", key, lines.get(key))
    preset_name = raw.get("preset")
    if preset_name is not None and preset_name not in PRESETS:
        raise ScenarioError(f"unknown preset {preset_name!r}", "preset", lines.get("preset"))
    preset = PRESETS.get(preset_name, {})
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ScenarioError("must be a nonnegative integer", "seed", lines.get("seed"))
    sc = Scenario(
        name=str(raw.get("name", preset.get("name", "scenario"))),
        model=_section(raw, "model", MODEL_DEFAULTS, preset, lines),
        schedule=_section(raw, "schedule", SCHEDULE_DEFAULTS, preset, lines),
        tolerances=_section(raw, "tolerances", TOLERANCE_DEFAULTS, preset, lines),
        outputs=_section(raw, "outputs", OUTPUT_DEFAULTS, preset, lines),
        seed=seed,
        preset=preset_name,
        source_lines=lines,
    )
    _validate(sc)
    return sc


def parse_scenario(text: str) -> Scenario:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ScenarioError(f"malformed scenario: {exc}", None, int(m.group(1)) if m else None) from exc
    return scenario_from_dict(raw, _line_index(text))


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def preset_scenario(name: str) -> Scenario:
    if name not in PRESETS:
        raise ScenarioError(f"unknown preset {name!r}", "preset")
    return scenario_from_dict({"preset": name})


# -- expansion ----------------------------------------------------------------

def _spin_operator(which: str, internal_dim: int) -> np.ndarray:
    sx, sy, sz = spin_matrices(internal_dim - 1)
    table = {"x": sx, "y": sy, "z": sz, "minus": spin_lowering(internal_dim), "plus": sx + 1j * sy}
    return table[which]



def build_model(sc: Scenario, amplitude: float | None = None) -> LatticeModel:
    """Lattice model with its static potential (including any Zeeman term)
    and the coupling operator scaled by ``amplitude`` when given."""
    m = sc.model
    h_int = None if m["h_int"] is None else np.diag(m["h_int"])
    model = lattice_model(m["sites"], m["spacing"], m["boundary"], m["internal_dim"], h_int)
    v = np.zeros((model.dim, model.dim), dtype=complex)
    if m["potential"] is not None:
        v += model.lift(np.diag(field_values(m["potential"], model)).astype(complex))
    if m["zeeman"] is not None:
        sx, sy, sz = spin_matrices(m["internal_dim"] - 1)
        v += zeeman_hamiltonian(m["zeeman"]["field"], m["zeeman"]["beta"], (sx, sy, sz), model)
    if np.any(v):
        model = model.with_potential(v)
    cp = m["coupling"]
    fam = cp["family"]
    if fam == "none":
        return model
    if fam == "position":
        c = coupling_position(cp["field"], model)
    elif fam == "spin":
        c = coupling_spin(cp["field"], _spin_operator(cp.get("spin", "minus"), m["internal_dim"]), model)
    else:
        width = cp.get("momentum_width", 1.0)
        c = coupling_mixed(cp["field"], lambda p: np.exp(-(p**2) / (2.0 * width**2)),
                           cp.get("alpha", 1.0), cp.get("beta", 0.0), model)
    if amplitude is not None:
        c = amplitude * c
    return model.with_couplings([c])


def build_schedule(sc: Scenario, model: LatticeModel, superop: bool = False) -> Schedule:
    s = sc.schedule
    tol = s["tol"] * (sc.tolerances["superop_factor"] if superop else 1.0)
    probes = None
    if s["probes"] == "packets":
        probes = np.array(default_packets(model, width=s["packet_width"], offset=s["packet_offset"])).T
    return Schedule.linear(sc.t_max, s["checkpoints"], tol=tol, recurrence_guard=s["recurrence_guard"],
                           probes=probes, min_plateau=s["min_plateau"])
