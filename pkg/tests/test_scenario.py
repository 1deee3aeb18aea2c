import numpy as np
import pytest
from hypothesis import given, strategies as st

from lindscat.scenario import (
    PRESETS, ScenarioError, build_model, build_schedule, parse_scenario, preset_scenario, scenario_from_dict,
)

VALID = """\
name = "demo"
seed = 3

[model]
sites = 10
internal_dim = 2
h_int = [0.0, 1.0]
coupling = { family = "spin", spin = "minus", field = { preset = "gaussian", width = 1.0, amplitude = 0.2 } }

[schedule]
t_max = 3.0
checkpoints = 13

[outputs]
kinds = ["report", "timeseries"]
"""


def test_valid_scenario_fills_defaults():
    sc = parse_scenario(VALID)
    assert sc.name == "demo" and sc.seed == 3
    assert sc.model["spacing"] == 1.0 and sc.model["boundary"] == "dirichlet"
    assert sc.schedule["tol"] == 1e-4 and sc.tolerances["inverse"] == 1e-4
    model = build_model(sc)
    assert model.dim == 20 and len(model.couplings) == 1
    sch = build_schedule(sc, model)
    assert sch.t_max == 3.0 and sch.probes.shape == (20, 4)
    assert build_schedule(sc, model, superop=True).tol == pytest.approx(2e-4)


def test_default_window_scales_with_lattice():
    sc = scenario_from_dict({"model": {"sites": 10, "spacing": 0.5}})
    assert sc.t_max == pytest.approx(3.0)


def test_unknown_key_reports_field_and_line():
    text = VALID.replace("checkpoints = 13", "checkpoints = 13\nwobble = 2")
    with pytest.raises(ScenarioError) as err:
        parse_scenario(text)
    assert err.value.field == "schedule.wobble"
    assert err.value.line == 13
    assert "line 13" in str(err.value)


def test_missing_sites_is_named():
    with pytest.raises(ScenarioError) as err:
        parse_scenario("[model]\nspacing = 1.0\n")
    assert err.value.field == "model.sites" and err.value.line == 1


@pytest.mark.parametrize("value", ["0.0", "-1e-3"])
def test_nonpositive_tolerance_rejected(value):
    with pytest.raises(ScenarioError) as err:
        parse_scenario(VALID + f"\n[tolerances]\ninverse = {value}\n")
    assert err.value.field == "tolerances.inverse"
    assert err.value.line == VALID.count("\n") + 3


def test_malformed_toml_reports_line():
    with pytest.raises(ScenarioError) as err:
        parse_scenario("[model]\nsites = = 3\n")
    assert err.value.line == 2


@pytest.mark.parametrize("patch, field", [
    ({"model": {"sites": 8, "boundary": "open"}}, "model.boundary"),
    ({"model": {"sites": 8, "coupling": {"family": "magic"}}}, "model.coupling"),
    ({"model": {"sites": 8, "coupling": {"family": "position"}}}, "model.coupling.field"),
    ({"model": {"sites": 8, "coupling": {"family": "spin", "field": 1.0}}}, "model.internal_dim"),
    ({"model": {"sites": 8, "amplitudes": []}}, "model.amplitudes"),
    ({"model": {"sites": 8}, "outputs": {"kinds": ["plot"]}}, "outputs.kinds"),
    ({"model": {"sites": 8}, "preset": "nope"}, "preset"),
    ({"model": {"sites": 8}, "extra": 1}, "extra"),
])
def test_invalid_fields_are_named(patch, field):
    with pytest.raises(ScenarioError) as err:
        scenario_from_dict(patch)
    assert err.value.field == field


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_build(name):
    sc = preset_scenario(name)
    model = build_model(sc)
    assert model.dim == sc.model["sites"] * sc.model["internal_dim"]


def test_file_overrides_preset():
    sc = parse_scenario('preset = "capture-well"\n[schedule]\nt_max = 2.0\n')
    assert sc.t_max == 2.0 and sc.model["amplitudes"] == PRESETS["capture-well"]["model"]["amplitudes"]


def test_zeeman_enters_the_potential():
    sc = preset_scenario("siegmann-demo")
    model = build_model(sc)
    assert model.v is not None and np.allclose(model.v, model.v.conj().T)


@given(st.floats(1e-12, 1e3))
def test_positive_overrides_accepted(tol):
    sc = preset_scenario("free").with_overrides(t_max=tol, tol=tol)
    assert sc.schedule["tol"] == tol and sc.t_max == tol


@given(st.floats(-1e3, 0.0))
def test_nonpositive_overrides_rejected(tol):
    with pytest.raises(ScenarioError):
        preset_scenario("free").with_overrides(tol=tol)
