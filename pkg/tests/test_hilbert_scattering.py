import numpy as np
import pytest
from hypothesis import given, strategies as st

from lindscat.fixtures import random_open_system
from lindscat.hilbert_scattering import (
    adjoint_wave_operator, closed_range_diagnostic, cook_integrand, energy_balance_residual,
    group_intertwining_residual, integral_representation, integral_representation_residual, intertwining_residual,
    scattering_operator, wave_operator,
)
from lindscat.limits import Schedule
from lindscat.lindblad import dissipative_hamiltonian
from lindscat.operator_core import op_exp, random_unit_vector

seeds = st.integers(0, 2**32 - 1)
WHICH = ("W+(H0,H)", "W-(H0,H)", "W+(H,H0)", "W-(H,H0)")


@given(seeds, st.sampled_from(WHICH), st.floats(0.1, 1.5))
def test_integral_representation_is_the_finite_time_product(seed, which, T):
    # with H = H0 - (i/2) C*C the time derivative of the product is the Cook integrand
    rng = np.random.default_rng(seed)
    h0, cs = random_open_system(rng, 3, 1, unit_norm=True)
    h = dissipative_hamiltonian(h0, cs)
    a, b, m, _ = cook_integrand(h0, h, cs, which)
    rep, _ = integral_representation(h0, h, cs, which, T, 1e-3)
    assert np.abs(rep - op_exp(a, m * T) @ op_exp(b, -m * T)).max() < 1e-5


def test_cook_integrand_rejects_unknown_label():
    with pytest.raises(ValueError):
        cook_integrand(np.eye(2), np.eye(2), [], "W0")


def test_diagonal_model_limits():
    w = np.array([0.0, 0.5, 1.0])
    c = np.array([0.0, 1.0, 2.0])
    h0 = np.diag(w).astype(complex)
    cs = [np.diag(c).astype(complex)]
    h = dissipative_hamiltonian(h0, cs)
    sch = Schedule.linear(60.0, 61, tol=1e-10)
    waves = {"W-(H0,H)": wave_operator(h0, h, "minus", schedule=sch),
             "W+(H,H0)": wave_operator(h, h0, "plus", schedule=sch)}
    for key in ("W-(H0,H)", "W+(H,H0)"):
        assert waves[key].converged
        assert np.allclose(waves[key].value, np.diag([1.0, 0.0, 0.0]), atol=1e-9)
    res = integral_representation_residual(h0, h, cs, waves["W-(H0,H)"].value, "W-(H0,H)", 60.0, 1e-2)
    assert res["residual"] < 1e-3 and res["quadrature_decayed"]
    assert intertwining_residual(waves["W-(H0,H)"].value, h0, h) < 1e-12
    assert group_intertwining_residual(waves["W-(H0,H)"].value, h0, h, (0.5, 1.0)) < 1e-12


@given(seeds, st.booleans())
def test_energy_balance(seed, adjoint):
    rng = np.random.default_rng(seed)
    h0, cs = random_open_system(rng, 4, 2, unit_norm=True)
    h = dissipative_hamiltonian(h0, cs)
    u = random_unit_vector(4, rng)
    assert energy_balance_residual(h, cs, u, 1.0, 1e-3, adjoint) < 1e-6


def test_free_scattering_is_identity():
    h0 = np.diag([0.0, 1.0, 3.0]).astype(complex)
    sch = Schedule.linear(5.0, 11, tol=1e-10)
    s = scattering_operator(h0, h0, sch)
    assert s.converged and np.allclose(s.value, np.eye(3))
    assert s.extra["composition_residual"] < 1e-12
    diag = closed_range_diagnostic(np.eye(3), h0, [0.0, 1.0])
    assert diag["consistent"] and diag["product"] == pytest.approx(1.0)


def test_adjoint_identities_on_diagonal_model():
    h0 = np.diag([0.0, 0.5]).astype(complex)
    # the identities hold checkpoint by checkpoint, so a short window suffices
    h = dissipative_hamiltonian(h0, [np.diag([0.0, 0.5]).astype(complex)])
    out = adjoint_wave_operator(h, h0, "minus", Schedule.linear(10.0, 11, tol=1e-2))
    assert out["residual_h0_hstar"] < 1e-10
    assert out["residual_hstar_h0"] < 1e-10


def test_wave_operator_requires_schedule_and_matching_shapes():
    with pytest.raises(ValueError):
        wave_operator(np.eye(2), np.eye(2), "plus")
    with pytest.raises(ValueError):
        wave_operator(np.eye(2), np.eye(3), "plus", schedule=Schedule.linear(1.0, 3))
