import numpy as np
import pytest

from lindscat.fixtures import free_fixture, qubit_damping
from lindscat.limits import Schedule
from lindscat.lindblad import Propagator, build_lindbladian, hamiltonian_generator
from lindscat.lindblad_scattering import (
    completeness_report, cumulative_jump_integral, direct_scattering_limit, elastic_inelastic_split,
    group_intertwining, omega, omega_minus, omega_plus, scattering_endomorphism, state_checks,
    transition_probability,
)
from lindscat.operator_core import random_density, trace_norm


def test_omega_of_identical_dynamics_is_identity():
    g = hamiltonian_generator(np.diag([0.0, 1.0, 2.0]))
    sch = Schedule.linear(3.0, 7, tol=1e-10)
    om_p, om_m = omega_plus(g, g, sch), omega_minus(g, g, sch)
    assert om_p.converged and np.allclose(om_p.value, np.eye(9))
    sigma = scattering_endomorphism(om_m, om_p)
    assert np.allclose(sigma, np.eye(9))
    assert np.allclose(direct_scattering_limit(g, g, sch).value, np.eye(9))
    assert group_intertwining(om_p, g, g, (0.5, 1.0)) < 1e-12


def test_omega_rejects_mismatched_dimensions():
    with pytest.raises(ValueError):
        omega(hamiltonian_generator(np.eye(2)), hamiltonian_generator(np.eye(3)), "plus",
              Schedule.linear(1.0, 3))


def test_transition_probability_with_identity():
    a = np.array([1.0, 0.0])
    b = np.array([1.0, 1.0]) / np.sqrt(2)
    assert transition_probability(a, b, np.eye(4)) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        transition_probability(np.array([1.0, 1.0]), b, np.eye(4))


def test_state_checks_on_identity(rng):
    out = state_checks(np.eye(9), [random_density(3, rng)])
    assert out["trace_residual"] < 1e-14 and out["min_eigenvalue"] > 0


def test_cumulative_jump_integral_closed_form():
    rate = 0.7
    h, cs = qubit_damping(rate=rate, mixing=0.0)
    rho = np.diag([0.0, 1.0]).astype(complex)
    ts, cum = cumulative_jump_integral(cs, build_lindbladian(h, cs), rho, 3.0, 1e-3)
    assert cum[-1] == pytest.approx(1 - np.exp(-rate * 3.0), abs=1e-6)
    assert np.all(np.diff(cum) >= 0)


def test_elastic_plus_inelastic_accounts_for_all_probability():
    rate = 1.5
    h, cs = qubit_damping(rate=rate, mixing=0.0)
    w_minus = np.diag([1.0, 0.0]).astype(complex)  # exact for the unmixed qubit
    rho = np.array([[0.4, 0.1], [0.1, 0.6]], dtype=complex)
    elastic, inelastic, info = elastic_inelastic_split(rho, w_minus, cs, build_lindbladian(h, cs), h, 12.0, 1e-3)
    assert np.trace(elastic).real == pytest.approx(0.4)
    assert inelastic[0, 0].real == pytest.approx(0.6 * (1 - np.exp(-rate * 12.0)), abs=1e-6)
    assert info["quadrature_decayed"]


def test_completeness_certified_for_free_model():
    fx = free_fixture(4)
    sch = Schedule.linear(2.0, 9, tol=1e-8)
    rep = completeness_report(fx.generator, fx.h0, 0.0, 0.0, sch, hamiltonian=fx.hamiltonian)
    assert rep.similarity_certified
    assert rep.entries["inverse_plus"]["residual"] < 1e-10
    assert "limits" in rep.as_dict()


def test_propagator_bound_for_contraction(rng):
    h, cs = qubit_damping()
    p = Propagator(generator=build_lindbladian(h, cs))
    rho = random_density(2, rng)
    assert trace_norm(p.evolve(rho, 3.0)) == pytest.approx(1.0)
