import numpy as np
import pytest

from lindscat.capture import (
    ac_projection_proxy, assumption_V0_report, classify_spectrum, compressed_trace_series, compression_superop,
    decay_check, default_packets, escape_probability, modified_omega_minus, pp_kernel_intersection,
)
from lindscat.fixtures import total_absorption
from lindscat.lattice import lattice_model
from lindscat.limits import Schedule
from lindscat.lindblad import Propagator
from lindscat.operator_core import random_density


def test_total_absorption_classification():
    fx = total_absorption()
    cls = classify_spectrum(fx.hamiltonian, fx.h_v, fx.couplings, 1e-9, h0=fx.h0, sites=4)
    assert cls.decaying.rank == 4
    assert cls.bound.rank == 4
    assert decay_check(fx.hamiltonian, cls.decaying, 5.0) < 1e-8
    angles = cls.identity_angles()
    assert angles["pp_kernel"]["max_angle"] < 1e-8


def test_classification_rejects_wrong_hamiltonian():
    fx = total_absorption()
    with pytest.raises(ValueError):
        classify_spectrum(fx.h0, fx.h_v, fx.couplings)


def test_compression_superop_is_idempotent():
    pi = np.diag([1.0, 0.0, 1.0]).astype(complex)
    s = compression_superop(pi)
    assert np.allclose(s @ s, s)


def test_escape_probability_checks_state(rng):
    rho = random_density(2, rng)
    assert escape_probability(np.eye(4), rho) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        escape_probability(np.eye(4), 2 * rho)
    with pytest.raises(ValueError):
        escape_probability(np.eye(4), np.diag([1.5, -0.5]))


def test_modified_omega_trace_equals_compressed_trace(rng):
    fx = total_absorption(sites=3)
    cls = classify_spectrum(fx.hamiltonian, fx.h_v, fx.couplings, 1e-9, h0=fx.h0, sites=3)
    sch = Schedule.linear(4.0, 9, tol=1e-3)
    om = modified_omega_minus(Propagator(hamiltonian=fx.h0), fx.generator, cls.pi, sch)
    rho = random_density(6, rng)
    series = compressed_trace_series(fx.generator, cls.pi, rho, [4.0])
    p0 = Propagator(hamiltonian=fx.h0)
    last = p0(-4.0) @ compression_superop(cls.pi) @ Propagator(generator=fx.generator)(4.0)
    assert escape_probability(last, rho) == pytest.approx(series[0])
    assert 0.0 <= escape_probability(om, rho) <= 1.0 + 1e-12


def test_packets_and_proxies():
    m = lattice_model(12, 1.0, "dirichlet", 2)
    assert len(default_packets(m)) == 4
    proxy = ac_projection_proxy(m.h0, m.h0, 12)
    assert proxy["out_of_band"] == [] and np.allclose(proxy["pi_ac"], np.eye(24))
    rep = assumption_V0_report(m.h0, None, m)
    assert rep["out_of_band_count"] == 0


def test_pp_kernel_intersection_finds_decoupled_eigenvectors():
    h_v = np.diag([0.0, 1.0, 2.0]).astype(complex)
    c = np.diag([0.0, 1.0, 0.0]).astype(complex)
    assert pp_kernel_intersection(h_v, [c]).rank == 2
