import numpy as np
import pytest
import scipy.integrate as si
import scipy.linalg as sla
from hypothesis import given, strategies as st

from lindscat.fixtures import random_open_system
from lindscat.lindblad import dissipative_hamiltonian
from lindscat.operator_core import dagger
from lindscat.smoothness import (
    ZGrid, default_z_grid, estimate_c0, estimate_c_tilde0, estimate_c_V, gram_operator, max_propagator_norm,
    resolvent_integral_constant, resolvent_smoothness, supersmooth_constant,
)

seeds = st.integers(0, 2**32 - 1)


@given(st.lists(st.floats(-2, 2), min_size=1, max_size=4), st.floats(0.1, 3.0), st.floats(0.2, 4.0))
def test_commuting_model_closed_forms(w, c, T):
    d = len(w)
    h0 = np.diag(w).astype(complex)
    cs = [c * np.eye(d)]
    assert estimate_c0(h0, cs, T, None).value == pytest.approx(np.sqrt(2 * T) * c, rel=1e-8)
    h = dissipative_hamiltonian(h0, cs)
    est = estimate_c_tilde0(h, cs, T, None)
    assert est.value == pytest.approx(np.sqrt(1 - np.exp(-c * c * T)), rel=1e-8)
    assert est.details["routes_agree"]


def test_gram_exact_against_adaptive_quadrature(rng):
    h, cs = random_open_system(rng, 3, 2)
    hd = dissipative_hamiltonian(h, cs)
    q = sum(dagger(c) @ c for c in cs)
    T = 1.7

    def integrand(s):
        u = sla.expm(-1j * s * hd)
        return dagger(u) @ q @ u

    ref, _ = si.quad_vec(integrand, 0.0, T, epsabs=1e-12, epsrel=1e-12)
    assert np.abs(gram_operator(hd, cs, "half_line", T, None) - ref).max() < 1e-9
    ref_full, _ = si.quad_vec(lambda s: dagger(sla.expm(-1j * s * h)) @ q @ sla.expm(-1j * s * h), -T, T,
                              epsabs=1e-12, epsrel=1e-12)
    assert np.abs(gram_operator(h, cs, "full_line", T, None) - ref_full).max() < 1e-9


def test_trapezoid_gram_converges_quadratically(rng):
    h, cs = random_open_system(rng, 3, 1)
    exact = gram_operator(h, cs, "full_line", 2.0, None)
    e1 = np.abs(gram_operator(h, cs, "full_line", 2.0, 0.02) - exact).max()
    e2 = np.abs(gram_operator(h, cs, "full_line", 2.0, 0.01) - exact).max()
    assert e2 < e1 / 3.5


def test_gram_validation():
    with pytest.raises(ValueError):
        gram_operator(np.eye(2), [np.eye(2)], "quarter_line", 1.0, None)
    with pytest.raises(ValueError):
        gram_operator(np.eye(2), [np.eye(2)], "half_line", -1.0, None)
    with pytest.raises(ValueError):
        gram_operator(np.eye(2), [np.eye(2)], "half_line", 1.0, 0.0)


def test_empty_coupling_gives_zero_constants():
    h0 = np.diag([0.0, 1.0]).astype(complex)
    assert estimate_c0(h0, [], 1.0, None).value == 0.0
    assert estimate_c_tilde0(h0, [], 1.0, None).value == 0.0


@given(seeds, st.floats(0.2, 2.0), st.floats(0.1, 2.0))
def test_c0_nondecreasing_in_window(seed, t1, extra):
    rng = np.random.default_rng(seed)
    h, cs = random_open_system(rng, 3, 1)
    assert estimate_c0(h, cs, t1, None).value <= estimate_c0(h, cs, t1 + extra, None).value + 1e-10


def test_scalar_resolvent_constants():
    h0 = np.zeros((1, 1), dtype=complex)
    c = np.ones((1, 1), dtype=complex)
    eta = 0.3
    grid = ZGrid(np.array([0.0 + 1j * eta, 1.0 + 1j * eta]), (eta,), 1e-6)
    assert resolvent_smoothness(h0, c, grid).value == pytest.approx(2.0 / eta)
    assert supersmooth_constant(h0, c, grid).value == pytest.approx(1.0 / eta)
    assert resolvent_integral_constant(h0, c, eta).value == pytest.approx(np.sqrt(2 * np.pi / eta))


def test_resolvent_integral_against_numerical_lambda_integral(rng):
    h0 = np.diag([0.0, 0.7, 1.5]).astype(complex)
    c = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    eta = 0.4

    def form(lam):
        out = np.zeros((3, 3), dtype=complex)
        for s in (1, -1):
            r = np.linalg.inv(h0 - (lam + 1j * s * eta) * np.eye(3))
            m = c @ r
            out += dagger(m) @ m
        return out

    ref, _ = si.quad_vec(form, -np.inf, np.inf, epsabs=1e-10)
    lam = np.linalg.eigvalsh(0.5 * (ref + dagger(ref)))[-1]
    assert resolvent_integral_constant(h0, c, eta).value == pytest.approx(np.sqrt(lam), rel=1e-6)


def test_default_grid_includes_eigenvalues():
    h0 = np.diag([0.0, 2.0]).astype(complex)
    g = default_z_grid(h0)
    assert np.isclose(g.points.real, 2.0).any()
    assert g.eta_lines[0] == pytest.approx(0.1)


def test_c_V_with_commuting_projection(rng):
    h = np.diag([0.0, 1.0, 2.0]).astype(complex)
    c = [np.eye(3)]
    pi = np.diag([1.0, 1.0, 0.0]).astype(complex)
    assert estimate_c_V(h, c, pi, 2.0, None).value == pytest.approx(2.0)
    with pytest.raises(ValueError):
        estimate_c_V(h, c, np.ones((3, 3)) / 3, 2.0, None)
    assert estimate_c_V(h, c, np.zeros((3, 3)), 2.0, None).value == 0.0


def test_max_propagator_norm_dissipative_contracts(rng):
    h, cs = random_open_system(rng, 3, 1)
    hd = dissipative_hamiltonian(h, cs)
    assert max_propagator_norm(hd, [0.5, 1.0]) <= 1.0 + 1e-12
    assert max_propagator_norm(hd, [-1.0]) >= 1.0
