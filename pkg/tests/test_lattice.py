import numpy as np
import pytest
from hypothesis import given, strategies as st

from lindscat.lattice import (
    coupling_mixed, coupling_position, coupling_spin, discrete_laplacian, field_values, lattice_model,
    momentum_matrix, participation_ratio, rollnik_norm, spin_matrices, wave_packet, zeeman_hamiltonian,
)
from lindscat.operator_core import is_hermitian


@given(st.integers(2, 30), st.floats(0.1, 2.0))
def test_dirichlet_laplacian_spectrum(n, h):
    w = np.linalg.eigvalsh(discrete_laplacian(n, h))
    k = np.arange(1, n + 1)
    exact = np.sort(4.0 / h**2 * np.sin(k * np.pi / (2 * (n + 1))) ** 2)
    assert np.allclose(w, exact)


def test_periodic_laplacian_spectrum():
    n = 8
    w = np.linalg.eigvalsh(discrete_laplacian(n, 1.0, "periodic"))
    exact = np.sort(2 - 2 * np.cos(2 * np.pi * np.arange(n) / n))
    assert np.allclose(w, exact)


def test_laplacian_validation():
    with pytest.raises(ValueError):
        discrete_laplacian(1)
    with pytest.raises(ValueError):
        discrete_laplacian(4, 1.0, "open")


def test_momentum_is_hermitian():
    assert is_hermitian(momentum_matrix(7, 0.5, "periodic"))
    assert is_hermitian(momentum_matrix(7))


@given(st.integers(1, 5))
def test_spin_algebra(two_s):
    sx, sy, sz = spin_matrices(two_s)
    s = two_s / 2
    assert np.allclose(sx @ sy - sy @ sx, 1j * sz)
    assert np.allclose(sx @ sx + sy @ sy + sz @ sz, s * (s + 1) * np.eye(two_s + 1))


def test_model_free_hamiltonian_structure():
    m = lattice_model(5, 0.5, "dirichlet", 2, h_int=np.diag([0.0, 1.0]))
    assert m.dim == 10
    assert np.allclose(m.h0, np.kron(discrete_laplacian(5, 0.5), np.eye(2)) + np.kron(np.eye(5), np.diag([0, 1])))
    with pytest.raises(ValueError):
        lattice_model(5, 1.0, "dirichlet", 2, h_int=np.diag([-1.0, 0.0]))


def test_field_values_forms():
    m = lattice_model(5)
    assert np.allclose(field_values(2.0, m), 2.0)
    assert np.allclose(field_values({"preset": "box", "radius": 0.5, "amplitude": 3.0}, m), [0, 0, 3, 0, 0])
    assert np.allclose(field_values(lambda x: x, m), m.coordinates)
    with pytest.raises(ValueError):
        field_values([1.0, 2.0], m)
    with pytest.raises(ValueError):
        field_values({"preset": "nope"}, m)


def test_couplings():
    m = lattice_model(4, 1.0, "dirichlet", 2)
    sx, sy, sz = spin_matrices(1)
    c = coupling_spin(1.0, sz, m)
    assert np.allclose(c, np.kron(np.eye(4), sz))
    pos = coupling_position(1.0, lattice_model(4))
    assert np.allclose(np.diag(pos), lattice_model(4).coordinates)
    mixed = coupling_mixed(1.0, lambda p: np.ones_like(p), 1.0, 0.5, lattice_model(4))
    assert is_hermitian(mixed)
    with pytest.raises(ValueError):
        coupling_spin(1.0, np.eye(3), m)


def test_zeeman_is_hermitian_and_matches_sum():
    m = lattice_model(4, 1.0, "dirichlet", 2)
    s = spin_matrices(1)
    z = zeeman_hamiltonian((0.0, 0.0, 1.0), 0.5, s, m)
    assert is_hermitian(z)
    assert np.allclose(z, 0.5 * np.kron(np.eye(4), s[2]))


def test_rollnik_two_site_closed_form():
    m = lattice_model(2, 0.5)
    # two sites 0.5 apart: 2 * |d1 d2| / 0.25 * h^2
    assert rollnik_norm([1.0, 2.0], m) == pytest.approx(np.sqrt(2 * 2.0 / 0.25 * 0.25))


def test_wave_packet_normalized_and_localized():
    m = lattice_model(40, 1.0, "dirichlet", 2)
    p = wave_packet(m, 0.0, 1.0, 2.0, [0.0, 1.0])
    assert np.linalg.norm(p) == pytest.approx(1.0)
    assert np.allclose(p[0::2], 0)
    assert participation_ratio(p, m) < 40 / 2
