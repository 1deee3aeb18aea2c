"""Named models shared by the acceptance suites, the scenario presets and
the tests."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import LatticeModel, coupling_spin, lattice_model, spin_matrices, wave_packet
from .lindblad import build_lindbladian, dissipative_hamiltonian, jump_superop
from .limits import Schedule
from .operator_core import dagger, op_norm, random_hermitian

# spin-lowering absorber on 16 sites; measured c0 = 0.466 at T = 4.5
TUNED_SITES = 16
TUNED_AMPLITUDE = 0.4
TUNED_WIDTH = 0.5
TUNED_T_MAX = 4.5
TUNED_CHECKPOINTS = 25
TUNED_PACKET_WIDTH = 1.4


@dataclass
class Fixture:
    model: LatticeModel
    couplings: list
    hamiltonian: np.ndarray
    generator: np.ndarray
    probes: np.ndarray | None = None

    @property
    def h0(self) -> np.ndarray:
        return self.model.h0

    @property
    def h_v(self) -> np.ndarray:
        return self.model.h_v


def _fixture(model: LatticeModel, couplings, probes=None) -> Fixture:
    cs = [np.asarray(c, dtype=complex) for c in couplings]
    return Fixture(model.with_couplings(cs), cs, dissipative_hamiltonian(model.h_v, cs),
                   build_lindbladian(model.h_v, cs), probes)


def spin_lowering(internal_dim: int = 2) -> np.ndarray:
    sx, sy, _ = spin_matrices(internal_dim - 1)
    return sx - 1j * sy


def tuned_absorber(amplitude: float = TUNED_AMPLITUDE, sites: int = TUNED_SITES) -> Fixture:
    """C = g(X) (x) S_- with a narrow Gaussian g; probes are two packets at
    the centre moving in opposite directions with spin up."""
    model = lattice_model(sites, 1.0, "dirichlet", 2)
    c = coupling_spin({"preset": "gaussian", "width": TUNED_WIDTH, "amplitude": amplitude},
                      spin_lowering(2), model)
    probes = np.array([wave_packet(model, 0.0, k, TUNED_PACKET_WIDTH, [1.0, 0.0])
                       for k in (-np.pi / 2, np.pi / 2)]).T
    return _fixture(model, [c], probes)


def tuned_schedule(probes, tol: float = 1e-4) -> Schedule:
    return Schedule.linear(TUNED_T_MAX, TUNED_CHECKPOINTS, tol=tol, probes=probes)


def capture_well(sites: int = 13, depth: float = 2.0, rate: float = 12.0) -> Fixture:
    """Single-site well of the given depth on both internal levels.  The
    jump operator removes level 0 at the well site and deposits the
    particle in the bound state of level 1, where it stays forever."""
    model = lattice_model(sites, 1.0, "dirichlet", 2)
    x = model.coordinates
    well = (np.abs(x) < 0.5 * model.spacing).astype(float)
    v = model.lift(np.diag(-depth * well).astype(complex))
    model = model.with_potential(v)
    lat = model.h_v[::2, ::2]
    _, vecs = np.linalg.eigh(lat)
    bound = vecs[:, 0]
    lower = np.array([[0.0, 0.0], [1.0, 0.0]])
    c = np.sqrt(rate) * np.kron(np.outer(bound, well), lower)
    probes = np.array([wave_packet(model, 0.0, k, TUNED_PACKET_WIDTH, e)
                       for k in (-np.pi / 2, np.pi / 2) for e in ([1.0, 0.0], [0.0, 1.0])]).T
    return _fixture(model, [c], probes)


def total_absorption(sites: int = 4, rate: float = 8.0) -> Fixture:
    """Every excited internal state decays: C = sqrt(rate) 1 (x) |0><1|
    with H_int = diag(0, 1)."""
    model = lattice_model(sites, 1.0, "dirichlet", 2, h_int=np.diag([0.0, 1.0]))
    lower = np.array([[0.0, 1.0], [0.0, 0.0]])
    c = np.sqrt(rate) * np.kron(np.eye(sites), lower)
    return _fixture(model, [c])


def free_fixture(sites: int = 6, internal_dim: int = 1) -> Fixture:
    return _fixture(lattice_model(sites, 1.0, "dirichlet", internal_dim), [])


def sign_corrupted_generator(h_sa, couplings) -> np.ndarray:
    """Generator with the dissipator sign flipped: H_sa + (i/2) C*C in the
    conjugation part and minus the jump term."""
    h_sa = np.asarray(h_sa, dtype=complex)
    d = h_sa.shape[0]
    h = 2.0 * h_sa - dissipative_hamiltonian(h_sa, couplings)
    eye = np.eye(d)
    return -1j * (np.kron(h, eye) - np.kron(eye, np.conj(h))) - jump_superop(couplings, d)


def random_open_system(rng: np.random.Generator, dim: int, n_couplings: int,
                       coupling_scale: float = 1.0, unit_norm: bool = False):
    """Random Hermitian H_sa and complex Gaussian couplings with entries of
    variance coupling_scale^2 / dim.  With ``unit_norm`` H_sa and sum C*C
    are rescaled to operator norm 1."""
    h = random_hermitian(dim, rng, 0.5)
    cs = [coupling_scale * (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
          / np.sqrt(2.0 * dim) for _ in range(n_couplings)]
    if unit_norm:
        h = h / op_norm(h)
        scale = np.sqrt(op_norm(sum(dagger(c) @ c for c in cs)))
        cs = [c / scale for c in cs]
    return h, cs


def qubit_damping(rate: float = 0.2, mixing: float = 0.5) -> tuple[np.ndarray, list]:
    """Two-level H_sa = diag(0, 1) + mixing * sigma_x and C = sqrt(rate) |0><1|."""
    h = np.array([[0.0, mixing], [mixing, 1.0]], dtype=complex)
    c = np.sqrt(rate) * np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    return h, [c]
