"""Finite lattice models: Laplacians, multiplication operators, spins and
the coupling families used by the scattering pipelines."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .operator_core import dagger, is_hermitian, min_eig_hermitian

BOUNDARIES = ("dirichlet", "periodic")


def discrete_laplacian(n: int, h: float = 1.0, boundary: str = "dirichlet") -> np.ndarray:
    """Matrix of -Delta: (2u_k - u_{k-1} - u_{k+1}) / h^2."""
    if n < 2 or h <= 0:
        raise ValueError("need n >= 2 and h > 0")
    if boundary not in BOUNDARIES:
        raise ValueError(f"unknown boundary {boundary!r}")
    lap = 2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
    if boundary == "periodic":
        lap[0, -1] -= 1.0
        lap[-1, 0] -= 1.0
    return lap.astype(complex) / h**2


def site_coordinates(n: int, h: float = 1.0) -> np.ndarray:
    return (np.arange(n) - (n - 1) / 2.0) * h


def momentum_matrix(n: int, h: float = 1.0, boundary: str = "dirichlet") -> np.ndarray:
    """Central difference -i(u_{k+1} - u_{k-1})/(2h) on the bare lattice."""
    if n < 3:
        raise ValueError("momentum operator needs n >= 3")
    d = np.eye(n, k=1) - np.eye(n, k=-1)
    if boundary == "periodic":
        d[-1, 0] = 1.0
        d[0, -1] = -1.0
    return -1j * d / (2.0 * h)


@dataclass(frozen=True)
class LatticeModel:
    """Lattice geometry plus internal space, free Hamiltonian, potential and
    coupling operators.  All operators live on C^sites (x) C^internal_dim."""

    sites: int
    spacing: float
    boundary: str
    internal_dim: int
    h0: np.ndarray
    h_int: np.ndarray
    v: np.ndarray | None = None
    couplings: tuple = field(default_factory=tuple)

    def __post_init__(self):
        n = self.sites * self.internal_dim
        for name, op in (("h0", self.h0), ("v", self.v)):
            if op is None:
                continue
            if op.shape != (n, n):
                raise ValueError(f"{name} has shape {op.shape}, expected {(n, n)}")
            if not is_hermitian(op, 1e-10):
                raise ValueError(f"{name} is not Hermitian")
        for j, c in enumerate(self.couplings):
            if np.shape(c) != (n, n):
                raise ValueError(f"coupling {j} has shape {np.shape(c)}, expected {(n, n)}")
        if min_eig_hermitian(self.h_int) < -1e-10:
            raise ValueError("internal Hamiltonian must be positive semidefinite")

    @property
    def dim(self) -> int:
        return self.sites * self.internal_dim

    @property
    def coordinates(self) -> np.ndarray:
        return site_coordinates(self.sites, self.spacing)

    @property
    def h_v(self) -> np.ndarray:
        return self.h0 if self.v is None else self.h0 + self.v

    def with_potential(self, v) -> "LatticeModel":
        return replace(self, v=None if v is None else np.asarray(v, dtype=complex))

    def with_couplings(self, cs: Sequence[np.ndarray]) -> "LatticeModel":
        return replace(self, couplings=tuple(np.asarray(c, dtype=complex) for c in cs))

    def lift(self, lattice_op: np.ndarray) -> np.ndarray:
        """Lattice operator (x) identity on the internal space."""
        return np.kron(lattice_op, np.eye(self.internal_dim))


def lattice_model(sites: int, spacing: float = 1.0, boundary: str = "dirichlet",
                  internal_dim: int = 1, h_int=None) -> LatticeModel:
    """Free model with H0 = -Delta (x) 1 + 1 (x) H_int."""
    h_int = np.zeros((internal_dim, internal_dim)) if h_int is None else np.asarray(h_int)
    h_int = np.asarray(h_int, dtype=complex)
    if h_int.shape != (internal_dim, internal_dim):
        raise ValueError("h_int does not match internal_dim")
    lap = discrete_laplacian(sites, spacing, boundary)
    h0 = np.kron(lap, np.eye(internal_dim)) + np.kron(np.eye(sites), h_int)
    return LatticeModel(sites, spacing, boundary, internal_dim, h0, h_int)


# -- scalar fields ---------------------------------------------------------

def gaussian(x: np.ndarray, width: float, amplitude: float = 1.0, center: float = 0.0) -> np.ndarray:
    return amplitude * np.exp(-((x - center) ** 2) / (2.0 * width**2))


def box(x: np.ndarray, radius: float, amplitude: float = 1.0, center: float = 0.0) -> np.ndarray:
    return np.where(np.abs(x - center) <= radius, amplitude, 0.0)


def coulomb_cut(x: np.ndarray, radius: float, amplitude: float = 1.0) -> np.ndarray:
    """amplitude / max(|x|, radius)."""
    return amplitude / np.maximum(np.abs(x), radius)


def bracket(x: np.ndarray, power: float = 1.0) -> np.ndarray:
    """Japanese bracket <x>^power = (1 + x^2)^(power/2)."""
    return (1.0 + x**2) ** (power / 2.0)


FIELD_PRESETS: dict[str, Callable[..., np.ndarray]] = {
    "gaussian": gaussian,
    "box": box,
    "coulomb_cut": coulomb_cut,
}


def field_values(f, model: LatticeModel) -> np.ndarray:
    """Evaluate a field given as a callable of the coordinates, a per-site
    list, a scalar, or a preset mapping ``{"preset": name, **params}``."""
    x = model.coordinates
    if callable(f):
        vals = np.asarray(f(x))
    elif isinstance(f, dict):
        params = dict(f)
        name = params.pop("preset")
        if name not in FIELD_PRESETS:
            raise ValueError(f"unknown field preset {name!r}")
        vals = FIELD_PRESETS[name](x, **params)
    else:
        vals = np.asarray(f)
        if vals.ndim == 0:
            vals = np.full(model.sites, vals.item())
    if vals.shape != (model.sites,):
        raise ValueError(f"field has {vals.shape} values, lattice has {model.sites} sites")
    return vals


# -- operators built on a model -------------------------------------------

def position_multiplier(f, model: LatticeModel) -> np.ndarray:
    return model.lift(np.diag(field_values(f, model)).astype(complex))


def position_operator(model: LatticeModel) -> np.ndarray:
    return position_multiplier(model.coordinates, model)


def momentum_operator(model: LatticeModel) -> np.ndarray:
    return model.lift(momentum_matrix(model.sites, model.spacing, model.boundary))


def momentum_function(f: Callable[[np.ndarray], np.ndarray], model: LatticeModel) -> np.ndarray:
    """f(P) through the spectral decomposition of the lattice momentum."""
    p = momentum_matrix(model.sites, model.spacing, model.boundary)
    w, u = np.linalg.eigh(p)
    return model.lift((u * f(w)) @ dagger(u))


def spin_matrices(two_s: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sx, Sy, Sz in the basis m = s, s-1, ..., -s."""
    if two_s < 1:
        raise ValueError("two_s must be >= 1")
    s = two_s / 2.0
    m = s - np.arange(two_s + 1)
    # <m+1| S+ |m> = sqrt(s(s+1) - m(m+1))
    raise_amp = np.sqrt(s * (s + 1) - m[1:] * (m[1:] + 1))
    s_plus = np.diag(raise_amp, k=1).astype(complex)
    sx = 0.5 * (s_plus + dagger(s_plus))
    sy = -0.5j * (s_plus - dagger(s_plus))
    sz = np.diag(m).astype(complex)
    return sx, sy, sz


def coupling_position(g, model: LatticeModel) -> np.ndarray:
    """C = g(X) X."""
    return model.lift(np.diag(field_values(g, model) * model.coordinates).astype(complex))


def coupling_spin(g, s, model: LatticeModel) -> np.ndarray:
    """C = g(X) (x) S; g may be a single field or a triple paired with a
    triple of spin matrices."""
    if isinstance(s, (tuple, list)):
        if len(g) != len(s):
            raise ValueError("field triple and spin triple differ in length")
        return sum(coupling_spin(gj, sj, model) for gj, sj in zip(g, s))
    s = np.asarray(s, dtype=complex)
    if s.shape != (model.internal_dim, model.internal_dim):
        raise ValueError(f"spin operator shape {s.shape} does not match internal_dim")
    return np.kron(np.diag(field_values(g, model)).astype(complex), s)


def coupling_mixed(g, f: Callable[[np.ndarray], np.ndarray], alpha: complex, beta: complex,
                   model: LatticeModel) -> np.ndarray:
    """C = g(X)(alpha X + beta P) f(P) + h.c."""
    gx = position_multiplier(g, model)
    k = gx @ (alpha * position_operator(model) + beta * momentum_operator(model)) @ momentum_function(f, model)
    return k + dagger(k)


def zeeman_hamiltonian(b, beta: float, s, model: LatticeModel) -> np.ndarray:
    """beta * sum_j diag(B_j) (x) S_j."""
    return beta * coupling_spin(tuple(b), tuple(s), model)


def rollnik_norm(d, model: LatticeModel) -> float:
    """Lattice Rollnik norm: sqrt of sum_{x != y} |D(x)||D(y)| / |x-y|^2 * h^2."""
    vals = np.abs(field_values(d, model))
    x = model.coordinates
    sep = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(sep, np.inf)
    total = np.sum(np.outer(vals, vals) / sep**2) * model.spacing**2
    return float(np.sqrt(total))


def corollary_thresholds(s_norm: float) -> tuple[float, float]:
    base = np.pi ** (1.0 / 3.0) / (3.0 * s_norm)
    return base * (2.0**19 / 3.0) ** (1.0 / 6.0), base * (2.0**19 / 3.0**13) ** (1.0 / 6.0)


def corollary_condition(g1, g2, g3, s_norm: float, model: LatticeModel) -> dict:
    """Evaluate the existence and completeness inequalities for the
    spin-coupling corollary with lattice L^inf and L^{3/2} norms."""
    total = sum(np.abs(field_values(g, model)) for g in (g1, g2, g3))
    sup_root = float(np.sqrt(total.max()))
    l32 = float((np.sum(total**1.5) * model.spacing) ** (2.0 / 3.0))
    lhs = sup_root * np.sqrt(l32)
    exist_thr, compl_thr = corollary_thresholds(s_norm)
    return {
        "lhs": lhs,
        "existence_threshold": exist_thr,
        "completeness_threshold": compl_thr,
        "existence": bool(lhs < exist_thr),
        "completeness": bool(lhs < compl_thr),
    }


def wave_packet(model: LatticeModel, center: float, momentum: float, width: float,
                internal=None) -> np.ndarray:
    """Normalized Gaussian packet exp(-(x-x0)^2/(4 w^2) + i k x) (x) internal."""
    x = model.coordinates
    psi = np.exp(-((x - center) ** 2) / (4.0 * width**2) + 1j * momentum * x)
    psi /= np.linalg.norm(psi)
    if internal is None:
        internal = np.zeros(model.internal_dim)
        internal[0] = 1.0
    internal = np.asarray(internal, dtype=complex)
    internal = internal / np.linalg.norm(internal)
    return np.kron(psi, internal)


def participation_ratio(vec: np.ndarray, model: LatticeModel) -> float:
    """Inverse participation ratio over sites (internal components summed)."""
    p = np.sum(np.abs(vec.reshape(model.sites, model.internal_dim)) ** 2, axis=1)
    p = p / p.sum()
    return float(1.0 / np.sum(p**2))
