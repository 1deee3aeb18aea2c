"""Lindbladian generators, dissipative Hamiltonians, evolution and the
Dyson-Phillips expansion of the semigroup."""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .operator_core import (
    DEFAULT_GROWTH_CAP, GrowthCapError, apply_superop, as_operator, choi, dagger,
    min_eig_hermitian, op_exp, op_norm, random_density, random_hermitian, stack,
    superop_dim, trace_norm, unstack,
)


def _coupling_list(cs) -> list[np.ndarray]:
    if cs is None:
        return []
    if isinstance(cs, np.ndarray) and cs.ndim == 2:
        return [cs]
    return [np.asarray(c, dtype=complex) for c in cs]


def absorption_operator(cs, dim: int) -> np.ndarray:
    """sum_j C_j* C_j."""
    out = np.zeros((dim, dim), dtype=complex)
    for c in _coupling_list(cs):
        out += dagger(c) @ c
    return out


def dissipative_hamiltonian(hsa, cs) -> np.ndarray:
    """H = Hsa - (i/2) sum_j C_j* C_j."""
    hsa = as_operator(hsa, "Hsa")
    return hsa - 0.5j * absorption_operator(cs, hsa.shape[0])


def jump_superop(cs, dim: int) -> np.ndarray:
    """Matrix of rho -> sum_j C_j rho C_j*."""
    out = np.zeros((dim * dim, dim * dim), dtype=complex)
    for c in _coupling_list(cs):
        out += np.kron(c, np.conj(c))
    return out


def build_lindbladian(h0, cs) -> np.ndarray:
    """Generator G of t -> exp(-it L), i.e. stack(-i L rho) = G stack(rho) with
    L rho = [H0, rho] - (i/2){sum C*C, rho} + i sum C rho C*."""
    h0 = as_operator(h0, "H0")
    d = h0.shape[0]
    for c in _coupling_list(cs):
        if c.shape != h0.shape:
            raise ValueError(f"coupling shape {c.shape} does not match H0 {h0.shape}")
    h = dissipative_hamiltonian(h0, cs)
    eye = np.eye(d)
    return -1j * (np.kron(h, eye) - np.kron(eye, np.conj(h))) + jump_superop(cs, d)


def hamiltonian_generator(h) -> np.ndarray:
    """Generator of rho -> exp(-itH) rho exp(itH*) for any (possibly dissipative) H."""
    h = as_operator(h)
    eye = np.eye(h.shape[0])
    return -1j * (np.kron(h, eye) - np.kron(eye, np.conj(h)))


class Propagator:
    """exp(tG) with a small lock-guarded cache of recent times.

    If ``hamiltonian`` is given the generator is the conjugation
    rho -> exp(-itH) rho exp(itH*) and propagators are built from the
    Hilbert-space exponential, which is far cheaper than a d^2 exponential.
    """

    def __init__(self, generator=None, hamiltonian=None, cap: float = DEFAULT_GROWTH_CAP,
                 max_cached: int = 6):
        if (generator is None) == (hamiltonian is None):
            raise ValueError("give exactly one of generator or hamiltonian")
        self.hamiltonian = None if hamiltonian is None else as_operator(hamiltonian)
        self.generator = hamiltonian_generator(self.hamiltonian) if generator is None else np.asarray(generator, dtype=complex)
        self.cap = cap
        self.max_cached = max_cached
        self._cache: dict[float, np.ndarray] = {}
        self._steps: dict[float, np.ndarray] = {}
        self._lock = threading.Lock()

    @property
    def hilbert_dim(self) -> int:
        return superop_dim(self.generator)

    def _exp(self, t: float) -> np.ndarray:
        if self.hamiltonian is not None:
            u = op_exp(self.hamiltonian, t, self.cap)
            return np.kron(u, np.conj(u))
        # exp(tG) = exp(-i t (iG))
        return op_exp(1j * self.generator, t, self.cap)

    def __call__(self, t: float) -> np.ndarray:
        t = float(t)
        with self._lock:
            hit = self._cache.get(t)
            if hit is not None:
                return hit
            base = [s for s in self._cache if s != 0.0 and np.sign(s) == np.sign(t) and abs(s) < abs(t)]
            if base:
                s = max(base, key=abs)
                step_t = round(t - s, 12)
                step = self._steps.get(step_t)
                if step is None:
                    step = self._exp(step_t)
                    self._steps[step_t] = step
                out = step @ self._cache[s]
                size = np.linalg.norm(out)
                if not np.isfinite(size) or size > self.cap:
                    raise GrowthCapError(f"propagator norm {size:.3e} exceeds cap at t = {t}")
            else:
                out = self._exp(t)
            self._cache[t] = out
            if len(self._cache) > self.max_cached:
                # memory budget: drop the entry closest to the origin
                del self._cache[min((s for s in self._cache if s != t), key=abs)]
            return out

    def evolve(self, rho: np.ndarray, t: float) -> np.ndarray:
        return apply_superop(self(t), rho)


def evolve_density(generator, rho, t: float, allow_negative: bool = False,
                   cap: float = DEFAULT_GROWTH_CAP) -> np.ndarray:
    """rho_t = unstack(exp(tG) stack(rho)).  Negative t is refused unless
    ``allow_negative`` is set, since the physical semigroup runs forward."""
    if t < 0 and not allow_negative:
        raise ValueError("negative time evolution requires allow_negative=True")
    if isinstance(generator, Propagator):
        return generator.evolve(rho, t)
    rho = np.asarray(rho, dtype=complex)
    prop = op_exp(1j * np.asarray(generator, dtype=complex), t, cap)
    return unstack(prop @ stack(rho), rho.shape[0])


def evolve_vector(h, u, t: float, cap: float = DEFAULT_GROWTH_CAP) -> np.ndarray:
    """exp(-itH) u."""
    return op_exp(h, t, cap) @ np.asarray(u, dtype=complex)


# -- semigroup axioms --------------------------------------------------------

@dataclass
class QDSReport:
    t_grid: list
    trace_residual: float = 0.0
    min_eigenvalue: float = np.inf
    contraction_excess: float = -np.inf
    choi_min_eig: float = np.inf
    semigroup_residual: float = 0.0
    continuity_residual: float = 0.0
    general_bound_ratio: float = 0.0
    growth_cap_exceeded: float | None = None
    per_time: list = field(default_factory=list)

    def verdicts(self, trace_tol=1e-9, pos_tol=1e-9, contraction_tol=1e-9,
                 choi_tol=1e-8, semigroup_tol=1e-8) -> dict:
        return {
            "trace": self.trace_residual <= trace_tol,
            "positivity": self.min_eigenvalue >= -pos_tol,
            "contraction": self.contraction_excess <= contraction_tol,
            "complete_positivity": self.choi_min_eig >= -choi_tol,
            "semigroup": self.semigroup_residual <= semigroup_tol,
            "general_bound": self.general_bound_ratio <= 2.0 + 1e-9,
        }

    def passed(self, **tols) -> bool:
        return all(self.verdicts(**tols).values())

    def as_dict(self) -> dict:
        return {
            "t_grid": [float(t) for t in self.t_grid],
            "trace_residual": float(self.trace_residual),
            "min_eigenvalue": float(self.min_eigenvalue),
            "contraction_excess": float(self.contraction_excess),
            "choi_min_eig": float(self.choi_min_eig),
            "semigroup_residual": float(self.semigroup_residual),
            "continuity_residual": float(self.continuity_residual),
            "general_bound_ratio": float(self.general_bound_ratio),
            "growth_cap_exceeded": self.growth_cap_exceeded,
        }


def qds_report(generator, seeds: int = 0, t_grid: Sequence[float] = (0.1, 1.0, 5.0),
               n_states: int = 6) -> QDSReport:
    """Check the quantum-dynamical-semigroup properties of exp(tG) on random
    states drawn from ``np.random.default_rng(seeds)``."""
    g = np.asarray(generator, dtype=complex)
    d = superop_dim(g)
    rng = np.random.default_rng(seeds)
    prop = Propagator(generator=g)
    report = QDSReport(t_grid=list(t_grid))
    eps = 1e-7
    p_eps = prop(eps)
    for t in t_grid:
        try:
            p_t = prop(t)
            p_2t = prop(2 * t)
        except GrowthCapError:
            # a non-contractive generator blows up; later times are pointless
            report.growth_cap_exceeded = float(t)
            report.contraction_excess = np.inf
            report.general_bound_ratio = np.inf
            break
        semi = op_norm(p_t @ p_t - p_2t) / max(1.0, op_norm(p_2t))
        choi_min = min_eig_hermitian(choi(p_t))
        tr_res = 0.0
        min_ev = np.inf
        contr = -np.inf
        ratio = 0.0
        cont = 0.0
        for _ in range(n_states):
            rho = random_density(d, rng, rank=int(rng.integers(1, d + 1)))
            out = apply_superop(p_t, rho)
            tr_res = max(tr_res, abs(np.trace(out) - np.trace(rho)))
            min_ev = min(min_ev, min_eig_hermitian(out))
            cont = max(cont, trace_norm(apply_superop(p_eps, rho) - rho))
            herm = random_hermitian(d, rng)
            contr = max(contr, trace_norm(apply_superop(p_t, herm)) - trace_norm(herm))
            gen = herm + 1j * random_hermitian(d, rng)
            ratio = max(ratio, trace_norm(apply_superop(p_t, gen)) / trace_norm(gen))
        report.per_time.append({"t": float(t), "semigroup": semi, "choi_min_eig": choi_min,
                                "trace": tr_res, "min_eig": min_ev, "contraction": contr,
                                "general_ratio": ratio})
        report.trace_residual = max(report.trace_residual, tr_res)
        report.min_eigenvalue = min(report.min_eigenvalue, min_ev)
        report.contraction_excess = max(report.contraction_excess, contr)
        report.choi_min_eig = min(report.choi_min_eig, choi_min)
        report.semigroup_residual = max(report.semigroup_residual, semi)
        report.continuity_residual = max(report.continuity_residual, cont)
        report.general_bound_ratio = max(report.general_bound_ratio, ratio)
    return report


# -- Dyson-Phillips series ---------------------------------------------------

@dataclass
class DysonTermResult:
    order: int
    value: np.ndarray
    trace_norm: float
    quadrature_step: float


class DysonSeries:
    """Terms S_n(t) rho of the expansion of exp(-itL) around the dissipative
    conjugation exp(-itH) . exp(itH*).

    S_n(s_k) is kept for every grid point s_k = k*dt of [0, t] so that order
    n+1 is a single trapezoid recursion over order n.
    """

    def __init__(self, h, cs, rho, t: float, dt: float):
        if dt <= 0:
            raise ValueError("dt must be positive")
        self.h = as_operator(h, "H")
        self.cs = _coupling_list(cs)
        self.rho = np.asarray(rho, dtype=complex)
        steps = max(1, int(np.ceil(abs(t) / dt - 1e-9)))
        self.t = float(t)
        self.step = self.t / steps
        self.steps = steps
        u = op_exp(self.h, self.step)
        self._u = u
        self._terms: list[np.ndarray] = []
        # order 0 on the grid: U^k rho U^k*
        grid = np.empty((steps + 1,) + self.rho.shape, dtype=complex)
        grid[0] = self.rho
        for k in range(1, steps + 1):
            grid[k] = u @ grid[k - 1] @ dagger(u)
        self._terms.append(grid)

    def _jump(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x)
        for c in self.cs:
            out += c @ x @ dagger(c)
        return out

    def grid_term(self, n: int) -> np.ndarray:
        while len(self._terms) <= n:
            prev = self._terms[-1]
            y = np.stack([self._jump(x) for x in prev])
            u, ud = self._u, dagger(self._u)
            nxt = np.empty_like(prev)
            nxt[0] = 0.0
            # q_k = sum_{j<=k} c_j U^{k-j} y_j U^{k-j}*, c_0 = 1/2, c_j = 1 else
            q = 0.5 * y[0]
            for k in range(1, self.steps + 1):
                q = u @ q @ ud + y[k]
                nxt[k] = self.step * (q - 0.5 * y[k])
            self._terms.append(nxt)
        return self._terms[n]

    def term(self, n: int) -> DysonTermResult:
        val = self.grid_term(n)[-1]
        return DysonTermResult(n, val, trace_norm(val), self.step)

    def partial_sum(self, order: int) -> np.ndarray:
        return sum(self.grid_term(n)[-1] for n in range(order + 1))


def dyson_term(n: int, t: float, h, c, rho, dt: float) -> DysonTermResult:
    if n < 0:
        raise ValueError("order must be >= 0")
    return DysonSeries(h, c, rho, t, dt).term(n)


def dyson_partial_sum(order: int, t: float, h, c, rho, dt: float) -> np.ndarray:
    return DysonSeries(h, c, rho, t, dt).partial_sum(order)
