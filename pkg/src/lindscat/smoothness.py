"""Smoothness constants: time-integrated Gram operators and resolvent sups.

Every improper integral is truncated at a time T.  On a finite lattice the
untruncated constants are infinite (eigenvectors never leave), so all
values here are windowed quantities; the convergence flag records whether
the integrand along the maximizing direction has decayed inside the window.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .operator_core import as_operator, dagger, hermitian_part, min_singular, op_exp, op_norm

RANGES = ("half_line", "full_line")


@dataclass
class SmoothnessEstimate:
    kind: str
    value: float
    T: float | None = None
    dt: float | None = None
    tail_bound: float | None = None
    converged: bool = True
    grid: str | None = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "value": float(self.value),
            "T": None if self.T is None else float(self.T),
            "dt": None if self.dt is None else float(self.dt),
            "tail_bound": None if self.tail_bound is None else float(self.tail_bound),
            "converged": bool(self.converged),
            "grid": self.grid,
        }
        out["details"] = {k: _plain(v) for k, v in sorted(self.details.items())}
        return out


def _plain(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


def _absorption(c, dim: int) -> np.ndarray:
    if isinstance(c, np.ndarray) and c.ndim == 2:
        return dagger(c) @ c
    return sum((dagger(cj) @ cj for cj in c), np.zeros((dim, dim), dtype=complex))


def _exact_half_gram(a: np.ndarray, q: np.ndarray, T: float) -> np.ndarray:
    """int_0^T exp(isA*) Q exp(-isA) ds from a block exponential."""
    d = a.shape[0]
    x = -1j * dagger(a)
    block = np.zeros((2 * d, 2 * d), dtype=complex)
    block[:d, :d] = x
    block[:d, d:] = q
    block[d:, d:] = -1j * a
    top_right = sla.expm(T * block)[:d, d:]
    return sla.expm(-T * x) @ top_right


def _trapezoid_half_gram(a: np.ndarray, q: np.ndarray, T: float, dt: float) -> np.ndarray:
    steps = max(1, int(np.ceil(T / dt - 1e-9)))
    h = T / steps
    step = op_exp(a, h)
    u = np.eye(a.shape[0], dtype=complex)
    acc = 0.5 * q.copy()
    for k in range(1, steps + 1):
        u = step @ u
        term = dagger(u) @ q @ u
        acc += term if k < steps else 0.5 * term
    return h * acc


def gram_operator(a, c, range: str, T: float, dt: float | None) -> np.ndarray:
    """Hermitian PSD matrix of u -> int ||C exp(-itA) u||^2 dt over [0, T]
    (half_line) or [-T, T] (full_line).  ``dt`` selects composite trapezoid
    quadrature; ``dt=None`` evaluates the integral exactly through a block
    matrix exponential."""
    if range not in RANGES:
        raise ValueError(f"range must be one of {RANGES}")
    if T <= 0:
        raise ValueError("T must be positive")
    if dt is not None and dt <= 0:
        raise ValueError("dt must be positive")
    a = as_operator(a, "A")
    q = _absorption(c, a.shape[0])
    half = (lambda m: _exact_half_gram(m, q, T)) if dt is None else (lambda m: _trapezoid_half_gram(m, q, T, dt))
    g = half(a)
    if range == "full_line":
        g = g + half(-a)
    return hermitian_part(g)


def integrand_profile(a, c, u, T: float, samples: int = 401, sign: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """t and ||C exp(-i sign t A) u||^2 on a uniform grid of [0, T]."""
    a = as_operator(a)
    q = _absorption(c, a.shape[0])
    ts = np.linspace(0.0, T, samples)
    step = op_exp(a, sign * ts[1])
    v = np.asarray(u, dtype=complex)
    vals = np.empty(samples)
    for k in range(samples):
        vals[k] = float(np.real(np.vdot(v, q @ v)))
        v = step @ v
    return ts, vals


def _tail_check(a, c, u, T: float, signs) -> tuple[bool, float | None, dict]:
    """Compare the directional integrand on [0.45T, 0.55T] with [0.9T, T]."""
    converged = True
    tail = 0.0
    info = {}
    for sign in signs:
        ts, f = integrand_profile(a, c, u, T, sign=sign)
        mid = f[(ts >= 0.45 * T) & (ts <= 0.55 * T)].mean()
        end = f[ts >= 0.9 * T].mean()
        info[f"integrand_mid_{'+' if sign > 0 else '-'}"] = float(mid)
        info[f"integrand_end_{'+' if sign > 0 else '-'}"] = float(end)
        ok = end <= 0.1 * mid
        converged &= bool(ok)
        if ok and end > 0:
            rate = np.log(mid / end) / (0.5 * T)
            tail += end / rate
    return converged, (tail if converged else None), info


def _top_eig(g: np.ndarray) -> tuple[float, np.ndarray]:
    w, v = np.linalg.eigh(g)
    return float(w[-1]), v[:, -1]


def estimate_c0(h0, c, T: float, dt: float | None) -> SmoothnessEstimate:
    """sqrt(lambda_max) of the full-line Gram operator of the free dynamics."""
    h0 = as_operator(h0, "H0")
    g = gram_operator(h0, c, "full_line", T, dt)
    lam, u = _top_eig(g)
    converged, tail, info = _tail_check(h0, c, u, T, (1, -1))
    return SmoothnessEstimate("c0", float(np.sqrt(max(lam, 0.0))), T, dt, tail, converged, details=info)


def estimate_c_tilde0(h, c, T: float, dt: float | None) -> SmoothnessEstimate:
    """Dissipative constant by the Gram route, cross-checked against the
    decay route 1 - sigma_min(exp(-iTH))^2."""
    h = as_operator(h, "H")
    g = gram_operator(h, c, "half_line", T, dt)
    lam, u = _top_eig(g)
    gram_value = float(np.sqrt(max(lam, 0.0)))
    smin = min_singular(op_exp(h, T))
    decay_value = float(np.sqrt(max(1.0 - smin**2, 0.0)))
    gap = abs(gram_value - decay_value)
    converged, tail, info = _tail_check(h, c, u, T, (1,))
    info.update(decay_route=decay_value, route_gap=gap, routes_agree=bool(gap <= 1e-3))
    return SmoothnessEstimate("c_tilde0", gram_value, T, dt, tail, converged, details=info)


def estimate_c_V(h_v, c, pi_ac, T: float, dt: float | None) -> SmoothnessEstimate:
    """c0-type constant of H_V restricted to the range of ``pi_ac``."""
    h_v = as_operator(h_v, "H_V")
    pi = as_operator(pi_ac, "Pi_ac")
    scale = max(1.0, op_norm(h_v))
    if op_norm(pi @ h_v - h_v @ pi) > 1e-8 * scale:
        raise ValueError("Pi_ac does not commute with H_V")
    if op_norm(pi) == 0.0:
        return SmoothnessEstimate("c_V", 0.0, T, dt, 0.0, True)
    g = pi @ gram_operator(h_v, c, "full_line", T, dt) @ pi
    lam, u = _top_eig(hermitian_part(g))
    converged, tail, info = _tail_check(h_v, c, u, T, (1, -1))
    return SmoothnessEstimate("c_V", float(np.sqrt(max(lam, 0.0))), T, dt, tail, converged, details=info)


# -- resolvent constants -----------------------------------------------------

@dataclass(frozen=True)
class ZGrid:
    points: np.ndarray
    eta_lines: tuple
    eta_min: float

    def describe(self) -> str:
        etas = ", ".join(f"{e:.4g}" for e in self.eta_lines)
        return f"{self.points.size} points on Im z in {{{etas}}}"


def default_z_grid(h0, eta: float | None = None, n_re: int = 201, eta_min: float | None = None) -> ZGrid:
    """Horizontal lines Im z = eta, 2 eta, 4 eta across the spectrum of H0,
    with eta = 0.05 * spectral width by default.  The eigenvalues of H0 are
    added to the real-part sweep since the sup sits near them."""
    w = np.linalg.eigvalsh(hermitian_part(as_operator(h0)))
    width = float(w[-1] - w[0]) or 1.0
    eta = 0.05 * width if eta is None else eta
    eta_min = 1e-3 * width if eta_min is None else eta_min
    re = np.union1d(np.linspace(w[0] - 0.1 * width, w[-1] + 0.1 * width, n_re), w)
    lines = (eta, 2 * eta, 4 * eta)
    pts = np.concatenate([re + 1j * e for e in lines])
    return ZGrid(pts, lines, eta_min)


def _grid_flags(grid: ZGrid) -> dict:
    smallest = float(np.min(np.abs(grid.points.imag)))
    return {"min_eta": smallest, "ill_conditioned": bool(smallest < grid.eta_min)}


def resolvent_smoothness(h0, c, z_grid: ZGrid | None = None) -> SmoothnessEstimate:
    """max over the grid of ||C (R(z) - R(conj z)) C*|| with R the resolvent of H0."""
    h0 = as_operator(h0, "H0")
    grid = default_z_grid(h0) if z_grid is None else z_grid
    w, u = np.linalg.eigh(hermitian_part(h0))
    cu = np.asarray(c, dtype=complex) @ u
    best = 0.0
    for z in grid.points:
        # R(z) - R(conj z) is i times a positive diagonal in the eigenbasis
        weight = np.abs(2.0 * z.imag / np.abs(w - z) ** 2)
        m = (cu * weight) @ dagger(cu)
        best = max(best, float(np.linalg.eigvalsh(hermitian_part(m))[-1]))
    return SmoothnessEstimate("c0_prime", best, grid=grid.describe(), details=_grid_flags(grid))


def supersmooth_constant(h0, c, z_grid: ZGrid | None = None) -> SmoothnessEstimate:
    """max over the grid of ||C R(z) C*||."""
    h0 = as_operator(h0, "H0")
    grid = default_z_grid(h0) if z_grid is None else z_grid
    w, u = np.linalg.eigh(hermitian_part(h0))
    cu = np.asarray(c, dtype=complex) @ u
    best = 0.0
    for z in grid.points:
        m = (cu / (w - z)) @ dagger(cu)
        best = max(best, op_norm(m))
    return SmoothnessEstimate("d0", best, grid=grid.describe(), details=_grid_flags(grid))


def resolvent_integral_constant(h0, c, eta: float) -> SmoothnessEstimate:
    """Best constant in int (||C R(l+i eta) u||^2 + ||C R(l-i eta) u||^2) dl <= c'^2 ||u||^2.

    The lambda integral is done in closed form in the eigenbasis of H0:
    entry (j, k) of the resulting form carries 8 pi eta / (4 eta^2 + (w_j - w_k)^2).
    """
    h0 = as_operator(h0, "H0")
    w, u = np.linalg.eigh(hermitian_part(h0))
    cu = np.asarray(c, dtype=complex) @ u
    q = dagger(cu) @ cu
    diff = w[:, None] - w[None, :]
    kernel = 8.0 * np.pi * eta / (4.0 * eta**2 + diff**2)
    lam = float(np.linalg.eigvalsh(hermitian_part(q * kernel))[-1])
    return SmoothnessEstimate("c0_prime", float(np.sqrt(max(lam, 0.0))), grid=f"lambda integral at eta={eta:.4g}")


def max_propagator_norm(h, times) -> float:
    """max over the given times of ||exp(-itH)||."""
    h = as_operator(h)
    return max(op_norm(op_exp(h, float(t))) for t in times)
