"""Dense complex linear algebra used throughout the package.

Operators are plain ``numpy`` complex arrays.  Superoperators act on
row-major stacked matrices, so that ``stack(A @ X @ B) == kron(A, B.T) @ stack(X)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg as sla

DEFAULT_GROWTH_CAP = 1e12


class GrowthCapError(ArithmeticError):
    """Raised when a propagator norm exceeds the configured growth cap."""


class ClusteringError(ValueError):
    """Raised when eigenvalues sit too close to a selection boundary."""


def as_operator(a, name: str = "operator") -> np.ndarray:
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + dagger(a))


def is_hermitian(a: np.ndarray, rtol: float = 1e-12) -> bool:
    scale = max(np.linalg.norm(a), 1.0)
    return bool(np.linalg.norm(a - dagger(a)) <= rtol * scale)


def is_normal(a: np.ndarray, rtol: float = 1e-12) -> bool:
    # Frobenius norms: cheap and an upper bound for the spectral ones.
    scale = np.linalg.norm(a) ** 2
    if scale == 0.0:
        return True
    comm = a @ dagger(a) - dagger(a) @ a
    return bool(np.linalg.norm(comm) <= rtol * scale)


def stack(x: np.ndarray) -> np.ndarray:
    """Row-major stacking of a square matrix into a vector."""
    return np.asarray(x).reshape(-1)


def unstack(v: np.ndarray, dim: int | None = None) -> np.ndarray:
    v = np.asarray(v)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    return v.reshape(dim, dim)


def apply_superop(s: np.ndarray, x: np.ndarray) -> np.ndarray:
    return unstack(s @ stack(x), x.shape[0])


def superop_dim(s: np.ndarray) -> int:
    d = int(round(np.sqrt(s.shape[0])))
    if d * d != s.shape[0] or s.shape[0] != s.shape[1]:
        raise ValueError(f"not a superoperator shape: {s.shape}")
    return d


def trace_norm(a) -> float:
    """Sum of singular values."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False).sum())


def op_norm(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def op_exp(a, t: float, cap: float = DEFAULT_GROWTH_CAP) -> np.ndarray:
    """Return exp(-i t A).

    Hermitian and normal inputs go through a unitary diagonalization,
    everything else through scaling and squaring.  Raises GrowthCapError
    when the result is larger than ``cap`` (Frobenius norm).
    """
    a = as_operator(a)
    if t == 0.0:
        return np.eye(a.shape[0], dtype=complex)
    if is_hermitian(a):
        w, u = np.linalg.eigh(hermitian_part(a))
        out = (u * np.exp(-1j * t * w)) @ dagger(u)
    elif is_normal(a):
        tri, z = sla.schur(a, output="complex")
        out = (z * np.exp(-1j * t * np.diag(tri))) @ dagger(z)
    else:
        out = sla.expm(-1j * t * a)
    size = np.linalg.norm(out)
    if not np.isfinite(size) or size > cap:
        raise GrowthCapError(f"|exp(-itA)| = {size:.3e} exceeds cap {cap:.1e} at t = {t}")
    return out


def left_right_superop(left, right) -> np.ndarray:
    """Matrix of X -> L X R on stacked operators."""
    left = as_operator(left, "L")
    right = as_operator(right, "R")
    if left.shape != right.shape:
        raise ValueError(f"dimension mismatch: {left.shape} vs {right.shape}")
    return np.kron(left, right.T)


def conjugation_superop(u) -> np.ndarray:
    """Matrix of X -> U X U*."""
    u = as_operator(u)
    return np.kron(u, np.conj(u))


def choi(s) -> np.ndarray:
    """Choi matrix sum_jk |j><k| (x) S(|j><k|)."""
    s = np.asarray(s, dtype=complex)
    d = superop_dim(s)
    # s[a*d + b, j*d + k] = S(E_jk)[a, b]; reorder to rows (j, a), columns (k, b)
    return s.reshape(d, d, d, d).transpose(2, 0, 3, 1).reshape(d * d, d * d)


def min_eig_hermitian(a) -> float:
    a = np.asarray(a, dtype=complex)
    return float(np.linalg.eigvalsh(hermitian_part(a))[0])


def min_singular(a) -> float:
    a = np.asarray(a, dtype=complex)
    return float(np.linalg.svd(a, compute_uv=False)[-1])


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal basis stored as the columns of ``vectors`` (dim x rank)."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 2:
            raise ValueError("vectors must be a 2-d array of columns")
        gram = dagger(v) @ v
        if v.shape[1] and np.abs(gram - np.eye(v.shape[1])).max() > 1e-10:
            raise ValueError("basis vectors are not orthonormal")
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def rank(self) -> int:
        return self.vectors.shape[1]

    def projector(self) -> np.ndarray:
        return self.vectors @ dagger(self.vectors)

    def complement(self) -> "SubspaceBasis":
        if self.rank == 0:
            return SubspaceBasis(np.eye(self.dim, dtype=complex))
        q, _ = np.linalg.qr(self.vectors, mode="complete")
        return SubspaceBasis(q[:, self.rank:])

    @classmethod
    def empty(cls, dim: int) -> "SubspaceBasis":
        return cls(np.zeros((dim, 0), dtype=complex))

    @classmethod
    def span(cls, vectors, rtol: float = 1e-8) -> "SubspaceBasis":
        """Orthonormal basis of the column span, dropping directions whose
        singular value is below rtol times the largest one."""
        v = np.asarray(vectors, dtype=complex)
        if v.shape[1] == 0:
            return cls.empty(v.shape[0])
        u, s, _ = np.linalg.svd(v, full_matrices=False)
        if s[0] == 0.0:
            return cls.empty(v.shape[0])
        keep = s > rtol * s[0]
        return cls(u[:, keep])

    def direct_sum(self, other: "SubspaceBasis", rtol: float = 1e-8) -> "SubspaceBasis":
        return SubspaceBasis.span(np.hstack([self.vectors, other.vectors]), rtol)


def _ambiguous(select: Callable[[complex], bool], lam: complex, step: float) -> bool:
    here = bool(select(lam))
    return any(bool(select(lam + d)) != here for d in (step, -step, 1j * step, -1j * step))


def invariant_subspace(a, select: Callable[[complex], bool], tol: float) -> SubspaceBasis:
    """Invariant subspace for the eigenvalues accepted by ``select``.

    Uses a reordered complex Schur form.  An eigenvalue whose classification
    flips under a shift of tol/2 along either axis is reported as a
    ClusteringError instead of being silently assigned.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = as_operator(a)
    eig = np.linalg.eigvals(a)
    bad = [lam for lam in eig if _ambiguous(select, lam, 0.5 * tol)]
    if bad:
        raise ClusteringError(
            f"{len(bad)} eigenvalue(s) within tol of the selection boundary, e.g. {bad[0]:.3e}"
        )
    tri, z, sdim = sla.schur(a, output="complex", sort=lambda lam: bool(select(lam)))
    basis = z[:, :sdim]
    if sdim:
        resid = a @ basis - basis @ (dagger(basis) @ a @ basis)
        if op_norm(resid) > tol * max(op_norm(a), 1.0):
            raise ClusteringError(f"invariance residual {op_norm(resid):.3e} above tolerance")
    # re-orthonormalize to clean rounding before the strict basis check
    if sdim:
        basis, _ = np.linalg.qr(basis)
    return SubspaceBasis(basis)


def principal_angles(u: SubspaceBasis, v: SubspaceBasis) -> list[float]:
    """Principal angles in nonincreasing order (min(rank) of them)."""
    if u.dim != v.dim:
        raise ValueError("ambient dimensions differ")
    if u.rank == 0 or v.rank == 0:
        return []
    return [float(x) for x in sla.subspace_angles(u.vectors, v.vectors)]


def subspace_gap(u: SubspaceBasis, v: SubspaceBasis) -> float:
    """Spectral norm of the projector difference; sine of the largest angle
    when ranks agree and 1 when they do not."""
    return op_norm(u.projector() - v.projector())


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * hermitian_part(g)


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
