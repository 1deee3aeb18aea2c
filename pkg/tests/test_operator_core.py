import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, strategies as st

from conftest import random_matrix
from lindscat.operator_core import (
    ClusteringError, GrowthCapError, SubspaceBasis, apply_superop, as_operator, choi, conjugation_superop,
    dagger, invariant_subspace, is_hermitian, is_normal, left_right_superop, min_singular, op_exp, op_norm,
    principal_angles, random_density, random_hermitian, stack, subspace_gap, superop_dim, trace_norm, unstack,
)

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 5)


@given(seeds, dims)
def test_row_major_stacking_identity(seed, d):
    rng = np.random.default_rng(seed)
    a, b, x = (random_matrix(rng, d) for _ in range(3))
    assert np.allclose(stack(a @ x @ b), np.kron(a, b.T) @ stack(x))
    assert np.allclose(apply_superop(left_right_superop(a, b), x), a @ x @ b)
    assert np.array_equal(unstack(stack(x)), x)


@given(seeds, dims, st.floats(-3, 3))
def test_op_exp_matches_scipy_expm(seed, d, t):
    rng = np.random.default_rng(seed)
    for a in (random_hermitian(d, rng), random_matrix(rng, d) * 0.5):
        assert np.allclose(op_exp(a, t), sla.expm(-1j * t * a), atol=1e-9)


def test_op_exp_normal_branch(rng):
    q, _ = np.linalg.qr(random_matrix(rng, 4))
    a = q @ np.diag([1.0, -0.5j, 2 + 1j, 0.3]) @ dagger(q)
    assert is_normal(a) and not is_hermitian(a)
    assert np.allclose(op_exp(a, 1.3), sla.expm(-1.3j * a))


def test_op_exp_growth_cap():
    with pytest.raises(GrowthCapError):
        op_exp(np.array([[50j]]), 1.0)
    assert op_exp(np.array([[50j]]), -1.0)[0, 0] == pytest.approx(np.exp(-50))


@given(seeds, dims)
def test_trace_norm_against_eigenvalues_of_modulus(seed, d):
    rng = np.random.default_rng(seed)
    a = random_matrix(rng, d)
    w = np.linalg.eigvalsh(dagger(a) @ a)
    assert trace_norm(a) == pytest.approx(np.sqrt(np.clip(w, 0, None)).sum(), rel=1e-9)
    assert op_norm(a) == pytest.approx(np.sqrt(w[-1]), rel=1e-9)
    assert min_singular(a) == pytest.approx(np.sqrt(max(w[0], 0.0)), abs=1e-7)


@given(seeds, st.integers(1, 4))
def test_choi_of_conjugation_is_rank_one_psd(seed, d):
    rng = np.random.default_rng(seed)
    u = random_matrix(rng, d)
    c = choi(conjugation_superop(u))
    w = np.linalg.eigvalsh(c)
    assert w[0] >= -1e-9 * max(1.0, w[-1])
    assert np.sum(w > 1e-9 * w[-1]) == 1
    assert w[-1] == pytest.approx(np.linalg.norm(u) ** 2, rel=1e-9)


def test_choi_of_transpose_has_negative_eigenvalue():
    d = 2
    transpose = np.zeros((d * d, d * d))
    for j in range(d):
        for k in range(d):
            transpose[k * d + j, j * d + k] = 1.0
    assert np.linalg.eigvalsh(choi(transpose))[0] == pytest.approx(-1.0)


def test_superop_dim_rejects_bad_shape():
    with pytest.raises(ValueError):
        superop_dim(np.zeros((5, 5)))
    assert superop_dim(np.zeros((9, 9))) == 3


def test_as_operator_validation():
    with pytest.raises(ValueError):
        as_operator(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        as_operator(np.array([[np.nan]]))


def test_invariant_subspace_of_triangular_matrix():
    a = np.array([[1.0, 2.0, 0.0], [0.0, -1j, 1.0], [0.0, 0.0, 2.0]])
    sub = invariant_subspace(a, lambda lam: lam.imag < -0.5, 1e-8)
    assert sub.rank == 1
    v = sub.vectors
    assert op_norm(a @ v - v @ (dagger(v) @ a @ v)) < 1e-10
    assert np.allclose(a @ v[:, 0], -1j * v[:, 0])


def test_invariant_subspace_flags_boundary_eigenvalue():
    with pytest.raises(ClusteringError):
        invariant_subspace(np.diag([0.0, 1e-12j]), lambda lam: lam.imag > 0, 1e-6)


@given(seeds, st.integers(2, 6))
def test_subspace_complement_and_angles(seed, d):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, d))
    basis = SubspaceBasis.span(random_matrix(rng, d)[:, :k])
    comp = basis.complement()
    assert basis.rank + comp.rank == d
    assert np.allclose(dagger(basis.vectors) @ comp.vectors, 0, atol=1e-10)
    assert max(principal_angles(basis, basis)) < 1e-6
    assert min(principal_angles(basis, comp)) == pytest.approx(np.pi / 2)
    assert subspace_gap(basis, basis) < 1e-10


def test_subspace_rejects_non_orthonormal():
    with pytest.raises(ValueError):
        SubspaceBasis(np.array([[1.0, 1.0], [0.0, 1.0]]))


@given(seeds, dims)
def test_random_density_is_a_state(seed, d):
    rho = random_density(d, np.random.default_rng(seed))
    assert np.trace(rho).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(rho)[0] >= -1e-12
