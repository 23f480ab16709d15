import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from einsel import (
    DensityMatrix,
    DimensionMismatch,
    HermitianOperator,
    InvalidState,
    NonHermitianInput,
    SpectralDecomposition,
    commutator,
    eigh,
    gue,
    matrix_exp_unitary,
    op_norm,
    random_density,
    trace_distance,
    trace_norm,
)

DIAG_3_M4 = np.diag([3.0, -4.0]).astype(complex)
PLUS = DensityMatrix(np.full((2, 2), 0.5, dtype=complex))
A01 = np.diag([0.0, 1.0]).astype(complex)


def test_hermitian_operator_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        HermitianOperator(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))


def test_hermitian_operator_is_immutable():
    op = HermitianOperator(DIAG_3_M4)
    with pytest.raises(ValueError):
        op.matrix[0, 0] = 5.0


def test_density_matrix_invariants():
    with pytest.raises(InvalidState):
        DensityMatrix(np.diag([0.6, 0.6]).astype(complex))  # trace 1.2
    with pytest.raises(InvalidState):
        DensityMatrix(np.diag([1.5, -0.5]).astype(complex))  # negative eigenvalue
    with pytest.raises(NonHermitianInput):
        DensityMatrix(np.array([[0.5, 0.3], [0.1, 0.5]], dtype=complex))


def test_eigh_identity():
    sd = eigh(np.eye(3, dtype=complex))
    assert np.allclose(sd.eigenvalues, 1.0)


def test_eigh_diagonal_sorted_ascending():
    sd = eigh(DIAG_3_M4)
    assert np.allclose(sd.eigenvalues, [-4.0, 3.0])


def test_eigh_reconstruction_gue():
    op = gue(6, seed=123)
    sd = eigh(op)
    assert op_norm(HermitianOperator(sd.reconstruct() - op.matrix)) < 1e-10


def test_spectral_decomposition_validation():
    with pytest.raises(ValueError):
        SpectralDecomposition(np.array([2.0, 1.0]), np.eye(2, dtype=complex))
    with pytest.raises(ValueError):
        SpectralDecomposition(np.array([1.0, 2.0]), 2 * np.eye(2, dtype=complex))


def test_trace_norm_diagonal():
    assert trace_norm(DIAG_3_M4) == pytest.approx(7.0)


def test_trace_norm_of_state_is_one():
    rho = random_density(5, seed=2)
    assert trace_norm(rho) == pytest.approx(1.0, abs=1e-10)


def test_trace_norm_orthogonal_pure_difference():
    diff = np.diag([1.0, -1.0]).astype(complex)
    assert trace_norm(diff) == pytest.approx(2.0)


def test_trace_distance_basics():
    rho = random_density(4, seed=5)
    assert trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-14)
    p0 = DensityMatrix(np.diag([1.0, 0.0]).astype(complex))
    p1 = DensityMatrix(np.diag([0.0, 1.0]).astype(complex))
    assert trace_distance(p0, p1) == pytest.approx(1.0)
    # eigenvalues of diag(1,0) - diag(.5,.5) are +-0.5, so distance is 0.5
    mixed = DensityMatrix(np.diag([0.5, 0.5]).astype(complex))
    assert trace_distance(p0, mixed) == pytest.approx(0.5, abs=1e-12)


def test_trace_distance_dim_mismatch():
    with pytest.raises(DimensionMismatch):
        trace_distance(random_density(2, 0), random_density(3, 0))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9), st.integers(2, 6))
def test_trace_distance_triangle_inequality(seed, dim):
    rng = np.random.default_rng(seed)
    a, b, c = (random_density(dim, rng) for _ in range(3))
    assert trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-10


def test_op_norm_cases():
    assert op_norm(DIAG_3_M4) == pytest.approx(4.0)
    assert op_norm(np.eye(7, dtype=complex)) == pytest.approx(1.0)
    z = np.diag([1.0, -1.0]).astype(complex)
    assert op_norm(np.kron(z, z)) == pytest.approx(1.0)


def test_matrix_exp_unitary_at_zero_is_identity():
    sd = eigh(gue(5, seed=9))
    assert np.allclose(matrix_exp_unitary(sd, 0.0), np.eye(5), atol=1e-14)


def test_matrix_exp_unitary_known_phases():
    sd = eigh(np.diag([0.0, np.pi]).astype(complex))
    u = matrix_exp_unitary(sd, 1.0)
    assert np.allclose(u, np.diag([1.0, -1.0]), atol=1e-12)


def test_matrix_exp_unitary_is_unitary():
    sd = eigh(gue(8, seed=11))
    u = matrix_exp_unitary(sd, 2.37)
    assert np.max(np.abs(u @ u.conj().T - np.eye(8))) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**9))
def test_matrix_exp_unitary_group_property(seed):
    rng = np.random.default_rng(seed)
    sd = eigh(gue(4, rng))
    s, t = rng.uniform(-5, 5, size=2)
    left = matrix_exp_unitary(sd, s + t)
    right = matrix_exp_unitary(sd, s) @ matrix_exp_unitary(sd, t)
    assert np.max(np.abs(left - right)) < 1e-9


def test_commutator_of_commuting_operators_vanishes():
    a = np.diag([1.0, 2.0, 3.0]).astype(complex)
    b = np.diag([-1.0, 0.5, 2.0]).astype(complex)
    assert np.allclose(commutator(a, b), 0.0)
    assert np.allclose(commutator(a, a), 0.0)


def test_commutator_plus_state_with_projector():
    expected = 0.5 * np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
    assert np.allclose(commutator(PLUS, A01), expected, atol=1e-14)


def test_commutator_dim_mismatch():
    with pytest.raises(DimensionMismatch):
        commutator(np.eye(2, dtype=complex), np.eye(3, dtype=complex))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(2, 8))
def test_i_commutator_hermitian_and_bounded_by_op_norm(seed, dim):
    rng = np.random.default_rng(seed)
    rho = random_density(dim, rng)
    a = gue(dim, rng)
    ic = 1j * commutator(rho, a)
    assert np.max(np.abs(ic - ic.conj().T)) < 1e-12
    assert trace_norm(ic) <= 2.0 * op_norm(a) + 1e-10


def test_trace_norm_matches_singular_values_on_commutators():
    # independent oracle: the trace norm of a Hermitian matrix equals the
    # sum of its singular values
    rng = np.random.default_rng(77)
    for _ in range(100):
        dim = int(rng.integers(2, 9))
        rho = random_density(dim, rng)
        a = gue(dim, rng)
        ic = 1j * commutator(rho, a)
        via_eigs = trace_norm(ic)
        via_svd = float(np.sum(np.linalg.svd(ic, compute_uv=False)))
        assert abs(via_eigs - via_svd) < 1e-9
