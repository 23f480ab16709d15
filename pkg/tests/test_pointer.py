import numpy as np
import pytest

from einsel import (
    DensityMatrix,
    HermitianOperator,
    IndexOutOfRange,
    InvalidState,
    PointerModel,
    contrast_experiment,
    decompose,
    dephase,
    eigh,
    gue,
    haar_vector,
    maximally_coherent_state,
    pointer_evolve,
    pointer_hamiltonian,
    pointer_spectral_decomposition,
    random_density,
    random_pointer_model,
    run_pointer_trajectory,
    suppression_factor,
    trace_distance,
)

D_B = 12


@pytest.fixture(scope="module")
def model():
    return random_pointer_model(3, D_B, seed=301)


@pytest.fixture(scope="module")
def bath_ket():
    return haar_vector(D_B, D_B, seed=302)


def test_identical_blocks_reproduce_pure_bath_hamiltonian():
    h_b = gue(D_B, seed=303)
    m = PointerModel(2, D_B, np.eye(2, dtype=complex), (h_b, h_b))
    got = pointer_hamiltonian(m).matrix
    assert np.allclose(got, np.kron(np.eye(2), h_b.matrix), atol=1e-14)


def test_trivial_bath_reduces_to_subsystem_hamiltonian():
    blocks = (
        HermitianOperator(np.array([[0.0]], dtype=complex)),
        HermitianOperator(np.array([[1.0]], dtype=complex)),
    )
    m = PointerModel(2, 1, np.eye(2, dtype=complex), blocks)
    assert np.allclose(pointer_hamiltonian(m).matrix, np.diag([0.0, 1.0]))


def test_pointer_hamiltonian_decomposes_cleanly(model):
    h = pointer_hamiltonian(model)
    sys = decompose(h, model.d_S, model.d_B)  # validates the split invariants
    assert sys.dim == model.dim


def test_pointer_spectral_decomposition_matches_dense_solve(model):
    h = pointer_hamiltonian(model)
    sd_blocks = pointer_spectral_decomposition(model)
    sd_dense = eigh(h)
    assert np.allclose(sd_blocks.eigenvalues, sd_dense.eigenvalues, atol=1e-12)
    recon = sd_blocks.reconstruct()
    assert np.max(np.abs(recon - h.matrix)) < 1e-12


def test_pointer_evolve_at_zero(model, bath_ket):
    rho0 = random_density(model.d_S, seed=304)
    out = pointer_evolve(model, rho0, bath_ket, 0.0)
    assert np.max(np.abs(out.matrix - rho0.matrix)) < 1e-13


def test_pointer_diagonal_entries_frozen(model, bath_ket):
    rho0 = random_density(model.d_S, seed=305)
    p = model.pointer_basis
    diag0 = np.real(np.diag(p.conj().T @ rho0.matrix @ p))
    for t in (0.1, 3.0, 250.0, 9000.0):
        out = pointer_evolve(model, rho0, bath_ket, t)
        diag_t = np.real(np.diag(p.conj().T @ out.matrix @ p))
        assert np.max(np.abs(diag_t - diag0)) < 1e-12


def test_offdiagonals_scale_by_suppression_factor(model, bath_ket):
    rho0 = random_density(model.d_S, seed=306)
    p = model.pointer_basis
    r0 = p.conj().T @ rho0.matrix @ p
    for t in (0.4, 7.7):
        out = pointer_evolve(model, rho0, bath_ket, t)
        rt = p.conj().T @ out.matrix @ p
        for a in range(model.d_S):
            for b in range(model.d_S):
                if a == b:
                    continue
                factor = suppression_factor(model, bath_ket, a, b, t)
                assert abs(rt[a, b]) == pytest.approx(
                    abs(r0[a, b]) * abs(factor), abs=1e-12
                )


def test_suppression_factor_identities(model, bath_ket):
    assert suppression_factor(model, bath_ket, 1, 1, 5.3) == pytest.approx(1.0)
    assert suppression_factor(model, bath_ket, 0, 2, 0.0) == pytest.approx(1.0)
    rng = np.random.default_rng(307)
    for t in rng.uniform(0, 1e4, size=50):
        f = suppression_factor(model, bath_ket, 0, 1, float(t))
        assert abs(f) <= 1.0 + 1e-12


def test_suppression_factor_long_time_mean_square(model, bath_ket):
    # dephasing oracle: with non-degenerate cross-block gaps, the long-time
    # average of |factor|^2 is sum_{mn} |<psi|b'_m><b'_m|b_n><b_n|psi>|^2
    p, q = 0, 1
    sd_p = model.block_sds[p]
    sd_q = model.block_sds[q]
    overlap = sd_q.eigenvectors.conj().T @ sd_p.eigenvectors
    amp = (sd_q.eigenvectors.conj().T @ bath_ket)[:, None].conj() * overlap
    amp = amp * (sd_p.eigenvectors.conj().T @ bath_ket)[None, :]
    expected = float(np.sum(np.abs(amp) ** 2))
    rng = np.random.default_rng(308)
    sq = [
        abs(suppression_factor(model, bath_ket, p, q, float(t))) ** 2
        for t in rng.uniform(1e3, 1e6, size=600)
    ]
    se = np.std(sq, ddof=1) / np.sqrt(len(sq))
    assert np.mean(sq) == pytest.approx(expected, abs=4 * se + 5e-3)


def test_suppression_factor_index_range(model, bath_ket):
    with pytest.raises(IndexOutOfRange):
        suppression_factor(model, bath_ket, 0, 3, 1.0)


def test_bath_state_must_be_pure(model):
    mixed = DensityMatrix(np.eye(D_B, dtype=complex) / D_B)
    with pytest.raises(InvalidState):
        pointer_evolve(model, random_density(model.d_S, 0), mixed, 1.0)


def test_pointer_evolve_accepts_rank_one_density(model, bath_ket):
    rho_b = DensityMatrix(np.outer(bath_ket, bath_ket.conj()))
    rho0 = random_density(model.d_S, seed=309)
    a = pointer_evolve(model, rho0, rho_b, 2.2)
    b = pointer_evolve(model, rho0, bath_ket, 2.2)
    assert trace_distance(a, b) < 1e-12


def test_identical_blocks_preserve_coherence():
    h_b = gue(D_B, seed=310)
    m = PointerModel(2, D_B, np.eye(2, dtype=complex), (h_b, h_b))
    rho0 = maximally_coherent_state(np.eye(2, dtype=complex))
    psi = haar_vector(D_B, D_B, seed=311)
    for t in (0.9, 120.0):
        out = pointer_evolve(m, rho0, psi, t)
        assert np.max(np.abs(out.matrix - rho0.matrix)) < 1e-12


def test_closed_form_agrees_with_generic_pipeline(model, bath_ket):
    rho0 = random_density(model.d_S, seed=312)
    _, records = run_pointer_trajectory(
        model, rho0, bath_ket, n_samples=50, seed=313
    )
    assert len(records) == 50
    assert max(r.closed_vs_generic for r in records) < 1e-10
    assert max(r.diag_drift for r in records) < 1e-12


def test_haar_pointer_basis_covariance():
    m = random_pointer_model(2, 8, seed=314, basis="haar")
    psi = haar_vector(8, 8, seed=315)
    rho0 = maximally_coherent_state(m.pointer_basis)
    _, records = run_pointer_trajectory(m, rho0, psi, n_samples=25, seed=316)
    assert max(r.closed_vs_generic for r in records) < 1e-10
    assert max(r.diag_drift for r in records) < 1e-12


def test_dephased_pointer_state_keeps_diagonal(model, bath_ket):
    # the infinite-time average in the pointer basis has the frozen diagonal
    rho0 = random_density(model.d_S, seed=317)
    sd = pointer_spectral_decomposition(model)
    full0 = DensityMatrix(
        np.kron(rho0.matrix, np.outer(bath_ket, bath_ket.conj()))
    )
    omega = dephase(sd, full0)
    from einsel import partial_trace_B

    omega_s = partial_trace_B(omega, model.d_S, model.d_B)
    p = model.pointer_basis
    assert np.allclose(
        np.diag(p.conj().T @ omega_s @ p),
        np.diag(p.conj().T @ rho0.matrix @ p),
        atol=1e-12,
    )


def test_contrast_experiment_report_shape():
    report = contrast_experiment(2, 8, seed=318, coupling_scale=0.05, n_samples=30)
    assert report.pointer_diag_drift_max < 1e-12
    assert report.closed_vs_generic_max < 1e-10
    assert report.pointer_offdiag_mean.shape == (1,)
    assert report.generic_offdiag_mean.shape == (1,)
    assert report.generic_gaps[0] > 0
    # averaged decoherence ceiling holds for the generic run
    ceiling = (
        report.generic_sys.interaction_norm + report.generic_speed_mean
    ) / report.generic_gaps[0]
    assert report.generic_offdiag_mean[0] <= ceiling + 1e-12


def test_contrast_strong_coupling_ceiling_not_binding():
    # at unit coupling the ceiling exceeds the largest possible off-diagonal
    # magnitude 1/2, so the bound holds without forcing decoherence
    report = contrast_experiment(2, 8, seed=319, coupling_scale=1.0, n_samples=20)
    ceiling = (
        report.generic_sys.interaction_norm + report.generic_speed_mean
    ) / report.generic_gaps[0]
    assert ceiling > 0.5
    assert report.generic_offdiag_mean[0] <= ceiling + 1e-12
