"""Exact time evolution and time-averaged quantities.

Evolution is spectral (no integrator): conjugation by the exact propagator.
Infinite-time averages of the state use the dephasing map, which is exact
under non-degenerate energies; averages of nonlinear scalars (distance,
speed) are estimated by uniform random time sampling, which avoids aliasing
against the discrete frequency spectrum.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .bipartite import BipartiteSystem, partial_trace_B
from .errors import DegenerateSpectrumWarning, DimensionMismatch, InsufficientSamples
from .linalg import (
    DensityMatrix,
    SpectralDecomposition,
    matrix_exp_unitary,
    trace_distance,
)

DEGENERACY_GROUP_TOL = 1e-9
SPEED_ROUTE_TOL = 1e-10
DEFAULT_HORIZON_FACTOR = 1e3
DEFAULT_N_SAMPLES = 200


@dataclass(frozen=True)
class TrajectoryRecord:
    """One sampled time along a subsystem trajectory.

    ``offdiag`` holds |rho^S_kl| for the index pairs k < l of the H_S
    eigenbasis, in the order given by ``offdiag_pairs(d_S)``.
    """

    time: float
    rho_S: DensityMatrix
    speed: float
    distance_to_omega_S: float
    offdiag: np.ndarray


@dataclass(frozen=True)
class TimeAverageEstimate:
    mean: float
    std_error: float
    sample_count: int
    horizon: float


def offdiag_pairs(d: int) -> list[tuple[int, int]]:
    """Index pairs (k, l), k < l, in the fixed lexicographic order."""
    return list(combinations(range(d), 2))


def evolve(H_sd: SpectralDecomposition, rho0: DensityMatrix, t: float) -> DensityMatrix:
    """Conjugate the state by the exact propagator: U_t rho0 U_t^dagger."""
    if H_sd.dim != rho0.dim:
        raise DimensionMismatch(f"dims differ: H {H_sd.dim}, state {rho0.dim}")
    u = matrix_exp_unitary(H_sd, t)
    return DensityMatrix(u @ rho0.matrix @ u.conj().T)


def dephase(
    H_sd: SpectralDecomposition,
    rho0: DensityMatrix,
    degeneracy_tol: float = DEGENERACY_GROUP_TOL,
) -> DensityMatrix:
    """Infinite-time average of the evolving state: block-diagonal part in
    the energy eigenbasis, with eigenvalues grouped at ``degeneracy_tol``
    so numerically split degeneracies do not corrupt the average."""
    if H_sd.dim != rho0.dim:
        raise DimensionMismatch(f"dims differ: H {H_sd.dim}, state {rho0.dim}")
    lam = H_sd.eigenvalues
    v = H_sd.eigenvectors
    groups = np.concatenate([[0], np.cumsum(np.diff(lam) > degeneracy_tol)])
    if groups[-1] != lam.size - 1:
        warnings.warn(
            "degenerate energies grouped during dephasing",
            DegenerateSpectrumWarning,
            stacklevel=2,
        )
    r = v.conj().T @ rho0.matrix @ v
    mask = groups[:, None] == groups[None, :]
    out = v @ (r * mask) @ v.conj().T
    return DensityMatrix(out)


def effective_dimension(omega: DensityMatrix) -> float:
    """1 / Tr[omega^2]; between 1 (pure) and dim (maximally mixed)."""
    return 1.0 / omega.purity()


def subsystem_derivative(sys: BipartiteSystem, rho_t: DensityMatrix) -> np.ndarray:
    """d rho^S / dt at the given composite state.

    Computed along two routes that must agree: the full-Hamiltonian
    commutator traced over the bath, and the local form
    i[rho^S, H_S] + i Tr_B[rho, H_SB].  Disagreement beyond tolerance means
    corrupted inputs and raises.
    """
    if rho_t.dim != sys.dim:
        raise DimensionMismatch(f"state dim {rho_t.dim} != composite dim {sys.dim}")
    m = rho_t.matrix
    h = sys.assembled.matrix
    full_route = 1j * partial_trace_B(m @ h - h @ m, sys.d_S, sys.d_B)

    rho_s = partial_trace_B(m, sys.d_S, sys.d_B)
    h_s = sys.H_S.matrix
    h_sb = sys.H_SB.matrix
    local_route = 1j * (rho_s @ h_s - h_s @ rho_s) + 1j * partial_trace_B(
        m @ h_sb - h_sb @ m, sys.d_S, sys.d_B
    )

    gap = float(np.sum(np.abs(np.linalg.eigvalsh(full_route - local_route))))
    if gap > SPEED_ROUTE_TOL:
        raise RuntimeError(
            f"subsystem-derivative routes disagree: trace-norm gap {gap:.3e}"
        )
    return full_route


def subsystem_speed(sys: BipartiteSystem, rho_t: DensityMatrix) -> float:
    """Half the trace norm of d rho^S / dt."""
    deriv = subsystem_derivative(sys, rho_t)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(deriv))))


def default_horizon(sys: BipartiteSystem, factor: float = DEFAULT_HORIZON_FACTOR) -> float:
    """factor periods of the slowest beat: factor * 2 pi / min_gap."""
    return factor * 2.0 * np.pi / sys.min_gap


def sample_trajectory(
    sys: BipartiteSystem,
    rho0: DensityMatrix,
    horizon: float | None = None,
    n_samples: int = DEFAULT_N_SAMPLES,
    seed=0,
) -> list[TrajectoryRecord]:
    """Sample the subsystem trajectory at uniform random times in [0, horizon].

    Each record carries the reduced state, its speed, its trace distance to
    the dephased subsystem equilibrium, and the off-diagonal magnitudes in
    the H_S eigenbasis.
    """
    if n_samples < 2:
        raise InsufficientSamples("need at least 2 trajectory samples")
    if horizon is None:
        horizon = default_horizon(sys)
    if horizon <= 0:
        raise ValueError("horizon must be positive")

    sd = sys.assembled_sd
    omega_S = DensityMatrix(partial_trace_B(dephase(sd, rho0), sys.d_S, sys.d_B))
    basis = sys.hs_sd.eigenvectors
    pairs = offdiag_pairs(sys.d_S)

    rng = np.random.default_rng(seed)
    times = np.sort(rng.uniform(0.0, horizon, size=n_samples))

    records = []
    for t in times:
        rho_t = evolve(sd, rho0, float(t))
        rho_s = DensityMatrix(partial_trace_B(rho_t, sys.d_S, sys.d_B))
        speed = subsystem_speed(sys, rho_t)
        dist = trace_distance(rho_s, omega_S)
        in_basis = basis.conj().T @ rho_s.matrix @ basis
        off = np.array([abs(in_basis[k, l]) for k, l in pairs])
        records.append(
            TrajectoryRecord(
                time=float(t),
                rho_S=rho_s,
                speed=speed,
                distance_to_omega_S=dist,
                offdiag=off,
            )
        )
    return records


def time_average(records, field) -> TimeAverageEstimate:
    """Sample mean and standard error of a record field.

    ``field`` is an attribute name or a callable mapping a record to a float.
    """
    if len(records) < 2:
        raise InsufficientSamples("need at least 2 records")
    if callable(field):
        values = np.array([float(field(r)) for r in records])
    else:
        values = np.array([float(getattr(r, field)) for r in records])
    mean = float(np.mean(values))
    std_error = float(np.std(values, ddof=1) / np.sqrt(values.size))
    horizon = float(max(r.time for r in records))
    return TimeAverageEstimate(
        mean=mean, std_error=std_error, sample_count=len(records), horizon=horizon
    )
