"""Executable inequality checks for equilibration and decoherence.

The pairing functional (a maximum-weight matching over index pairs), the
commutator-norm lower bound it certifies, and the four bound checks tying
subsystem distance, effective dimension, subsystem speed, and off-diagonal
suppression together.  Bounds proven for all states are checked with fixed
numerical tolerances; Monte-Carlo bounds carry a three-standard-error slack.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .bipartite import BipartiteSystem, partial_trace_B, partial_trace_S, validate_gaps
from .dynamics import (
    TrajectoryRecord,
    dephase,
    effective_dimension,
    offdiag_pairs,
    sample_trajectory,
    subsystem_speed,
    time_average,
)
from .ensembles import haar_vector, trial_seed
from .errors import (
    AsymmetricWeights,
    DimensionMismatch,
    InvalidPairing,
    InvalidState,
    SubspaceTooLarge,
)
from .linalg import DensityMatrix, SpectralDecomposition, trace_norm

# Tail constant of the exponential bound on the probability of a low
# effective dimension: ln(2)^2 / (72 pi^3).
EXP_TAIL_CONSTANT = float(np.log(2.0) ** 2 / (72.0 * np.pi**3))

ENUMERATION_MAX_DIM = 10
LEMMA1_TOL = 1e-10
THEOREM4_TOL = 1e-9
WITNESS_TOL = 1e-10
STAT_SIGMA = 3.0


@dataclass(frozen=True)
class PairingResult:
    """A disjoint set of index pairs and the weight it collects."""

    pairs: tuple[tuple[int, int], ...]
    value: float
    method: str  # "exact_enumeration" | "blossom" | "greedy"


@dataclass(frozen=True)
class BoundReport:
    """One evaluated inequality.

    ``direction`` is "ge" when the claim is lhs >= rhs and "le" when it is
    lhs <= rhs; ``slack`` is the satisfied margin (lhs - rhs or rhs - lhs
    respectively), and ``satisfied`` means slack >= -tol with the tolerance
    recorded in ``context``.
    """

    lhs: float
    rhs: float
    satisfied: bool
    slack: float
    direction: str
    context: dict = field(default_factory=dict)


def _check_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise AsymmetricWeights(f"weight table must be square, got shape {w.shape}")
    if float(np.max(np.abs(w - w.T))) > 1e-12:
        raise AsymmetricWeights("weight table is not symmetric")
    if float(np.min(w)) < 0:
        raise AsymmetricWeights("weights must be nonnegative")
    if float(np.max(np.abs(np.diag(w)))) > 1e-12:
        raise AsymmetricWeights("weight table must have a zero diagonal")
    return w


def _enumerate_pairing(w: np.ndarray) -> tuple[tuple[tuple[int, int], ...], float]:
    """Exhaustive search over all partial pairings (first-found ties win)."""
    d = w.shape[0]
    best_value = 0.0
    best_pairs: tuple[tuple[int, int], ...] = ()

    def recurse(avail: tuple[int, ...], pairs, value):
        nonlocal best_value, best_pairs
        if value > best_value:
            best_value = value
            best_pairs = pairs
        if len(avail) < 2:
            return
        k, rest = avail[0], avail[1:]
        # either k stays unpaired ...
        recurse(rest, pairs, value)
        # ... or k pairs with some later index
        for i, l in enumerate(rest):
            recurse(rest[:i] + rest[i + 1 :], pairs + ((k, l),), value + w[k, l])

    recurse(tuple(range(d)), (), 0.0)
    return best_pairs, best_value


def _blossom_pairing(w: np.ndarray) -> tuple[tuple[tuple[int, int], ...], float]:
    g = nx.Graph()
    d = w.shape[0]
    g.add_nodes_from(range(d))
    for k in range(d):
        for l in range(k + 1, d):
            if w[k, l] > 0:
                g.add_edge(k, l, weight=w[k, l])
    mate = nx.max_weight_matching(g, maxcardinality=False)
    pairs = tuple(sorted(tuple(sorted(p)) for p in mate))
    value = float(sum(w[k, l] for k, l in pairs))
    return pairs, value


def max_pairing(weights) -> PairingResult:
    """Maximum-weight decomposition into non-overlapping index pairs.

    Pairs need not cover all indices; with nonnegative weights the optimum
    over partial pairings equals a maximum-weight matching.  Exhaustive
    enumeration up to dim 10, exact general matching (blossom) beyond.
    """
    w = _check_weights(weights)
    if w.shape[0] <= ENUMERATION_MAX_DIM:
        pairs, value = _enumerate_pairing(w)
        method = "exact_enumeration"
    else:
        pairs, value = _blossom_pairing(w)
        method = "blossom"
    return PairingResult(pairs=pairs, value=value, method=method)


def greedy_pairing(weights) -> PairingResult:
    """Greedy matching: a labeled lower bound, never used in assertions."""
    w = _check_weights(weights)
    d = w.shape[0]
    edges = sorted(
        ((w[k, l], k, l) for k in range(d) for l in range(k + 1, d)),
        key=lambda e: (-e[0], e[1], e[2]),
    )
    used: set[int] = set()
    pairs: list[tuple[int, int]] = []
    value = 0.0
    for wt, k, l in edges:
        if wt <= 0:
            break
        if k in used or l in used:
            continue
        used.update((k, l))
        pairs.append((k, l))
        value += wt
    return PairingResult(pairs=tuple(pairs), value=value, method="greedy")


def commutator_weights(rho: DensityMatrix, A_sd: SpectralDecomposition) -> np.ndarray:
    """Weight table |a_k - a_l| |rho_kl| in the observable's eigenbasis."""
    if rho.dim != A_sd.dim:
        raise DimensionMismatch(f"dims differ: state {rho.dim}, observable {A_sd.dim}")
    v = A_sd.eigenvectors
    r = v.conj().T @ rho.matrix @ v
    a = A_sd.eigenvalues
    w = np.abs(a[:, None] - a[None, :]) * np.abs(r)
    w = (w + w.T) / 2  # symmetrize away round-off
    np.fill_diagonal(w, 0.0)
    return w


def lemma1_lower_bound(
    rho: DensityMatrix, A_sd: SpectralDecomposition, tol: float = LEMMA1_TOL
) -> BoundReport:
    """Commutator-norm lower bound: trace_norm(i[rho, A]) >= 2 * max pairing
    of |a_k - a_l| |rho_kl|, itself >= twice the best single pair."""
    w = commutator_weights(rho, A_sd)
    pairing = max_pairing(w)
    rhs = 2.0 * pairing.value
    rhs_single = 2.0 * float(np.max(w)) if w.size else 0.0

    a_matrix = A_sd.reconstruct()
    comm = 1j * (rho.matrix @ a_matrix - a_matrix @ rho.matrix)
    lhs = trace_norm(comm)

    slack = lhs - rhs
    return BoundReport(
        lhs=lhs,
        rhs=rhs,
        satisfied=slack >= -tol,
        slack=slack,
        direction="ge",
        context={
            "rhs_single_pair": rhs_single,
            "pairing": pairing,
            "tol": tol,
        },
    )


def projector_witness(
    rho: DensityMatrix, A_sd: SpectralDecomposition, pairing: PairingResult
) -> float:
    """Constructive check of the pairing bound: 2 Tr[Pi i[rho, A]] for the
    rank-one-per-pair projector with maximizing phases.

    Never exceeds the trace norm of i[rho, A]; equals twice the pairing's
    collected weight when the phases are chosen to maximize.
    """
    d = rho.dim
    if rho.dim != A_sd.dim:
        raise DimensionMismatch(f"dims differ: state {rho.dim}, observable {A_sd.dim}")
    seen: set[int] = set()
    for k, l in pairing.pairs:
        if not (0 <= k < d and 0 <= l < d) or k == l:
            raise InvalidPairing(f"pair ({k}, {l}) is not a valid index pair")
        if k in seen or l in seen:
            raise InvalidPairing(f"index reused in pairing at pair ({k}, {l})")
        seen.update((k, l))

    v = A_sd.eigenvectors
    a = A_sd.eigenvalues
    r = v.conj().T @ rho.matrix @ v
    # In the observable eigenbasis the commutator is b_kl = i (a_l - a_k) r_kl.
    b = 1j * (a[None, :] - a[:, None]) * r

    total = 0.0
    for k, l in pairing.pairs:
        phi = -np.angle(b[k, l])
        # <pi|b|pi> for |pi> = (|k> + e^{i phi} |l>)/sqrt(2)
        total += 0.5 * float(
            (b[k, k] + b[l, l]).real + 2.0 * (np.exp(1j * phi) * b[k, l]).real
        )
    return 2.0 * total


def theorem4_profile_check(
    sys: BipartiteSystem,
    speed: float,
    offdiag: np.ndarray,
    tol: float = THEOREM4_TOL,
) -> BoundReport:
    """Pointwise decoherence bound from an already-computed subsystem profile.

    ``offdiag`` holds |rho^S_kl| in the H_S eigenbasis in offdiag_pairs
    order; the claim is interaction_norm + speed >= max pairing of
    |E^S_k - E^S_l| |rho^S_kl|.
    """
    d = sys.d_S
    pairs = offdiag_pairs(d)
    if len(offdiag) != len(pairs):
        raise DimensionMismatch(
            f"offdiag has {len(offdiag)} entries, expected {len(pairs)}"
        )
    energies = sys.hs_sd.eigenvalues
    w = np.zeros((d, d))
    for (k, l), mag in zip(pairs, offdiag):
        w[k, l] = w[l, k] = abs(energies[k] - energies[l]) * float(mag)
    pairing = max_pairing(w)
    lhs = sys.interaction_norm + speed
    rhs = pairing.value
    rhs_single = float(np.max(w)) if w.size else 0.0
    slack = lhs - rhs
    return BoundReport(
        lhs=lhs,
        rhs=rhs,
        satisfied=slack >= -tol,
        slack=slack,
        direction="ge",
        context={
            "rhs_single_pair": rhs_single,
            "pairing": pairing,
            "speed": speed,
            "interaction_norm": sys.interaction_norm,
            "tol": tol,
        },
    )


def theorem4_check(
    sys: BipartiteSystem, rho_t_full: DensityMatrix, tol: float = THEOREM4_TOL
) -> BoundReport:
    """Pointwise decoherence bound at one composite state: the interaction
    strength plus the subsystem speed dominates the gap-weighted
    off-diagonal pairing of the reduced state."""
    speed = subsystem_speed(sys, rho_t_full)
    rho_s = DensityMatrix(partial_trace_B(rho_t_full, sys.d_S, sys.d_B))
    basis = sys.hs_sd.eigenvectors
    in_basis = basis.conj().T @ rho_s.matrix @ basis
    off = np.array([abs(in_basis[k, l]) for k, l in offdiag_pairs(sys.d_S)])
    return theorem4_profile_check(sys, speed, off, tol=tol)


def theorem4_along_records(
    sys: BipartiteSystem, records: list[TrajectoryRecord], tol: float = THEOREM4_TOL
) -> list[BoundReport]:
    """Pointwise decoherence bound at every sampled time of a trajectory."""
    return [
        theorem4_profile_check(sys, r.speed, r.offdiag, tol=tol) for r in records
    ]


def _require_pure(rho0: DensityMatrix):
    purity = rho0.purity()
    if purity < 1.0 - 1e-10:
        raise InvalidState(f"initial state must be pure, purity {purity:.6f}")


def theorem1_check(
    sys: BipartiteSystem,
    rho0: DensityMatrix,
    records: list[TrajectoryRecord] | None = None,
    horizon: float | None = None,
    n_samples: int = 200,
    seed=0,
    stat_sigma: float = STAT_SIGMA,
) -> BoundReport:
    """Equilibration bound for pure initial states: the time-averaged trace
    distance of the subsystem from its dephased equilibrium is at most
    (1/2) sqrt(d_S / d_eff(omega^B)), itself below the weaker
    (1/2) sqrt(d_S^2 / d_eff(omega))."""
    _require_pure(rho0)
    gap_report = validate_gaps(sys.assembled_sd)
    if records is None:
        records = sample_trajectory(sys, rho0, horizon, n_samples, seed)
    est = time_average(records, "distance_to_omega_S")

    omega = dephase(sys.assembled_sd, rho0)
    omega_B = DensityMatrix(partial_trace_S(omega, sys.d_S, sys.d_B))
    d_eff_full = effective_dimension(omega)
    d_eff_bath = effective_dimension(omega_B)
    rhs_bath = 0.5 * np.sqrt(sys.d_S / d_eff_bath)
    rhs_full = 0.5 * np.sqrt(sys.d_S**2 / d_eff_full)

    tol = stat_sigma * est.std_error
    slack = rhs_bath - est.mean
    return BoundReport(
        lhs=est.mean,
        rhs=float(rhs_bath),
        satisfied=slack >= -tol,
        slack=float(slack),
        direction="le",
        context={
            "rhs_full": float(rhs_full),
            "bounds_ordered": bool(rhs_bath <= rhs_full + 1e-12),
            "d_eff_omega": d_eff_full,
            "d_eff_omega_B": d_eff_bath,
            "estimate": est,
            "tol": tol,
            "gap_report": gap_report,
        },
    )


@dataclass(frozen=True)
class Theorem2Report:
    """Monte-Carlo tally of effective dimensions of random subspace states."""

    d_R: int
    n_trials: int
    mean_deff: float
    mean_std_error: float
    frac_below_quarter: float
    frac_std_error: float
    bound_prob: float
    tail_constant: float
    tail_bound_vacuous: bool
    satisfied_mean: bool
    satisfied_tail: bool
    d_eff_samples: np.ndarray


def theorem2_check(
    d_R: int,
    H_sd: SpectralDecomposition,
    n_trials: int,
    seed=0,
    stat_sigma: float = STAT_SIGMA,
) -> Theorem2Report:
    """Effective-dimension genericity: states drawn Haar-uniformly from a
    d_R-dimensional energy subspace average d_eff >= d_R / 2, and
    d_eff < d_R / 4 happens with probability at most 2 e^{-C sqrt(d_R)}."""
    if d_R > H_sd.dim:
        raise SubspaceTooLarge(f"subspace dim {d_R} exceeds system dim {H_sd.dim}")
    if n_trials < 2:
        raise ValueError("need at least 2 trials")

    samples = np.empty(n_trials)
    for i in range(n_trials):
        psi = haar_vector(d_R, H_sd.dim, basis=None, seed=trial_seed(seed, i))
        c = psi[:d_R]
        # Dephased in the energy basis, a pure state's effective dimension
        # is the inverse participation ratio of its level populations.
        samples[i] = 1.0 / float(np.sum(np.abs(c) ** 4))

    mean = float(np.mean(samples))
    mean_se = float(np.std(samples, ddof=1) / np.sqrt(n_trials))
    below = samples < d_R / 4.0
    frac = float(np.mean(below))
    frac_se = float(np.sqrt(frac * (1.0 - frac) / n_trials))
    bound_prob = float(2.0 * np.exp(-EXP_TAIL_CONSTANT * np.sqrt(d_R)))

    return Theorem2Report(
        d_R=d_R,
        n_trials=n_trials,
        mean_deff=mean,
        mean_std_error=mean_se,
        frac_below_quarter=frac,
        frac_std_error=frac_se,
        bound_prob=bound_prob,
        tail_constant=EXP_TAIL_CONSTANT,
        tail_bound_vacuous=bound_prob > 1.0,
        satisfied_mean=mean >= d_R / 2.0 - stat_sigma * mean_se,
        satisfied_tail=frac <= min(1.0, bound_prob) + stat_sigma * frac_se,
        d_eff_samples=samples,
    )


def theorem3_check(
    sys: BipartiteSystem,
    rho0: DensityMatrix,
    records: list[TrajectoryRecord] | None = None,
    horizon: float | None = None,
    n_samples: int = 200,
    seed=0,
    stat_sigma: float = STAT_SIGMA,
) -> BoundReport:
    """Slow-subsystem bound: the time-averaged subsystem speed is at most
    opnorm(H_S (x) 1 + H_SB) sqrt(d_S^3 / d_eff(omega))."""
    if records is None:
        records = sample_trajectory(sys, rho0, horizon, n_samples, seed)
    est = time_average(records, "speed")

    omega = dephase(sys.assembled_sd, rho0)
    d_eff_full = effective_dimension(omega)
    prefactor = sys.local_plus_interaction_norm
    rhs = prefactor * np.sqrt(sys.d_S**3 / d_eff_full)

    tol = stat_sigma * est.std_error
    slack = float(rhs) - est.mean
    return BoundReport(
        lhs=est.mean,
        rhs=float(rhs),
        satisfied=slack >= -tol,
        slack=slack,
        direction="le",
        context={
            "prefactor": prefactor,
            "d_eff_omega": d_eff_full,
            "estimate": est,
            "tol": tol,
        },
    )
