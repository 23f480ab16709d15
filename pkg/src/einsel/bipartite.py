"""Tensor-product structure of a subsystem-bath split.

Kronecker composition, partial traces, the unique traceless four-part split
of a composite Hamiltonian (identity part, local parts, interaction), and
the non-degenerate-gaps diagnostic.  The composite index convention is
subsystem-major throughout: composite = s * d_B + b, which is exactly what
``np.kron(on_S, on_B)`` produces.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateGapsWarning, DimensionMismatch
from .linalg import (
    HermitianOperator,
    SpectralDecomposition,
    as_square_array,
    eigh,
    op_norm,
)

TRACELESS_TOL = 1e-10
GAP_EXHAUSTIVE_MAX_DIM = 64
GAP_RANDOM_SAMPLES = 10**6


def kron(a, b) -> HermitianOperator:
    """Kronecker product of two Hermitian operators (subsystem-major order)."""
    ma = a.matrix if isinstance(a, HermitianOperator) else as_square_array(a)
    mb = b.matrix if isinstance(b, HermitianOperator) else as_square_array(b)
    return HermitianOperator(np.kron(ma, mb))


def _composite_payload(rho, d_S: int, d_B: int) -> np.ndarray:
    m = rho.matrix if hasattr(rho, "matrix") else as_square_array(rho)
    if m.shape[0] != d_S * d_B:
        raise DimensionMismatch(
            f"matrix of dim {m.shape[0]} does not factor as {d_S} x {d_B}"
        )
    return m


def partial_trace_B(rho, d_S: int, d_B: int) -> np.ndarray:
    """Trace out the bath factor, leaving a d_S x d_S matrix."""
    m = _composite_payload(rho, d_S, d_B)
    return np.einsum("sbtb->st", m.reshape(d_S, d_B, d_S, d_B))


def partial_trace_S(rho, d_S: int, d_B: int) -> np.ndarray:
    """Trace out the subsystem factor, leaving a d_B x d_B matrix."""
    m = _composite_payload(rho, d_S, d_B)
    return np.einsum("sbsc->bc", m.reshape(d_S, d_B, d_S, d_B))


@dataclass(frozen=True)
class BipartiteSystem:
    """A composite Hamiltonian in its unique traceless four-part split.

    ``h0_coeff`` multiplies the identity; H_S and H_B are traceless local
    terms; H_SB is the interaction, traceless and with vanishing partial
    trace over each factor (the uniqueness condition of the split).
    """

    d_S: int
    d_B: int
    h0_coeff: float
    H_S: HermitianOperator
    H_B: HermitianOperator
    H_SB: HermitianOperator

    def __post_init__(self):
        if self.d_S < 1 or self.d_B < 1:
            raise DimensionMismatch("factor dimensions must be at least 1")
        if self.H_S.dim != self.d_S or self.H_B.dim != self.d_B:
            raise DimensionMismatch("local term dimensions do not match the split")
        if self.H_SB.dim != self.d_S * self.d_B:
            raise DimensionMismatch("interaction dimension does not match the split")
        for name, part in (("H_S", self.H_S), ("H_B", self.H_B), ("H_SB", self.H_SB)):
            tr = abs(complex(np.trace(part.matrix)))
            if tr > TRACELESS_TOL:
                raise ValueError(f"{name} is not traceless: |trace| = {tr:.3e}")
        for name, red in (
            ("Tr_B", partial_trace_B(self.H_SB, self.d_S, self.d_B)),
            ("Tr_S", partial_trace_S(self.H_SB, self.d_S, self.d_B)),
        ):
            worst = float(np.max(np.abs(red)))
            if worst > TRACELESS_TOL:
                raise ValueError(
                    f"{name}[H_SB] does not vanish: max entry {worst:.3e}"
                )

    @property
    def dim(self) -> int:
        return self.d_S * self.d_B

    # Derived objects are cached: instances are immutable and the spectral
    # data is reused by every trajectory sample.
    @cached_property
    def assembled(self) -> HermitianOperator:
        return assemble(self)

    @cached_property
    def assembled_sd(self) -> SpectralDecomposition:
        return eigh(self.assembled)

    @cached_property
    def hs_sd(self) -> SpectralDecomposition:
        return eigh(self.H_S)

    @cached_property
    def interaction_norm(self) -> float:
        return op_norm(self.H_SB)

    @cached_property
    def local_plus_interaction_norm(self) -> float:
        """Spectral norm of H_S (x) 1 + H_SB."""
        combined = np.kron(self.H_S.matrix, np.eye(self.d_B)) + self.H_SB.matrix
        return op_norm(HermitianOperator(combined))

    @cached_property
    def min_gap(self) -> float:
        """Smallest spacing between adjacent energies of the full Hamiltonian."""
        diffs = np.diff(self.assembled_sd.eigenvalues)
        positive = diffs[diffs > 0]
        if positive.size == 0:
            raise ValueError("fully degenerate spectrum has no energy gap")
        return float(np.min(positive))


def assemble(sys: BipartiteSystem) -> HermitianOperator:
    """h0 * 1 + H_S (x) 1 + 1 (x) H_B + H_SB on the composite space."""
    d = sys.dim
    total = (
        sys.h0_coeff * np.eye(d)
        + np.kron(sys.H_S.matrix, np.eye(sys.d_B))
        + np.kron(np.eye(sys.d_S), sys.H_B.matrix)
        + sys.H_SB.matrix
    )
    return HermitianOperator(total)


def decompose(H, d_S: int, d_B: int) -> BipartiteSystem:
    """Split a composite Hermitian operator into its unique traceless parts."""
    m = H.matrix if isinstance(H, HermitianOperator) else HermitianOperator(H).matrix
    if m.shape[0] != d_S * d_B:
        raise DimensionMismatch(
            f"operator of dim {m.shape[0]} does not factor as {d_S} x {d_B}"
        )
    h0 = float(np.trace(m).real) / (d_S * d_B)
    h_s = partial_trace_B(m, d_S, d_B) / d_B - h0 * np.eye(d_S)
    h_b = partial_trace_S(m, d_S, d_B) / d_S - h0 * np.eye(d_B)
    h_sb = (
        m
        - h0 * np.eye(d_S * d_B)
        - np.kron(h_s, np.eye(d_B))
        - np.kron(np.eye(d_S), h_b)
    )
    return BipartiteSystem(
        d_S=d_S,
        d_B=d_B,
        h0_coeff=h0,
        H_S=HermitianOperator(h_s),
        H_B=HermitianOperator(h_b),
        H_SB=HermitianOperator(h_sb),
    )


@dataclass(frozen=True)
class GapReport:
    """Outcome of the non-degenerate-gaps diagnostic."""

    ok: bool
    worst_pair: tuple[tuple[int, int], tuple[int, int]]
    min_gap_difference: float
    tol: float
    mode: str  # "exhaustive" or "randomized"


def validate_gaps(
    sd: SpectralDecomposition,
    tol: float | None = None,
    n_samples: int = GAP_RANDOM_SAMPLES,
    seed: int = 0,
) -> GapReport:
    """Check that no two distinct level pairs share an energy difference.

    Exhaustive up to dim 64 (every ordered pair of distinct levels, plus the
    zero gap of the coincident-index class); beyond that, a seeded randomized
    mode samples pair-of-pairs.  Degeneracy findings warn, never raise: the
    downstream bounds are robust against some degenerate gaps.
    """
    lam = sd.eigenvalues
    d = lam.size
    if tol is None:
        spread = float(lam[-1] - lam[0])
        tol = 1e-9 * (spread if spread > 0 else 1.0)

    if d < 2:
        return GapReport(True, ((0, 0), (0, 0)), np.inf, tol, "exhaustive")

    if d <= GAP_EXHAUSTIVE_MAX_DIM:
        ks, ls = np.nonzero(~np.eye(d, dtype=bool))
        gaps = lam[ks] - lam[ls]
        # One sentinel zero stands in for the whole k == l class: equality
        # inside that class is the allowed trivial case, equality of any
        # other gap with zero means degenerate levels.
        values = np.concatenate([gaps, [0.0]])
        pair_k = np.concatenate([ks, [0]])
        pair_l = np.concatenate([ls, [0]])
        order = np.argsort(values, kind="stable")
        sorted_vals = values[order]
        diffs = np.diff(sorted_vals)
        i = int(np.argmin(diffs))
        min_diff = float(diffs[i])
        a, b = order[i], order[i + 1]
        worst = (
            (int(pair_k[a]), int(pair_l[a])),
            (int(pair_k[b]), int(pair_l[b])),
        )
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, d, size=(n_samples, 4))
        k, l, m, n = idx.T
        trivial = ((k == l) & (m == n)) | ((k == m) & (l == n))
        k, l, m, n = k[~trivial], l[~trivial], m[~trivial], n[~trivial]
        diffs = np.abs((lam[k] - lam[l]) - (lam[m] - lam[n]))
        i = int(np.argmin(diffs))
        min_diff = float(diffs[i])
        worst = ((int(k[i]), int(l[i])), (int(m[i]), int(n[i])))
        mode = "randomized"

    ok = min_diff > tol
    if not ok:
        warnings.warn(
            f"degenerate energy gaps: pairs {worst[0]} and {worst[1]} differ "
            f"by {min_diff:.3e} <= tol {tol:.3e}",
            DegenerateGapsWarning,
            stacklevel=2,
        )
    return GapReport(ok, worst, min_diff, tol, mode)
