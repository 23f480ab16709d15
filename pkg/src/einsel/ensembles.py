"""Seeded random instance generators.

GUE Hamiltonians normalized to unit operator norm (so a coupling scale is
directly an interaction strength), Haar-random pure states on energy
subspaces, and weakly coupled random bipartite systems.  Every generator is
a pure function of its seed: identical seeds give bit-identical output
regardless of call order or thread schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bipartite import BipartiteSystem, decompose
from .errors import DimensionMismatch, SubspaceTooLarge
from .linalg import (
    DensityMatrix,
    HermitianOperator,
    SpectralDecomposition,
    op_norm,
)

_SEED_MASK = (1 << 64) - 1


def trial_seed(seed: int, trial: int) -> int:
    """Derive the per-trial stream seed: seed XOR trial index (64-bit)."""
    return (int(seed) ^ int(trial)) & _SEED_MASK


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def gue(dim: int, seed) -> HermitianOperator:
    """GUE draw rescaled to unit operator norm.

    Off-diagonal entries are (x + iy)/sqrt(2) with x, y independent standard
    normals, diagonal entries standard normal.
    """
    if dim < 1:
        raise DimensionMismatch("dim must be at least 1")
    rng = _rng(seed)
    a = rng.standard_normal((dim, dim))
    b = rng.standard_normal((dim, dim))
    h = (a + 1j * b + (a - 1j * b).T) / 2
    norm = op_norm(HermitianOperator(h))
    if norm > 0:
        h = h / norm
    return HermitianOperator(h)


def haar_vector(
    dim_R: int,
    embed_dim: int,
    basis: SpectralDecomposition | None = None,
    seed=0,
) -> np.ndarray:
    """Haar-random unit vector supported on the first dim_R basis states.

    The default basis is computational; pass a spectral decomposition to
    sample from the span of its lowest dim_R eigenvectors.
    """
    if dim_R < 1:
        raise DimensionMismatch("subspace dimension must be at least 1")
    if dim_R > embed_dim:
        raise SubspaceTooLarge(f"subspace dim {dim_R} exceeds embedding dim {embed_dim}")
    if basis is not None and basis.dim != embed_dim:
        raise DimensionMismatch(
            f"basis dim {basis.dim} does not match embedding dim {embed_dim}"
        )
    rng = _rng(seed)
    z = rng.standard_normal(dim_R) + 1j * rng.standard_normal(dim_R)
    z /= np.linalg.norm(z)
    if basis is None:
        psi = np.zeros(embed_dim, dtype=complex)
        psi[:dim_R] = z
    else:
        psi = basis.eigenvectors[:, :dim_R] @ z
    return psi


def haar_state(
    dim_R: int,
    embed_dim: int,
    basis: SpectralDecomposition | None = None,
    seed=0,
) -> DensityMatrix:
    """Rank-one projector onto a Haar-random vector of a dim_R subspace."""
    psi = haar_vector(dim_R, embed_dim, basis, seed)
    return DensityMatrix(np.outer(psi, psi.conj()))


def haar_product_state(d_S: int, d_B: int, seed) -> DensityMatrix:
    """Product of independent Haar-random pure states on the two factors."""
    rng = _rng(seed)
    rho_s = haar_state(d_S, d_S, seed=rng)
    rho_b = haar_state(d_B, d_B, seed=rng)
    return DensityMatrix(np.kron(rho_s.matrix, rho_b.matrix))


def random_density(dim: int, seed) -> DensityMatrix:
    """Hilbert-Schmidt random mixed state: normalized W W^dagger."""
    rng = _rng(seed)
    w = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = w @ w.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_bipartite(
    d_S: int, d_B: int, coupling_scale: float, seed
) -> BipartiteSystem:
    """Weakly coupled random system: traceless GUE locals, scaled interaction.

    H_S and H_B are independent unit-norm GUE draws made traceless; the
    interaction is the doubly-partial-traceless component of a composite GUE
    draw, renormalized to unit operator norm and multiplied by the coupling
    scale.
    """
    if coupling_scale < 0:
        raise ValueError("coupling_scale must be nonnegative")
    rng = _rng(seed)
    h_s = _traceless(gue(d_S, rng))
    h_b = _traceless(gue(d_B, rng))
    d = d_S * d_B
    raw = decompose(gue(d, rng), d_S, d_B).H_SB.matrix
    norm = op_norm(HermitianOperator(raw)) if d > 1 else 0.0
    if norm > 0 and coupling_scale > 0:
        h_sb = raw * (coupling_scale / norm)
    else:
        h_sb = np.zeros((d, d), dtype=complex)
    return BipartiteSystem(
        d_S=d_S,
        d_B=d_B,
        h0_coeff=0.0,
        H_S=h_s,
        H_B=h_b,
        H_SB=HermitianOperator(h_sb),
    )


def _traceless(op: HermitianOperator) -> HermitianOperator:
    m = op.matrix
    return HermitianOperator(m - (np.trace(m).real / op.dim) * np.eye(op.dim))


@dataclass(frozen=True)
class RandomSpec:
    """A reproducible description of one random draw."""

    seed: int
    kind: str  # "gue_hamiltonian" | "haar_state" | "product_state"
    dims: tuple[int, ...]
    coupling_scale: float = 0.0

    def __post_init__(self):
        if self.kind not in ("gue_hamiltonian", "haar_state", "product_state"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.coupling_scale < 0:
            raise ValueError("coupling_scale must be nonnegative")
        if any(d < 1 for d in self.dims):
            raise DimensionMismatch("all dims must be at least 1")

    def sample(self):
        if self.kind == "gue_hamiltonian":
            (dim,) = self.dims
            return gue(dim, self.seed)
        if self.kind == "haar_state":
            dim_R, embed = self.dims if len(self.dims) == 2 else (self.dims[0],) * 2
            return haar_state(dim_R, embed, seed=self.seed)
        d_S, d_B = self.dims
        return haar_product_state(d_S, d_B, self.seed)
