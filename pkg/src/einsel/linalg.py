"""Dense complex matrix algebra for finite-dimensional quantum systems.

Certified operator types (Hermitian operators, density matrices, spectral
decompositions) plus the norms, distances, and matrix functions everything
else is built from.  All values are immutable after construction; every
function here is pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidState, NonHermitianInput

# Absolute tolerances.  Energies are order one by construction (random
# ensembles are normalized to unit operator norm), so absolute and relative
# tolerances coincide in practice.
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
UNITARITY_TOL = 1e-10


def as_square_array(matrix) -> np.ndarray:
    """Coerce to a square complex ndarray (the working matrix representation)."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def hermiticity_defect(matrix) -> float:
    """Largest entrywise deviation of a matrix from its conjugate transpose."""
    m = np.asarray(matrix)
    return float(np.max(np.abs(m - m.conj().T)))


def _frozen(m: np.ndarray) -> np.ndarray:
    out = np.array(m, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class HermitianOperator:
    """A dense Hermitian matrix, certified entrywise at construction."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_square_array(self.matrix)
        defect = hermiticity_defect(m)
        if defect > HERMITICITY_TOL:
            raise NonHermitianInput(
                f"matrix is not Hermitian: defect {defect:.3e} > {HERMITICITY_TOL:.0e}"
            )
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DensityMatrix:
    """A Hermitian, unit-trace, positive-semidefinite operator."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_square_array(self.matrix)
        defect = hermiticity_defect(m)
        if defect > HERMITICITY_TOL:
            raise NonHermitianInput(
                f"state is not Hermitian: defect {defect:.3e} > {HERMITICITY_TOL:.0e}"
            )
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidState(f"state trace {tr} deviates from 1 beyond {TRACE_TOL:.0e}")
        lo = float(np.linalg.eigvalsh(m)[0])
        if lo < -PSD_TOL:
            raise InvalidState(f"state has eigenvalue {lo:.3e} below -{PSD_TOL:.0e}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        """Tr[rho^2]; 1 for pure states, 1/dim for the maximally mixed state."""
        return float(np.vdot(self.matrix, self.matrix).real)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues and an orthonormal eigenvector matrix (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        v = as_square_array(self.eigenvectors)
        if lam.ndim != 1 or lam.size != v.shape[0]:
            raise DimensionMismatch(
                f"{lam.size} eigenvalues for eigenvector matrix of shape {v.shape}"
            )
        if np.any(np.diff(lam) < 0):
            raise ValueError("eigenvalues must be ascending")
        defect = float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[0]))))
        if defect > UNITARITY_TOL:
            raise ValueError(f"eigenvector matrix is not unitary: defect {defect:.3e}")
        lam = np.array(lam, copy=True)
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "eigenvectors", _frozen(v))

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        """V diag(lambda) V^dagger."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _hermitian_payload(op) -> np.ndarray:
    """Extract the matrix of a certified operator, or certify a raw array."""
    if isinstance(op, (HermitianOperator, DensityMatrix)):
        return op.matrix
    m = as_square_array(op)
    defect = hermiticity_defect(m)
    if defect > HERMITICITY_TOL:
        raise NonHermitianInput(f"matrix is not Hermitian: defect {defect:.3e}")
    return m


def eigh(op) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian operator, eigenvalues ascending."""
    m = _hermitian_payload(op)
    lam, v = np.linalg.eigh(m)
    return SpectralDecomposition(lam, v)


def trace_norm(op) -> float:
    """Sum of absolute eigenvalues of a Hermitian operator."""
    m = _hermitian_payload(op)
    return float(np.sum(np.abs(np.linalg.eigvalsh(m))))


def op_norm(op) -> float:
    """Spectral norm max|lambda| of a Hermitian operator."""
    m = _hermitian_payload(op)
    lam = np.linalg.eigvalsh(m)
    return float(max(abs(lam[0]), abs(lam[-1])))


def trace_distance(a, b) -> float:
    """Half the trace norm of the difference of two states; in [0, 1]."""
    a = a if isinstance(a, DensityMatrix) else DensityMatrix(a)
    b = b if isinstance(b, DensityMatrix) else DensityMatrix(b)
    if a.dim != b.dim:
        raise DimensionMismatch(f"state dims differ: {a.dim} vs {b.dim}")
    diff = a.matrix - b.matrix
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def matrix_exp_unitary(sd: SpectralDecomposition, t: float) -> np.ndarray:
    """The unitary V diag(e^{-i lambda t}) V^dagger generated by a spectrum."""
    v = sd.eigenvectors
    phases = np.exp(-1j * sd.eigenvalues * t)
    return (v * phases) @ v.conj().T


def commutator(a, b) -> np.ndarray:
    """ab - ba for a state-or-operator a and a Hermitian operator b."""
    ma = _hermitian_payload(a)
    mb = _hermitian_payload(b)
    if ma.shape != mb.shape:
        raise DimensionMismatch(f"operand dims differ: {ma.shape[0]} vs {mb.shape[0]}")
    return ma @ mb - mb @ ma
