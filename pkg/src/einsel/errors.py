"""Exception and warning types shared across the package."""


class EinselError(Exception):
    """Base class for every error raised by this package."""


class NonHermitianInput(EinselError):
    """A matrix required to be Hermitian violates the construction tolerance."""


class InvalidState(EinselError):
    """A density matrix violates unit trace or positive semidefiniteness."""


class DimensionMismatch(EinselError):
    """Operands have incompatible dimensions."""


class SubspaceTooLarge(EinselError):
    """A requested subspace dimension exceeds the embedding dimension."""


class InsufficientSamples(EinselError):
    """A statistical estimator was given fewer than two samples."""


class AsymmetricWeights(EinselError):
    """A pairing weight table is not symmetric, nonnegative, and hollow."""


class InvalidPairing(EinselError):
    """A pairing reuses an index or references one outside the table."""


class IndexOutOfRange(EinselError):
    """A pointer-state index lies outside [0, d_S)."""


class ConfigInvalid(EinselError):
    """An experiment configuration violates its constraints."""


class ManifestMissing(EinselError):
    """The manifest required for a replay does not exist."""


class DegenerateSpectrumWarning(UserWarning):
    """Eigenvalues had to be grouped as degenerate; results use grouped projectors."""


class DegenerateGapsWarning(UserWarning):
    """A spectrum failed the non-degenerate-gaps diagnostic."""


class VersionMismatchWarning(UserWarning):
    """A replayed manifest was produced by a different package version."""
