"""Finite-dimensional EPR pairs: conjugate-basis re-expansion, bilateral
scattering and perfectly correlated conjugate measurements.

A pair is the d×d amplitude matrix ``c`` of Σ c_jk |j⟩₁|k⟩₂. Local operators
act as ``(u1 ⊗ u2) → u1 @ c @ u2.T``.
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import expm, qr

from magicbullet.errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    PreconditionError,
    ValidationError,
)
from magicbullet.types import Side
from magicbullet.utils import trial_generator

logger = logging.getLogger(__name__)

NORM_TOL = 1e-12
UNITARY_TOL = 1e-10
ORTHONORMAL_TOL = 1e-10
# Joint probabilities below this are sampled as exactly zero.
PROBABILITY_FLOOR = 1e-15


def _check_dim(d: int) -> None:
    if int(d) != d or d < 1:
        raise InvalidDimensionError(f"dimension must be a positive integer, got {d}")


@dataclass(frozen=True)
class EntangledPair:
    dim: int
    amps: NDArray[np.complex128] = field(repr=False)

    def __post_init__(self):
        _check_dim(self.dim)
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"amplitudes of shape {amps.shape} do not match dimension {self.dim}"
            )
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"pair is not normalized: Σ|c|² = {norm!r}")
        object.__setattr__(self, "amps", amps)

    @property
    def schmidt_weights(self) -> NDArray[np.float64]:
        return np.linalg.svd(self.amps, compute_uv=False) ** 2


@dataclass(frozen=True)
class ScatteringMatrix:
    dim: int
    u: NDArray[np.complex128] = field(repr=False)

    def __post_init__(self):
        _check_dim(self.dim)
        u = np.asarray(self.u, dtype=complex)
        if u.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"matrix of shape {u.shape} does not match dimension {self.dim}"
            )
        if not np.allclose(u.conj().T @ u, np.eye(self.dim), rtol=0, atol=UNITARY_TOL):
            raise ValidationError("scattering matrix is not unitary")
        object.__setattr__(self, "u", u)

    @classmethod
    def identity(cls, d: int) -> "ScatteringMatrix":
        return cls(dim=d, u=np.eye(d, dtype=complex))


@dataclass(frozen=True)
class ProjectiveMeasurement:
    """Rank-1 projective measurement; ``basis[z]`` is the vector φ_z.

    ``labels[z]`` is the eigenvalue reported for outcome z. Degenerate
    observables repeat labels, see :func:`group_outcomes`.
    """

    dim: int
    basis: NDArray[np.complex128] = field(repr=False)
    labels: tuple[float, ...] = ()

    def __post_init__(self):
        _check_dim(self.dim)
        basis = np.asarray(self.basis, dtype=complex)
        if basis.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"basis of shape {basis.shape} does not match dimension {self.dim}"
            )
        _require_orthonormal(basis)
        object.__setattr__(self, "basis", basis)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(float(z) for z in range(self.dim)))
        elif len(self.labels) != self.dim:
            raise DimensionMismatchError("one label per basis vector is required")

    @classmethod
    def computational(cls, d: int) -> "ProjectiveMeasurement":
        return cls(dim=d, basis=np.eye(d, dtype=complex))

    @classmethod
    def from_hermitian(cls, op: ArrayLike) -> "ProjectiveMeasurement":
        """Eigenbasis of a Hermitian operator Ô = Σ o P̂_o, labelled by o."""
        op = np.asarray(op, dtype=complex)
        if op.ndim != 2 or op.shape[0] != op.shape[1]:
            raise DimensionMismatchError("operator must be square")
        if not np.allclose(op, op.conj().T, rtol=0, atol=ORTHONORMAL_TOL):
            raise PreconditionError("operator is not Hermitian")
        values, vectors = np.linalg.eigh(op)
        return cls(
            dim=op.shape[0],
            basis=vectors.T,
            labels=tuple(float(v) for v in values),
        )

    def conjugate(self) -> "ProjectiveMeasurement":
        """The conjugate observable Ô*: same labels on the vectors φ_z*."""
        return ProjectiveMeasurement(
            dim=self.dim, basis=self.basis.conj(), labels=self.labels
        )


def _require_orthonormal(basis: NDArray[np.complex128]) -> None:
    gram = basis.conj() @ basis.T
    if not np.allclose(gram, np.eye(basis.shape[0]), rtol=0, atol=ORTHONORMAL_TOL):
        raise PreconditionError("basis vectors are not orthonormal")


def make_maximally_entangled(d: int) -> EntangledPair:
    _check_dim(d)
    return EntangledPair(dim=d, amps=np.eye(d, dtype=complex) / np.sqrt(d))


def random_unitary(d: int, seed: int) -> ScatteringMatrix:
    """Haar-random unitary from the QR factorization of a complex Gaussian matrix."""
    _check_dim(d)
    rng = trial_generator(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = qr(z)
    # fix the phases of R's diagonal so the distribution is exactly Haar
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return ScatteringMatrix(dim=d, u=q * phases)


def random_basis(d: int, seed: int) -> ProjectiveMeasurement:
    u = random_unitary(d, seed).u
    return ProjectiveMeasurement(dim=d, basis=u.T)


def time_reversal_invariant_unitary(d: int, t: float, seed: int) -> ScatteringMatrix:
    """exp(-iHt) for a seeded real symmetric H, so that u* = u†."""
    _check_dim(d)
    rng = trial_generator(seed)
    a = rng.standard_normal((d, d))
    hamiltonian = (a + a.T) / 2
    return ScatteringMatrix(dim=d, u=expm(-1j * t * hamiltonian))


def conjugate_pair_basis(
    pair: EntangledPair, basis: ArrayLike
) -> NDArray[np.complex128]:
    """
    Overlaps M_zw = √d ⟨φ_z|₁⟨φ_w*|₂ ψ⟩ of a maximally entangled pair.

    The maximally entangled state re-expands in {φ_z}₁ ⊗ {φ_z*}₂ with equal
    Schmidt weights, so M is the identity for any orthonormal basis.
    """
    basis = np.asarray(basis, dtype=complex)
    if basis.shape != (pair.dim, pair.dim):
        raise DimensionMismatchError(
            f"basis of shape {basis.shape} does not match dimension {pair.dim}"
        )
    _require_orthonormal(basis)
    if not np.allclose(
        pair.schmidt_weights, 1.0 / pair.dim, rtol=0, atol=ORTHONORMAL_TOL
    ):
        raise PreconditionError("pair is not maximally entangled")
    return np.sqrt(pair.dim) * (basis.conj() @ pair.amps @ basis.T)


def apply_local(
    pair: EntangledPair, u1: ScatteringMatrix, u2: ScatteringMatrix
) -> EntangledPair:
    if u1.dim != pair.dim or u2.dim != pair.dim:
        raise DimensionMismatchError(
            f"operators of dimension {u1.dim}, {u2.dim} on a pair of dimension {pair.dim}"
        )
    amps = u1.u @ pair.amps @ u2.u.T
    # unitaries preserve the norm; renormalize away accumulated round-off
    amps = amps / np.sqrt(np.sum(np.abs(amps) ** 2))
    return EntangledPair(dim=pair.dim, amps=amps)


def apply_bilateral_scattering(pair: EntangledPair, s: ScatteringMatrix) -> EntangledPair:
    """Scatter particle 1 with s and particle 2 with the conjugate s*."""
    if s.dim != pair.dim:
        raise DimensionMismatchError(
            f"scattering matrix of dimension {s.dim} on a pair of dimension {pair.dim}"
        )
    return apply_local(pair, s, ScatteringMatrix(dim=s.dim, u=s.u.conj()))


def joint_probabilities(
    pair: EntangledPair, m: ProjectiveMeasurement
) -> NDArray[np.float64]:
    """P[z, w]: particle 1 found in φ_z and particle 2 in φ_w*."""
    if m.dim != pair.dim:
        raise DimensionMismatchError(
            f"measurement of dimension {m.dim} on a pair of dimension {pair.dim}"
        )
    overlaps = m.basis.conj() @ pair.amps @ m.basis.T
    return np.abs(overlaps) ** 2


def measure_correlated(
    pair: EntangledPair, m: ProjectiveMeasurement, trials: int, seed: int
) -> NDArray[np.int64]:
    """
    Sample joint outcomes, particle 1 in ``m`` and particle 2 in ``m.conjugate()``.

    Returns an integer array of shape (trials, 2) holding basis indices.
    """
    if trials < 0:
        raise ValidationError(f"trials must be non-negative, got {trials}")
    if trials == 0:
        return np.empty((0, 2), dtype=np.int64)
    probs = joint_probabilities(pair, m).ravel()
    probs = np.where(probs < PROBABILITY_FLOOR, 0.0, probs)
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    draws = trial_generator(seed).random(trials)
    # outcome is the first index whose cumulative sum is strictly above the draw
    flat = np.searchsorted(cdf, draws, side="right")
    flat = np.minimum(flat, probs.size - 1)
    outcomes = np.column_stack(np.divmod(flat, pair.dim)).astype(np.int64)
    logger.debug(
        "sampled %d joint outcomes in dimension %d, match fraction %.6f",
        trials,
        pair.dim,
        float(np.mean(outcomes[:, 0] == outcomes[:, 1])),
    )
    return outcomes


def group_outcomes(
    outcomes: NDArray[np.int64], labels: Sequence[float]
) -> NDArray[np.float64]:
    """Map basis indices to eigenvalue labels; repeated labels coarse-grain."""
    return np.asarray(labels, dtype=float)[outcomes]


def phase_conjugate(pair: EntangledPair, side: Side | int) -> EntangledPair:
    """
    Conjugate the phase of one particle in the real expansion basis.

    The expansion basis is real, so conjugating either particle conjugates
    every amplitude c_jk; the result is the same for both sides and ``side``
    is only checked.
    """
    try:
        Side(side)
    except ValueError:
        raise ValidationError(f"side must be 1 or 2, got {side!r}")
    return EntangledPair(dim=pair.dim, amps=pair.amps.conj())
