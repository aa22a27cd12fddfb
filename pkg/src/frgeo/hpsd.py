"""Dense Hermitian matrix algebra: decompositions, matrix functions, PSD
projections and the complex-to-real embedding.

Every matrix function here runs through a single eigendecomposition backend
(`numpy.linalg.eigh`) so that the tolerance policy lives in one place:

* eigenvalues in ``[-1e-10, 0)`` are clamped to zero when validating PSD-ness,
* eigenvalues at or below ``1e-14`` make a matrix "singular" for log-det and
  inversion purposes,
* eigenvalues below ``1e-12 * lambda_max`` count as zero in rank decisions.

All functions are pure and operate on immutable inputs.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    NotHermitianError,
    NotPSDError,
    SingularMatrixError,
)

HERMITIAN_ATOL = 1e-12
PSD_CLAMP_FLOOR = -1e-10
SINGULAR_FLOOR = 1e-14
RANK_RTOL = 1e-12


class EigenDecomposition(NamedTuple):
    """Spectral factorization ``a = R diag(w) R*`` with ``w`` ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_part(a: np.ndarray) -> np.ndarray:
    """Hermitian part ``(a + a*) / 2`` (batched over leading axes)."""
    return (a + np.conj(np.swapaxes(a, -1, -2))) / 2.0


def check_hermitian(a: np.ndarray, atol: float = HERMITIAN_ATOL, label: str = "matrix") -> None:
    """Raise :class:`NotHermitianError` naming the worst offending entry."""
    dev = np.abs(a - np.conj(np.swapaxes(a, -1, -2)))
    worst = float(dev.max()) if dev.size else 0.0
    if worst > atol:
        idx = tuple(int(i) for i in np.unravel_index(int(np.argmax(dev)), dev.shape))
        raise NotHermitianError(
            f"{label} is not Hermitian: entry {idx} deviates by {worst:.3e} (tolerance {atol:.1e})"
        )


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape or a.shape[-1] != a.shape[-2]:
        raise DimensionMismatchError(f"incompatible shapes {a.shape} and {b.shape}")


def frobenius_inner(a: np.ndarray, b: np.ndarray) -> float:
    """Real Frobenius product ``Re tr(a* b)``."""
    _check_same_dim(a, b)
    return float(np.real(np.vdot(a, b)))


def frobenius_norm(a: np.ndarray) -> float:
    """Frobenius norm ``|a|_2``."""
    return float(np.linalg.norm(a))


def eigendecomposition(a: np.ndarray) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix (ascending eigenvalues)."""
    w, v = np.linalg.eigh(a)
    return EigenDecomposition(w, v)


def psd_rank(a: np.ndarray) -> int:
    """Rank of a PSD matrix, counting eigenvalues above ``1e-12 * lambda_max``."""
    w = np.linalg.eigvalsh(a)
    lam_max = float(w[-1])
    if lam_max <= 0.0:
        return 0
    return int(np.count_nonzero(w > RANK_RTOL * lam_max))


def is_positive_definite(a: np.ndarray) -> bool:
    """True when no eigenvalue falls below ``1e-12 * lambda_max``."""
    return psd_rank(a) == a.shape[-1]


def clamp_psd(a: np.ndarray, floor: float = PSD_CLAMP_FLOOR) -> np.ndarray:
    """Validate PSD-ness within ``floor`` and clamp slightly negative
    eigenvalues to zero.

    Optimizer iterates routinely drift a hair below PSD, hence the clamping
    rather than outright rejection. Raises :class:`NotPSDError` below the
    floor.
    """
    w, v = np.linalg.eigh(a)
    lam_min = float(w.min()) if w.size else 0.0
    if lam_min < floor:
        raise NotPSDError(f"minimum eigenvalue {lam_min:.3e} below PSD floor {floor:.1e}")
    if lam_min >= 0.0:
        return a
    w = np.clip(w, 0.0, None)
    return hermitian_part((v * w) @ np.conj(v.T))


def zero_floor(w: np.ndarray) -> np.ndarray:
    """Clamp negatives and sub-rank-tolerance eigenvalues to exact zero.

    The square root has infinite slope at zero, so eigenvalues at the
    round-off noise level (|w| ~ eps * lam_max) would otherwise contribute
    sqrt(noise) ~ 1e-8 errors; flooring them keeps matrix functions accurate
    on the cone boundary.
    """
    w = np.clip(w, 0.0, None)
    lam_max = w.max(axis=-1, keepdims=True)
    return np.where(w < RANK_RTOL * lam_max, 0.0, w)


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    """Principal square root of a PSD matrix via its eigendecomposition."""
    w, v = np.linalg.eigh(a)
    lam_min = float(w.min()) if w.size else 0.0
    if lam_min < PSD_CLAMP_FLOOR:
        raise NotPSDError(f"minimum eigenvalue {lam_min:.3e} below PSD floor {PSD_CLAMP_FLOOR:.1e}")
    return hermitian_part((v * np.sqrt(zero_floor(w))) @ np.conj(v.T))


def logdet(a: np.ndarray) -> float:
    """Sum of log eigenvalues of a positive-definite matrix.

    Raises :class:`SingularMatrixError` when the minimum eigenvalue is at or
    below 1e-14, so callers can map singularity to an infinite entropy.
    """
    w = np.linalg.eigvalsh(a)
    if float(w.min()) <= SINGULAR_FLOOR:
        raise SingularMatrixError(f"minimum eigenvalue {float(w.min()):.3e} at or below {SINGULAR_FLOOR:.1e}")
    return float(np.sum(np.log(w)))


def spd_inverse(a: np.ndarray) -> np.ndarray:
    """Inverse of a positive-definite matrix through the eigen backend."""
    w, v = np.linalg.eigh(a)
    if float(w.min()) <= SINGULAR_FLOOR:
        raise SingularMatrixError(f"minimum eigenvalue {float(w.min()):.3e} at or below {SINGULAR_FLOOR:.1e}")
    return hermitian_part((v / w) @ np.conj(v.T))


def real_embedding(a: np.ndarray) -> np.ndarray:
    """Real-symmetric 2d x 2d image of a complex Hermitian d x d matrix.

    Each complex entry ``x + iy`` becomes the 2x2 block ``[[x, -y], [y, x]]``.
    The image is PSD exactly when the input is, and traces double.
    """
    d = a.shape[-1]
    out = np.zeros(a.shape[:-2] + (2 * d, 2 * d), dtype=float)
    re, im = np.real(a), np.imag(a)
    out[..., 0::2, 0::2] = re
    out[..., 1::2, 1::2] = re
    out[..., 0::2, 1::2] = -im
    out[..., 1::2, 0::2] = im
    return out


def solve_sylvester_velocity(g: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """Solve ``(g u + u g) / 2 = xi`` for Hermitian ``u`` with ``g`` definite.

    In the eigenbasis of ``g`` the solution is entrywise
    ``u_jk = 2 xi_jk / (w_j + w_k)``. Raises :class:`SingularMatrixError`
    when ``g`` has an eigenvalue at or below 1e-12 (the velocity is not
    uniquely defined on the kernel).
    """
    _check_same_dim(g, xi)
    w, v = np.linalg.eigh(g)
    if float(w.min()) <= 1e-12:
        raise SingularMatrixError(
            f"base point has eigenvalue {float(w.min()):.3e} at or below 1e-12; velocity undefined on the kernel"
        )
    xi_hat = np.conj(v.T) @ xi @ v
    u_hat = 2.0 * xi_hat / (w[:, None] + w[None, :])
    return hermitian_part(v @ u_hat @ np.conj(v.T))


def sym_product(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Symmetrized product ``(x u + u x) / 2`` (batched over leading axes)."""
    xu = x @ u
    return (xu + np.conj(np.swapaxes(xu, -1, -2))) / 2.0
