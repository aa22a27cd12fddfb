"""Discrete matrix-valued measures on a finite support.

A :class:`MatrixMeasure` assigns one Hermitian ``d x d`` atom to each support
point. PSD-ness and unit total trace ("probability" membership) are checked
properties rather than separate types: signed measures (differences,
gradients) reuse the same container.

All measures taking part in one computation share a single
:class:`Support`; there is no support merging.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    FRGeoError,
    NotPSDError,
    SupportMismatchError,
    ZeroAtomError,
    ZeroMassError,
)
from .hpsd import check_hermitian, hermitian_part

PROBABILITY_TOL = 1e-9
ZERO_TRACE_FLOOR = 1e-14
ATOM_HERMITIAN_ATOL = 1e-9


@dataclass(frozen=True)
class Support:
    """Finite collection of distinct point labels."""

    point_ids: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "point_ids", tuple(str(p) for p in self.point_ids))
        if len(self.point_ids) == 0:
            raise FRGeoError("support must contain at least one point")
        if len(set(self.point_ids)) != len(self.point_ids):
            raise FRGeoError("support labels must be unique")

    @property
    def n(self) -> int:
        return len(self.point_ids)


def make_support(n: int, prefix: str = "p") -> Support:
    """Support with labels ``p1 .. pn``."""
    return Support(tuple(f"{prefix}{i + 1}" for i in range(n)))


@dataclass(frozen=True)
class MatrixMeasure:
    """Finitely supported measure with Hermitian matrix atoms.

    ``atoms`` has shape ``(n, d, d)``; a zero atom is allowed. Atoms are
    hermitized on construction (after a symmetry check at 1e-9), so that
    downstream spectral calls never see asymmetric round-off.
    """

    support: Support
    atoms: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=complex)
        if atoms.ndim != 3 or atoms.shape[1] != atoms.shape[2]:
            raise FRGeoError(f"atoms must have shape (n, d, d), got {atoms.shape}")
        if atoms.shape[0] != self.support.n:
            raise SupportMismatchError(
                f"{atoms.shape[0]} atoms for {self.support.n} support points"
            )
        check_hermitian(atoms, atol=ATOM_HERMITIAN_ATOL, label="atom stack")
        object.__setattr__(self, "atoms", hermitian_part(atoms))

    @property
    def n(self) -> int:
        return self.support.n

    @property
    def dim(self) -> int:
        return int(self.atoms.shape[1])

    def with_atoms(self, atoms: np.ndarray) -> "MatrixMeasure":
        return MatrixMeasure(self.support, atoms)

    @classmethod
    def zeros(cls, support: Support, dim: int) -> "MatrixMeasure":
        return cls(support, np.zeros((support.n, dim, dim), dtype=complex))


@dataclass(frozen=True)
class ReferenceMeasure:
    """Scalar nonnegative weights, normalized so that ``d * sum(weights) = 1``
    (the trace of the weighted identity measure is a probability measure)."""

    support: Support
    dim: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.support.n,):
            raise FRGeoError(f"weights must have shape ({self.support.n},), got {w.shape}")
        if np.any(w < 0.0):
            raise FRGeoError("reference weights must be nonnegative")
        total = self.dim * float(w.sum())
        if abs(total - 1.0) > 1e-12:
            raise FRGeoError(
                f"reference not normalized: dim * sum(weights) = {total!r}, expected 1"
            )
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.support.n


def uniform_reference(support: Support, dim: int) -> ReferenceMeasure:
    """Uniform reference: every weight equals ``1 / (n * d)``."""
    n = support.n
    return ReferenceMeasure(support, dim, np.full(n, 1.0 / (n * dim)))


def reference_identity(lam: ReferenceMeasure) -> MatrixMeasure:
    """The measure with atoms ``weights[i] * I`` (total mass one)."""
    eye = np.eye(lam.dim, dtype=complex)
    return MatrixMeasure(lam.support, lam.weights[:, None, None] * eye)


def check_same_support(a: MatrixMeasure, b: MatrixMeasure) -> None:
    if a.support.point_ids != b.support.point_ids:
        raise SupportMismatchError("measures live on different supports")
    if a.dim != b.dim:
        raise SupportMismatchError(f"measures have different dims {a.dim} and {b.dim}")


def check_reference_support(g: MatrixMeasure, lam: ReferenceMeasure) -> None:
    if g.support.point_ids != lam.support.point_ids:
        raise SupportMismatchError("measure and reference live on different supports")
    if g.dim != lam.dim:
        raise SupportMismatchError(f"measure dim {g.dim} != reference dim {lam.dim}")


def atom_norms(g: MatrixMeasure) -> np.ndarray:
    """Per-atom Frobenius norms."""
    return np.linalg.norm(g.atoms, axis=(1, 2))


def tv_norm(g: MatrixMeasure) -> float:
    """Total variation norm: the sum of per-atom Frobenius norms.

    On atomic measures the dual characterization over unit-sup-norm test
    functions collapses to this sum. Accepts signed (non-PSD) atoms.
    """
    return float(atom_norms(g).sum())


def tv_distance(a: MatrixMeasure, b: MatrixMeasure) -> float:
    """TV norm of the atomwise difference (which need not be PSD)."""
    check_same_support(a, b)
    return float(np.linalg.norm(a.atoms - b.atoms, axis=(1, 2)).sum())


def mass(g: MatrixMeasure) -> float:
    """Total trace mass ``sum_i tr G_i``."""
    return float(np.real(np.trace(g.atoms, axis1=1, axis2=2)).sum())


def atom_traces(g: MatrixMeasure) -> np.ndarray:
    return np.real(np.trace(g.atoms, axis1=1, axis2=2))


def is_probability(g: MatrixMeasure, tol: float = PROBABILITY_TOL) -> bool:
    """Membership in the unit-trace-mass sphere, ``|mass - 1| <= tol``."""
    return abs(mass(g) - 1.0) <= tol


def check_psd_atoms(g: MatrixMeasure, floor: float = -1e-10) -> None:
    """Raise :class:`NotPSDError` if any atom dips below the PSD floor."""
    w = np.linalg.eigvalsh(g.atoms)
    lam_min = float(w.min())
    if lam_min < floor:
        i = int(np.argmin(w.min(axis=1)))
        raise NotPSDError(
            f"atom at point '{g.support.point_ids[i]}' has eigenvalue {lam_min:.3e} below {floor:.1e}"
        )


def trace_density(g: MatrixMeasure, i: int) -> np.ndarray:
    """Unit-trace density ``G_i / tr G_i`` of atom ``i``."""
    tr = float(np.real(np.trace(g.atoms[i])))
    if tr <= ZERO_TRACE_FLOOR:
        raise ZeroAtomError(
            f"atom at point '{g.support.point_ids[i]}' has trace {tr:.3e}; no normalized density"
        )
    return g.atoms[i] / tr


def lebesgue_split(
    g: MatrixMeasure, lam: "ReferenceMeasure | np.ndarray"
) -> tuple[MatrixMeasure, MatrixMeasure]:
    """Split into the part carried by ``weights > 0`` and the rest.

    The two parts sum back to ``g`` atomwise; on a finite support this is the
    whole content of the Lebesgue decomposition against the reference. Only
    the zero pattern of the weights matters, so a raw nonnegative weight
    vector (e.g. all zeros, the fully singular case) is accepted in place of
    a normalized :class:`ReferenceMeasure`.
    """
    if isinstance(lam, ReferenceMeasure):
        check_reference_support(g, lam)
        weights = lam.weights
    else:
        weights = np.asarray(lam, dtype=float)
        if weights.shape != (g.n,):
            raise SupportMismatchError(
                f"weight vector has shape {weights.shape}, expected ({g.n},)"
            )
    pos = weights > 0.0
    ac = np.where(pos[:, None, None], g.atoms, 0.0)
    sing = np.where(pos[:, None, None], 0.0, g.atoms)
    return g.with_atoms(ac), g.with_atoms(sing)


def normalize_to_sphere(g: MatrixMeasure) -> tuple[MatrixMeasure, float]:
    """Sphere representative ``(G / m, sqrt(m))`` of a nonzero measure."""
    m = mass(g)
    if m <= ZERO_TRACE_FLOOR:
        raise ZeroMassError(f"measure has mass {m:.3e}; the cone apex has no sphere representative")
    return g.with_atoms(g.atoms / m), float(np.sqrt(m))


def scale_measure(g: MatrixMeasure, factor: float) -> MatrixMeasure:
    return g.with_atoms(g.atoms * factor)
