"""The canonical entropy, its heat-flow semigroup, the Fisher information,
and the sphere tangent norm / gradient.

The entropy is the reference-weighted negative log-determinant of the
density (an Itakura-Saito-type divergence), minimized at the weighted
identity measure. Its gradient flow on the unit-mass sphere is affine and
solvable in closed form; the Fisher information is the entropy production
along that flow and doubles as the squared tangent norm of the entropy
gradient.

Singular densities give an infinite entropy / Fisher information; infinity
is returned as ``math.inf``, never raised, so optimizers can compare
candidates during line search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NotProbabilityError, SingularMatrixError
from .hpsd import SINGULAR_FLOOR, sym_product
from .measures import (
    MatrixMeasure,
    ReferenceMeasure,
    check_reference_support,
    is_probability,
    mass,
    reference_identity,
    tv_distance,
)


@dataclass(frozen=True)
class TangentVector:
    """Sphere tangent vector at ``base``, represented by a per-atom Hermitian
    potential ``U`` (the realized vector is ``(G U)^Sym - G * (sum_j G_j : U_j)``)."""

    base: MatrixMeasure
    potential: np.ndarray

    def __post_init__(self):
        potential = np.asarray(self.potential, dtype=complex)
        if potential.shape != self.base.atoms.shape:
            raise ValueError(
                f"potential shape {potential.shape} does not match atoms {self.base.atoms.shape}"
            )
        object.__setattr__(self, "potential", potential)


def fiber_entropies(g: MatrixMeasure, lam: ReferenceMeasure) -> np.ndarray:
    """Per-atom ``-log det(G_i / w_i)`` where ``w_i > 0`` (``inf`` on singular
    densities), and ``0`` on the weightless atoms, which the entropy ignores."""
    check_reference_support(g, lam)
    out = np.zeros(g.n)
    for i, w in enumerate(lam.weights):
        if w <= 0.0:
            continue
        eigs = np.linalg.eigvalsh(g.atoms[i]) / w
        if float(eigs.min()) <= SINGULAR_FLOOR:
            out[i] = math.inf
        else:
            out[i] = -float(np.sum(np.log(eigs)))
    return out


def entropy(g: MatrixMeasure, lam: ReferenceMeasure) -> float:
    """Canonical entropy ``sum_i w_i * (-log det(G_i / w_i))`` over the
    positive-weight atoms; ``inf`` when any such density is singular."""
    fibers = fiber_entropies(g, lam)
    if np.any(np.isinf(fibers)):
        return math.inf
    return float(np.dot(lam.weights, fibers))


def fisher_information(g: MatrixMeasure, lam: ReferenceMeasure) -> float:
    """Entropy production ``sum_i w_i tr[(G_i / w_i)^{-1} - I]`` over the
    positive-weight atoms; ``inf`` on singular densities."""
    check_reference_support(g, lam)
    d = g.dim
    total = 0.0
    for i, w in enumerate(lam.weights):
        if w <= 0.0:
            continue
        eigs = np.linalg.eigvalsh(g.atoms[i]) / w
        if float(eigs.min()) <= SINGULAR_FLOOR:
            return math.inf
        total += w * (float(np.sum(1.0 / eigs)) - d)
    return total


def heat_flow(g: MatrixMeasure, lam: ReferenceMeasure, t: float) -> MatrixMeasure:
    """Heat-flow semigroup ``S_t(G) = L + e^{-t} (G - L)`` where ``L`` is the
    weighted identity measure. Fixed point at ``L``; weightless atoms decay
    by the factor ``e^{-t}``."""
    check_reference_support(g, lam)
    if t < 0.0:
        raise ValueError(f"flow time must be nonnegative, got {t}")
    target = reference_identity(lam)
    decay = math.exp(-t)
    return g.with_atoms(target.atoms + decay * (g.atoms - target.atoms))


def heat_flow_residual(g: MatrixMeasure, lam: ReferenceMeasure, t: float, dt: float) -> float:
    """TV norm of the forward-difference defect
    ``(S_{t+dt}G - S_tG)/dt - (L - S_tG)``; first order in ``dt``."""
    a = heat_flow(g, lam, t)
    b = heat_flow(g, lam, t + dt)
    drift = reference_identity(lam).atoms - a.atoms
    resid = (b.atoms - a.atoms) / dt - drift
    return float(np.linalg.norm(resid, axis=(1, 2)).sum())


def entropy_decay_check(
    g: MatrixMeasure, lam: ReferenceMeasure, s: float, t: float
) -> tuple[float, float]:
    """``(E(S_t G), e^{-(t - s)} E(S_s G))``; the flow decays the entropy at
    unit exponential rate, so the first never exceeds the second."""
    if not 0.0 <= s <= t:
        raise ValueError(f"need 0 <= s <= t, got s={s}, t={t}")
    lhs = entropy(heat_flow(g, lam, t), lam)
    rhs = math.exp(-(t - s)) * entropy(heat_flow(g, lam, s), lam)
    return lhs, rhs


def fr_gradient_entropy(g: MatrixMeasure, lam: ReferenceMeasure) -> MatrixMeasure:
    """Sphere gradient of the entropy: the signed measure with atoms
    ``G_i - w_i I`` (total trace zero)."""
    check_reference_support(g, lam)
    if not is_probability(g, tol=1e-8):
        raise NotProbabilityError(f"measure has mass {mass(g)!r}, expected 1")
    return g.with_atoms(g.atoms - reference_identity(lam).atoms)


def tangent_realization(v: TangentVector) -> np.ndarray:
    """Realized tangent atoms ``(G_i U_i)^Sym - G_i * (sum_j G_j : U_j)``."""
    atoms = v.base.atoms
    mean = float(np.real(np.vdot(atoms, v.potential)))
    return sym_product(atoms, v.potential) - atoms * mean


def tangent_norm_sq(v: TangentVector) -> float:
    """Squared sphere tangent norm
    ``sum_i G_i U_i : U_i - (sum_i G_i : U_i)^2`` (nonnegative at unit mass)."""
    _check_base_probability(v)
    atoms = v.base.atoms
    energy = float(np.real(np.vdot(v.potential, atoms @ v.potential)))
    mean = float(np.real(np.vdot(atoms, v.potential)))
    return max(energy - mean * mean, 0.0)


def _check_base_probability(v: TangentVector) -> None:
    if not is_probability(v.base, tol=1e-8):
        raise NotProbabilityError(
            f"tangent base has mass {mass(v.base)!r}, expected 1"
        )


def entropy_gradient_potential(g: MatrixMeasure, lam: ReferenceMeasure) -> TangentVector:
    """The entropy gradient as a tangent potential: ``U_i = (G_i / w_i)^{-1}``
    on positive-weight atoms (requires definite densities there).

    Its squared tangent norm equals the Fisher information.
    """
    check_reference_support(g, lam)
    potential = np.zeros_like(g.atoms)
    for i, w in enumerate(lam.weights):
        if w <= 0.0:
            continue
        dens = g.atoms[i] / w
        eigs, vecs = np.linalg.eigh(dens)
        if float(eigs.min()) <= SINGULAR_FLOOR:
            raise SingularMatrixError(
                f"density at point '{g.support.point_ids[i]}' is singular; gradient potential undefined"
            )
        potential[i] = (vecs / eigs) @ np.conj(vecs.T)
    return TangentVector(g, potential)


def von_neumann_entropy(g: MatrixMeasure, lam: ReferenceMeasure) -> float:
    """Diagnostic only: ``sum_i w_i tr(rho_i log rho_i)`` for the densities
    ``rho_i = G_i / w_i``, with ``0 log 0 = 0``. Carries no convexity
    guarantees along the sphere geodesics (unlike the canonical entropy)."""
    check_reference_support(g, lam)
    total = 0.0
    for i, w in enumerate(lam.weights):
        if w <= 0.0:
            continue
        eigs = np.clip(np.linalg.eigvalsh(g.atoms[i]) / w, 0.0, None)
        pos = eigs[eigs > 0.0]
        total += w * float(np.sum(pos * np.log(pos)))
    return total


def flow_table(g: MatrixMeasure, lam: ReferenceMeasure, ts) -> list[tuple[float, float, float, float, float]]:
    """Rows ``(t, entropy, fisher, mass, tv_to_equilibrium)`` along the flow."""
    target = reference_identity(lam)
    rows = []
    for t in ts:
        st = heat_flow(g, lam, float(t))
        rows.append(
            (
                float(t),
                entropy(st, lam),
                fisher_information(st, lam),
                mass(st),
                tv_distance(st, target),
            )
        )
    return rows
