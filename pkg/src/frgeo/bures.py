"""Bures-Wasserstein geometry on single Hermitian-PSD fibers.

Provides the closed-form squared distance, its spherical (unit-trace)
companion, geodesics through the optimal linear map, the complex-to-real
embedding identity, and a dynamical solver that minimizes the kinetic action
over discretized paths. The dynamical solver is deliberately independent of
the optimal-map construction so the two routes cross-check each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import NotUnitTraceError
from .hpsd import (
    clamp_psd,
    frobenius_inner,
    frobenius_norm,
    hermitian_part,
    is_positive_definite,
    psd_rank,
    psd_sqrt,
    solve_sylvester_velocity,
    sym_product,
    zero_floor,
)

UNIT_TRACE_TOL = 1e-9
GEODESIC_REG_SCALE = 1e-8
GEODESIC_ENDPOINT_TOL = 1e-6


@dataclass(frozen=True)
class FiberGeodesic:
    """Sampled path between two PSD fibers.

    ``points[k]`` is the matrix at ``times[k]``; ``velocities[k]`` solves the
    continuity equation at that sample where the point is nonsingular, and is
    None otherwise. ``meta`` records construction details (regularization
    shift, solver convergence, ...).
    """

    a0: np.ndarray
    a1: np.ndarray
    times: np.ndarray
    points: np.ndarray
    velocities: tuple
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class BuresActionResult:
    """Outcome of the dynamical action minimization."""

    value: float
    path: FiberGeodesic
    converged: bool
    iterations: int


def _cross_trace(a0: np.ndarray, a1: np.ndarray) -> float:
    """``tr sqrt(sqrt(a0) a1 sqrt(a0))`` with noise-level eigenvalues floored
    to zero (they would otherwise enter as sqrt(noise) ~ 1e-8)."""
    s0 = psd_sqrt(a0)
    inner = hermitian_part(s0 @ a1 @ s0)
    w = zero_floor(np.linalg.eigvalsh(inner))
    return float(np.sum(np.sqrt(w)))


def bures_distance_sq(a0: np.ndarray, a1: np.ndarray) -> float:
    """Squared Bures-Wasserstein distance
    ``tr a0 + tr a1 - 2 tr sqrt(sqrt(a0) a1 sqrt(a0))``.

    The two trace orderings agree; this one puts ``a0`` outside. Both inputs
    must be PSD (within the clamping floor).
    """
    tr0 = float(np.real(np.trace(a0)))
    tr1 = float(np.real(np.trace(a1)))
    a1 = clamp_psd(a1)
    return max(tr0 + tr1 - 2.0 * _cross_trace(a0, a1), 0.0)


def spherical_bures(a0: np.ndarray, a1: np.ndarray) -> float:
    """Spherical distance ``arccos(1 - d_B^2 / 2)`` between unit-trace fibers."""
    for label, a in (("first", a0), ("second", a1)):
        tr = float(np.real(np.trace(a)))
        if abs(tr - 1.0) > UNIT_TRACE_TOL:
            raise NotUnitTraceError(f"{label} argument has trace {tr!r}, expected 1")
    arg = np.clip(1.0 - bures_distance_sq(a0, a1) / 2.0, -1.0, 1.0)
    return float(np.arccos(arg))


def optimal_transport_map(a0: np.ndarray, a1: np.ndarray) -> np.ndarray:
    """The Hermitian PSD map ``T`` with ``T a0 T = a1`` for definite ``a0``:
    ``T = a0^{-1/2} (a0^{1/2} a1 a0^{1/2})^{1/2} a0^{-1/2}``."""
    w, v = np.linalg.eigh(a0)
    s = np.sqrt(np.clip(w, 0.0, None))
    sqrt_a0 = (v * s) @ np.conj(v.T)
    inv_sqrt_a0 = (v / s) @ np.conj(v.T)
    middle = psd_sqrt(hermitian_part(sqrt_a0 @ a1 @ sqrt_a0))
    return hermitian_part(inv_sqrt_a0 @ middle @ inv_sqrt_a0)


def bures_geodesic(a0: np.ndarray, a1: np.ndarray, ts) -> FiberGeodesic:
    """Geodesic samples between PSD fibers.

    For definite ``a0`` the path is ``a_t = M_t a0 M_t`` with
    ``M_t = (1 - t) I + t T``. A zero start gives the radial path
    ``a_t = t^2 a1``. A singular nonzero start is shifted by
    ``delta = 1e-8 * max(tr a0, tr a1)`` before applying the map; the shift
    and the resulting endpoint error are recorded in ``meta``.
    """
    a0 = clamp_psd(np.asarray(a0, dtype=complex))
    a1 = clamp_psd(np.asarray(a1, dtype=complex))
    ts = np.asarray(ts, dtype=float)
    d = a0.shape[0]
    meta: dict = {"delta": 0.0, "mode": "map"}

    if psd_rank(a0) == 0:
        points = np.stack([t * t * a1 for t in ts])
        velocities = tuple(
            (2.0 / t) * np.eye(d, dtype=complex) if t > 0.0 and is_positive_definite(t * t * a1) else None
            for t in ts
        )
        meta["mode"] = "radial"
        return FiberGeodesic(a0, a1, ts, points, velocities, meta)

    base = a0
    if not is_positive_definite(a0):
        delta = GEODESIC_REG_SCALE * max(float(np.real(np.trace(a0))), float(np.real(np.trace(a1))))
        base = a0 + delta * np.eye(d)
        meta["delta"] = delta
        meta["mode"] = "regularized"

    t_map = optimal_transport_map(base, a1)
    eye = np.eye(d, dtype=complex)
    points = []
    velocities = []
    for t in ts:
        m_t = (1.0 - t) * eye + t * t_map
        a_t = hermitian_part(m_t @ base @ m_t)
        points.append(a_t)
        if is_positive_definite(a_t):
            da_t = hermitian_part((t_map - eye) @ base @ m_t + m_t @ base @ (t_map - eye))
            velocities.append(solve_sylvester_velocity(a_t, da_t))
        else:
            velocities.append(None)
    points = np.stack(points)

    if meta["mode"] == "regularized":
        meta["endpoint_error"] = frobenius_norm(base - a0)
        if meta["endpoint_error"] > GEODESIC_ENDPOINT_TOL:
            raise RuntimeError(
                f"regularized geodesic start error {meta['endpoint_error']:.3e} exceeds {GEODESIC_ENDPOINT_TOL:.1e}"
            )
    return FiberGeodesic(a0, a1, ts, points, tuple(velocities), meta)


def bures_real_embedding_check(a0: np.ndarray, a1: np.ndarray) -> tuple[float, float]:
    """Both sides of the real-embedding identity:
    ``(d_B^2 of the 2d x 2d real images, 2 * d_B^2 of the originals)``."""
    from .hpsd import real_embedding

    lhs = bures_distance_sq(real_embedding(np.asarray(a0, dtype=complex)), real_embedding(np.asarray(a1, dtype=complex)))
    rhs = 2.0 * bures_distance_sq(a0, a1)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Dynamical formulation: minimize the kinetic action over discretized paths.
# ---------------------------------------------------------------------------


def _forward_integrate(a0: np.ndarray, us: np.ndarray, dt: float):
    """Integrate ``da/dt = (a u)^Sym`` with the explicit midpoint rule.

    Returns the states ``a_k``, the midpoint states, and the action
    ``(1/4) sum_k dt * (abar_k u_k : u_k)``.
    """
    n = us.shape[0]
    states = np.empty((n + 1,) + a0.shape, dtype=complex)
    mids = np.empty((n,) + a0.shape, dtype=complex)
    states[0] = a0
    action = 0.0
    for k in range(n):
        u = us[k]
        a = states[k]
        abar = a + (dt / 2.0) * sym_product(a, u)
        states[k + 1] = a + dt * sym_product(abar, u)
        mids[k] = abar
        action += float(np.real(np.vdot(u, abar @ u)))
    return states, mids, 0.25 * dt * action


def _herm_pair(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``(x y + y x) / 2``, Hermitian for Hermitian inputs."""
    xy = x @ y
    return (xy + np.conj(xy.T)) / 2.0


def _action_gradient(a0: np.ndarray, us: np.ndarray, dt: float, p_final: np.ndarray,
                     states: np.ndarray, mids: np.ndarray) -> np.ndarray:
    """Adjoint pass for the action plus an endpoint term with gradient
    ``p_final`` at the last state."""
    n = us.shape[0]
    grads = np.empty_like(us)
    p = p_final
    for k in range(n - 1, -1, -1):
        u, a, abar = us[k], states[k], mids[k]
        q = 0.25 * dt * (u @ u) + dt * _herm_pair(p, u)
        grads[k] = (
            0.5 * dt * _herm_pair(abar, u)
            + dt * _herm_pair(abar, p)
            + 0.5 * dt * _herm_pair(a, q)
        )
        p = p + q + 0.5 * dt * _herm_pair(q, u)
    return grads


def _initial_velocities(a0: np.ndarray, a1: np.ndarray, n_steps: int) -> np.ndarray:
    """Velocities of the straight-line path, solved fiber by fiber.

    Independent of the optimal-map construction on purpose.
    """
    dt = 1.0 / n_steps
    diff = a1 - a0
    us = np.empty((n_steps,) + a0.shape, dtype=complex)
    for k in range(n_steps):
        mid = a0 + (k + 0.5) * dt * diff
        us[k] = solve_sylvester_velocity(mid, diff)
    return us


def dynamical_bures_solver(
    a0: np.ndarray,
    a1: np.ndarray,
    n_steps: int,
    max_iters: int = 20000,
    endpoint_tol: float = 1e-9,
) -> BuresActionResult:
    """Minimize the discretized kinetic action over paths joining ``a0, a1``.

    The path is integrated from stacked velocities with the explicit midpoint
    rule; the free endpoint is pinned by an augmented-Lagrangian penalty whose
    squared mismatch is driven below ``endpoint_tol``. Optimization is plain
    gradient descent with backtracking line search (adjoint gradients).

    Returns the action value, the discrete path, a convergence flag and the
    total iteration count. Singular inputs are shifted by
    ``1e-8 * max(tr a0, tr a1)`` before solving.
    """
    if n_steps < 8:
        raise ValueError(f"n_steps must be at least 8, got {n_steps}")
    a0 = clamp_psd(np.asarray(a0, dtype=complex))
    a1 = clamp_psd(np.asarray(a1, dtype=complex))
    d = a0.shape[0]
    scale = max(float(np.real(np.trace(a0))), float(np.real(np.trace(a1))))
    if scale <= 0.0:
        times = np.linspace(0.0, 1.0, n_steps + 1)
        zeros = np.zeros((n_steps + 1, d, d), dtype=complex)
        path = FiberGeodesic(a0, a1, times, zeros, tuple([None] * (n_steps + 1)), {"mode": "apex"})
        return BuresActionResult(0.0, path, True, 0)
    delta = 0.0
    if not (is_positive_definite(a0) and is_positive_definite(a1)):
        delta = GEODESIC_REG_SCALE * scale
        a0 = a0 + delta * np.eye(d)
        a1 = a1 + delta * np.eye(d)

    dt = 1.0 / n_steps
    us = _initial_velocities(a0, a1, n_steps)

    mu = np.zeros((d, d), dtype=complex)
    beta = 100.0 / max(scale, 1e-12)
    total_iters = 0
    converged = False
    prev_action = np.inf

    def lagrangian(states, action):
        v = states[-1] - a1
        return action + frobenius_inner(mu, v) + 0.5 * beta * frobenius_norm(v) ** 2

    states, mids, action = _forward_integrate(a0, us, dt)
    obj = lagrangian(states, action)
    step = 1.0

    for outer in range(60):
        # Inner loop: descend the augmented Lagrangian at fixed multiplier.
        # Steps are seeded with the Barzilai-Borwein length and safeguarded
        # by backtracking, which keeps the descent strictly monotone.
        inner_tol = 1e-7 if outer < 3 else 1e-11
        us_prev = grads_prev = None
        recent: list[float] = [obj]
        for _inner in range(400):
            if total_iters >= max_iters:
                break
            total_iters += 1
            v = states[-1] - a1
            grads = _action_gradient(a0, us, dt, mu + beta * v, states, mids)
            gnorm2 = float(np.real(np.vdot(grads, grads)))
            if gnorm2 <= (1e-14 * max(1.0, obj)) ** 2:
                break
            trial = min(step * 2.0, 1e6)
            if grads_prev is not None:
                du = (us - us_prev).ravel()
                dg = (grads - grads_prev).ravel()
                denom = float(np.real(np.vdot(du, dg)))
                if denom > 0.0:
                    trial = float(np.clip(np.real(np.vdot(du, du)) / denom, 1e-12, 1e6))
            us_prev, grads_prev = us, grads
            accepted = False
            while trial > 1e-18:
                us_new = us - trial * grads
                states_new, mids_new, action_new = _forward_integrate(a0, us_new, dt)
                obj_new = lagrangian(states_new, action_new)
                if obj_new < obj:
                    us, states, mids, action, obj = us_new, states_new, mids_new, action_new, obj_new
                    step = trial
                    accepted = True
                    break
                trial *= 0.5
            if not accepted:
                break
            recent.append(obj)
            if len(recent) >= 6:
                if recent[-6] - recent[-1] <= inner_tol * max(abs(recent[-1]), 1e-30):
                    break
                recent.pop(0)
        violation = frobenius_norm(states[-1] - a1) ** 2
        if violation <= endpoint_tol and abs(action - prev_action) <= 1e-9 * max(1.0, abs(action)):
            converged = True
            break
        if total_iters >= max_iters:
            break
        prev_action = action
        mu = mu + beta * (states[-1] - a1)
        if violation > 0.1 * frobenius_norm(mu) ** 2 / max(beta, 1.0) ** 2 or outer >= 2:
            beta *= 3.0
        obj = lagrangian(states, action)

    times = np.linspace(0.0, 1.0, n_steps + 1)
    velocities = tuple(us[min(k, n_steps - 1)] for k in range(n_steps + 1))
    meta = {
        "mode": "dynamical",
        "delta": delta,
        "endpoint_error": frobenius_norm(states[-1] - a1),
        "converged": converged,
        "iterations": total_iters,
    }
    path = FiberGeodesic(a0, a1, times, states, velocities, meta)
    return BuresActionResult(float(action), path, converged, total_iters)
