"""Hellinger and Fisher-Rao distances and geodesics on matrix measures.

The Hellinger distance is four times the fiberwise sum of squared Bures
distances; on a shared finite support the dominating-measure bookkeeping is
automatic. The total-mass sphere sits inside the Hellinger cone, and the
Fisher-Rao distance is obtained by inverting the cone law on it:
``d_FR = 2 arccos(1 - d_H^2 / 8)``, bounded by pi.

Fisher-Rao geodesics are built by normalizing the fiberwise Hellinger
geodesic back to unit mass and reparametrizing to constant speed. Because a
cone geodesic between two unit-radius points is isometric to a planar chord,
the reparametrization has a closed form and the construction is exact (up to
round-off) whenever the endpoints are not antipodal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import bures
from .exceptions import AntipodalError, FRGeoError, NotProbabilityError, ZeroLengthError
from .hpsd import sym_product
from .measures import (
    MatrixMeasure,
    check_same_support,
    mass,
    tv_distance,
)

ANTIPODAL_TOL = 1e-6
SPHERE_MASS_TOL = 1e-8


@dataclass(frozen=True)
class MeasurePath:
    """Time-indexed sequence of measures on a shared support.

    ``velocities`` is either None or one optional ``(n, d, d)`` Hermitian
    stack per slice, representing the continuity-equation potential. ``meta``
    records construction details (sphere flag, discrete ODE residual, ...).
    """

    times: np.ndarray
    slices: tuple[MatrixMeasure, ...]
    velocities: tuple | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "slices", tuple(self.slices))
        if times.ndim != 1 or len(times) != len(self.slices):
            raise FRGeoError("times and slices must have matching lengths")
        if len(times) >= 2 and np.any(np.diff(times) <= 0.0):
            raise FRGeoError("times must be strictly increasing")
        if times.size and (times[0] < -1e-12 or times[-1] > 1.0 + 1e-12):
            raise FRGeoError("times must lie within [0, 1]")
        for g in self.slices[1:]:
            check_same_support(self.slices[0], g)
        if self.velocities is not None and len(self.velocities) != len(self.slices):
            raise FRGeoError("velocities must align with slices")

    @property
    def n_slices(self) -> int:
        return len(self.slices)


def hellinger_distance_sq(g0: MatrixMeasure, g1: MatrixMeasure) -> float:
    """Four times the fiberwise sum of squared Bures distances."""
    check_same_support(g0, g1)
    total = 0.0
    for i in range(g0.n):
        total += bures.bures_distance_sq(g0.atoms[i], g1.atoms[i])
    return 4.0 * total


def _check_probability(g: MatrixMeasure, label: str) -> None:
    m = mass(g)
    if abs(m - 1.0) > SPHERE_MASS_TOL:
        raise NotProbabilityError(f"{label} has mass {m!r}, expected 1 within {SPHERE_MASS_TOL:.0e}")


def fisher_rao_distance(g0: MatrixMeasure, g1: MatrixMeasure) -> float:
    """Sphere distance ``2 arccos(1 - d_H^2 / 8)``, in ``[0, pi]``."""
    _check_probability(g0, "first measure")
    _check_probability(g1, "second measure")
    arg = np.clip(1.0 - hellinger_distance_sq(g0, g1) / 8.0, -1.0, 1.0)
    return float(2.0 * np.arccos(arg))


def cone_scaling_check(
    g0: MatrixMeasure, g1: MatrixMeasure, r0: float, r1: float
) -> tuple[float, float]:
    """Both sides of the cone scaling law for sphere points scaled by ``r^2``:
    ``(d_H^2(r0^2 g0, r1^2 g1), r0 r1 d_H^2(g0, g1) + 4 (r1 - r0)^2)``."""
    _check_probability(g0, "first measure")
    _check_probability(g1, "second measure")
    lhs = hellinger_distance_sq(
        g0.with_atoms(g0.atoms * r0 * r0), g1.with_atoms(g1.atoms * r1 * r1)
    )
    rhs = r0 * r1 * hellinger_distance_sq(g0, g1) + 4.0 * (r1 - r0) ** 2
    return lhs, rhs


def _discrete_ode_residual(times, slices, velocities) -> float:
    """Max TV residual of ``(G_{k+1} - G_k)/dt = (G_k U_k)^Sym`` over steps
    with a velocity attached."""
    worst = 0.0
    for k in range(len(slices) - 1):
        u = velocities[k]
        if u is None:
            continue
        dt = times[k + 1] - times[k]
        resid = (slices[k + 1].atoms - slices[k].atoms) / dt - sym_product(slices[k].atoms, u)
        worst = max(worst, float(np.linalg.norm(resid, axis=(1, 2)).sum()))
    return worst


def hellinger_geodesic(g0: MatrixMeasure, g1: MatrixMeasure, ts) -> MeasurePath:
    """Fiberwise Bures geodesic through every atom.

    The resulting path moves at constant Hellinger speed. Per-slice
    velocities are attached whenever every fiber admits one.
    """
    check_same_support(g0, g1)
    ts = np.asarray(ts, dtype=float)
    fiber_paths = [bures.bures_geodesic(g0.atoms[i], g1.atoms[i], ts) for i in range(g0.n)]
    slices = []
    velocities = []
    for k in range(len(ts)):
        atoms = np.stack([fp.points[k] for fp in fiber_paths])
        slices.append(g0.with_atoms(atoms))
        fiber_us = [fp.velocities[k] for fp in fiber_paths]
        velocities.append(np.stack(fiber_us) if all(u is not None for u in fiber_us) else None)
    meta = {
        "metric": "hellinger",
        "fiber_deltas": [fp.meta.get("delta", 0.0) for fp in fiber_paths],
    }
    meta["ode_residual"] = _discrete_ode_residual(ts, slices, velocities)
    return MeasurePath(ts, tuple(slices), tuple(velocities), meta)


def _chord_parameter(theta: float, phi: float) -> float:
    """Cone-chord parameter hitting sphere-arc fraction ``theta``.

    A cone geodesic between two unit-radius points with sphere angle ``phi``
    is a planar chord; the point at angle ``alpha = theta * phi`` sits at
    chord parameter ``sin(alpha) / (sin(alpha) + sin(phi - alpha))``.
    """
    alpha = theta * phi
    denom = np.sin(alpha) + np.sin(phi - alpha)
    if denom <= 0.0:
        raise AntipodalError("degenerate chord: endpoints are antipodal")
    return float(np.sin(alpha) / denom)


def fisher_rao_geodesic(g0: MatrixMeasure, g1: MatrixMeasure, ts) -> MeasurePath:
    """Constant-speed sphere geodesic between unit-mass measures.

    Computes the Hellinger geodesic, normalizes each slice back to the
    sphere and reparametrizes with the exact cone-chord formula, so that
    ``d_FR(G_s, G_t) = |s - t| d_FR(G_0, G_1)``. Raises
    :class:`AntipodalError` within ``1e-6`` of the diameter ``pi``, where the
    underlying cone geodesic passes through the apex.
    """
    _check_probability(g0, "first measure")
    _check_probability(g1, "second measure")
    ts = np.asarray(ts, dtype=float)
    dfr = fisher_rao_distance(g0, g1)
    if dfr >= np.pi - ANTIPODAL_TOL:
        raise AntipodalError(
            f"endpoints at distance {dfr!r} >= pi - 1e-6: sphere projection undefined"
        )
    if dfr <= 1e-15:
        slices = tuple(g0 for _ in ts)
        return MeasurePath(ts, slices, None, {"metric": "fisher_rao", "spherical": True})
    phi = dfr / 2.0
    chord_ts = np.array([_chord_parameter(float(th), phi) for th in ts])
    chord_path = hellinger_geodesic(g0, g1, chord_ts)
    slices = []
    for k, theta in enumerate(ts):
        if theta <= 0.0:
            slices.append(g0)
        elif theta >= 1.0:
            slices.append(g1)
        else:
            g = chord_path.slices[k]
            slices.append(g.with_atoms(g.atoms / mass(g)))
    meta = {"metric": "fisher_rao", "spherical": True, "distance": dfr}
    return MeasurePath(ts, tuple(slices), None, meta)


def _pair_distance(a: MatrixMeasure, b: MatrixMeasure, metric: str) -> float:
    if metric == "hellinger":
        return float(np.sqrt(hellinger_distance_sq(a, b)))
    if metric == "fisher_rao":
        return fisher_rao_distance(a, b)
    raise ValueError(f"unknown metric {metric!r}")


def _interpolate(a: MatrixMeasure, b: MatrixMeasure, theta: float, metric: str) -> MatrixMeasure:
    """Point at metric fraction ``theta`` along the geodesic from a to b."""
    if theta <= 0.0:
        return a
    if theta >= 1.0:
        return b
    if metric == "hellinger":
        return hellinger_geodesic(a, b, [theta]).slices[0]
    return fisher_rao_geodesic(a, b, [theta]).slices[0]


def constant_speed_reparametrize(path: MeasurePath, metric: str) -> MeasurePath:
    """Resample a path by arc length so consecutive distances equalize.

    New slices are placed by geodesic interpolation inside the segment that
    contains each arc-length target, which is exact when the input traverses
    a single geodesic (the intended use). Output times are uniform on the
    input's time interval. A two-slice path is returned unchanged.
    """
    n_seg = path.n_slices - 1
    if n_seg < 1:
        raise FRGeoError("need at least two slices to reparametrize")
    lengths = np.array(
        [_pair_distance(path.slices[k], path.slices[k + 1], metric) for k in range(n_seg)]
    )
    total = float(lengths.sum())
    # Squared distances bottom out at round-off (~1e-15), so lengths below
    # ~1e-7 per segment are indistinguishable from zero.
    if total <= 1e-6 * len(lengths):
        raise ZeroLengthError(f"path has (numerically) zero length {total:.3e}")
    if n_seg == 1:
        return path
    cumulative = np.concatenate([[0.0], np.cumsum(lengths)])
    new_times = np.linspace(path.times[0], path.times[-1], path.n_slices)
    new_slices = [path.slices[0]]
    for m in range(1, n_seg):
        target = total * m / n_seg
        j = int(np.searchsorted(cumulative, target, side="right") - 1)
        j = min(max(j, 0), n_seg - 1)
        seg_len = lengths[j]
        theta = 0.0 if seg_len <= 1e-15 else (target - cumulative[j]) / seg_len
        new_slices.append(_interpolate(path.slices[j], path.slices[j + 1], float(theta), metric))
    new_slices.append(path.slices[-1])
    meta = dict(path.meta)
    meta["reparametrized"] = metric
    return MeasurePath(new_times, tuple(new_slices), None, meta)


def metric_speed(path: MeasurePath, metric: str) -> np.ndarray:
    """Finite-difference metric speeds, one per slice.

    Central differences at interior nodes (second-order on smooth paths),
    one-sided at the endpoints.
    """
    m = path.n_slices
    if m < 2:
        raise FRGeoError("need at least two slices for a speed")
    t = path.times
    speeds = np.empty(m)
    speeds[0] = _pair_distance(path.slices[0], path.slices[1], metric) / (t[1] - t[0])
    speeds[-1] = _pair_distance(path.slices[-2], path.slices[-1], metric) / (t[-1] - t[-2])
    for k in range(1, m - 1):
        speeds[k] = _pair_distance(path.slices[k - 1], path.slices[k + 1], metric) / (t[k + 1] - t[k - 1])
    return speeds


def velocity_speed(path: MeasurePath) -> np.ndarray | None:
    """Kinetic speeds ``sqrt(sum_i G_i U_i : U_i)`` where velocities are
    attached; None when the path carries no velocities."""
    if path.velocities is None:
        return None
    out = np.full(path.n_slices, np.nan)
    for k, u in enumerate(path.velocities):
        if u is None:
            continue
        atoms = path.slices[k].atoms
        val = float(np.real(np.vdot(u, atoms @ u)))
        out[k] = np.sqrt(max(val, 0.0))
    return out


def tv_comparison_check(g0: MatrixMeasure, g1: MatrixMeasure) -> tuple[float, float, float]:
    """The two-sided comparison chain between the Hellinger and TV distances:
    ``(d_H^2 / (4 sqrt(d)), ||G1 - G0||_TV, sqrt(m0 + m1) * d_H)``."""
    check_same_support(g0, g1)
    dh_sq = hellinger_distance_sq(g0, g1)
    lower = dh_sq / (4.0 * np.sqrt(g0.dim))
    mid = tv_distance(g0, g1)
    upper = float(np.sqrt(mass(g0) + mass(g1)) * np.sqrt(dh_sq))
    return lower, mid, upper


def path_masses(path: MeasurePath) -> np.ndarray:
    return np.array([mass(g) for g in path.slices])


def mass_interpolation_values(g0: MatrixMeasure, g1: MatrixMeasure, ts) -> np.ndarray:
    """Exact masses of the Hellinger geodesic:
    ``m_t = t m1 + (1 - t) m0 - t (1 - t) d_H^2 / 4``."""
    m0, m1 = mass(g0), mass(g1)
    dh_sq = hellinger_distance_sq(g0, g1)
    ts = np.asarray(ts, dtype=float)
    return ts * m1 + (1.0 - ts) * m0 - ts * (1.0 - ts) * dh_sq / 4.0
