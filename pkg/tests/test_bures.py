import numpy as np
import pytest

from frgeo.bures import (
    _action_gradient,
    _forward_integrate,
    bures_distance_sq,
    bures_geodesic,
    bures_real_embedding_check,
    dynamical_bures_solver,
    spherical_bures,
)
from frgeo.exceptions import NotPSDError, NotUnitTraceError
from frgeo.hpsd import frobenius_inner, psd_sqrt
from frgeo.testing import random_density, random_hermitian, random_psd, random_spd


class TestBuresDistanceSq:
    def test_identical(self, rng):
        a = random_psd(rng, 3)
        assert bures_distance_sq(a, a) == pytest.approx(0.0, abs=1e-10)

    def test_against_zero(self, rng):
        a = random_psd(rng, 3)
        assert bures_distance_sq(a, np.zeros_like(a)) == pytest.approx(np.real(np.trace(a)))

    def test_commuting_diagonal_pair(self):
        # Commuting case oracle: |sqrt(a1) - sqrt(a0)|_2^2 = |diag(1, -1)|^2 = 2.
        a0 = np.diag([1.0, 4.0]).astype(complex)
        a1 = np.diag([4.0, 1.0]).astype(complex)
        assert bures_distance_sq(a0, a1) == pytest.approx(2.0, abs=1e-12)

    def test_ordering_symmetry(self, rng):
        for _ in range(100):
            d = int(rng.integers(1, 5))
            a0, a1 = random_psd(rng, d), random_psd(rng, d)
            assert abs(bures_distance_sq(a0, a1) - bures_distance_sq(a1, a0)) <= 1e-9

    def test_triangle_inequality(self, rng):
        for _ in range(200):
            d = int(rng.integers(1, 5))
            a, b, c = (random_psd(rng, d) for _ in range(3))
            dab = np.sqrt(bures_distance_sq(a, b))
            dbc = np.sqrt(bures_distance_sq(b, c))
            dac = np.sqrt(bures_distance_sq(a, c))
            assert dac <= dab + dbc + 1e-9

    def test_root_difference_and_trace_norm_chain(self, rng):
        for _ in range(500):
            d = int(rng.integers(1, 5))
            a0, a1 = random_psd(rng, d), random_psd(rng, d)
            sq_diff = np.linalg.norm(psd_sqrt(a1) - psd_sqrt(a0)) ** 2
            schatten1 = float(np.sum(np.abs(np.linalg.eigvalsh(a1 - a0))))
            d_sq = bures_distance_sq(a0, a1)
            assert d_sq <= sq_diff + 1e-9
            assert sq_diff <= schatten1 + 1e-9

    def test_rejects_non_psd(self, rng):
        with pytest.raises(NotPSDError):
            bures_distance_sq(-np.eye(2, dtype=complex), np.eye(2, dtype=complex))


class TestSphericalBures:
    def test_identical(self, rng):
        a = random_density(rng, 3)
        assert spherical_bures(a, a) == pytest.approx(0.0, abs=1e-7)

    def test_orthogonal_supports(self):
        a0 = np.diag([1.0, 0.0]).astype(complex)
        a1 = np.diag([0.0, 1.0]).astype(complex)
        # d_B^2 = 2, so the angle is arccos(0) = pi/2.
        assert spherical_bures(a0, a1) == pytest.approx(np.pi / 2.0)

    def test_bounded_by_half_pi(self, rng):
        for _ in range(100):
            d = int(rng.integers(2, 5))
            a0, a1 = random_density(rng, d, definite=False), random_density(rng, d, definite=False)
            assert spherical_bures(a0, a1) <= np.pi / 2.0 + 1e-12

    def test_requires_unit_trace(self, rng):
        with pytest.raises(NotUnitTraceError):
            spherical_bures(2.0 * np.eye(2, dtype=complex), random_density(rng, 2))


class TestBuresGeodesic:
    def test_constant(self, rng):
        a = random_psd(rng, 3)
        geo = bures_geodesic(a, a, [0.0, 0.5, 1.0])
        for p in geo.points:
            assert np.linalg.norm(p - a) <= 1e-9

    def test_radial_from_zero(self, rng):
        a1 = random_psd(rng, 2)
        zero = np.zeros_like(a1)
        ts = [0.0, 0.3, 0.7, 1.0]
        geo = bures_geodesic(zero, a1, ts)
        tr1 = np.real(np.trace(a1))
        for t, p in zip(ts, geo.points):
            assert np.linalg.norm(p - t * t * a1) <= 1e-12
            assert bures_distance_sq(zero, p) == pytest.approx(t * t * tr1, abs=1e-10)

    def test_constant_speed(self, rng):
        for _ in range(20):
            d = int(rng.integers(1, 5))
            a0, a1 = random_spd(rng, d), random_spd(rng, d)
            dist = np.sqrt(bures_distance_sq(a0, a1))
            geo = bures_geodesic(a0, a1, [0.25, 0.5, 0.75])
            for t, p in zip([0.25, 0.5, 0.75], geo.points):
                assert np.sqrt(bures_distance_sq(a0, p)) == pytest.approx(t * dist, rel=1e-8, abs=1e-9)

    def test_endpoints_match(self, rng):
        a0, a1 = random_spd(rng, 3), random_psd(rng, 3)
        geo = bures_geodesic(a0, a1, [0.0, 1.0])
        assert np.linalg.norm(geo.points[0] - a0) <= 1e-9
        assert np.linalg.norm(geo.points[1] - a1) <= 1e-9

    def test_trace_interpolation(self, rng):
        for _ in range(50):
            d = int(rng.integers(1, 5))
            a0, a1 = random_psd(rng, d), random_psd(rng, d)
            d_sq = bures_distance_sq(a0, a1)
            ts = np.linspace(0.0, 1.0, 7)
            geo = bures_geodesic(a0, a1, ts)
            traces = np.real(np.trace(geo.points, axis1=1, axis2=2))
            expected = ts * np.real(np.trace(a1)) + (1 - ts) * np.real(np.trace(a0)) - ts * (1 - ts) * d_sq
            assert np.max(np.abs(traces - expected)) <= 1e-6 * max(1.0, np.max(np.abs(expected)))

    def test_points_stay_psd(self, rng):
        a0, a1 = random_psd(rng, 3, rank=2), random_psd(rng, 3)
        geo = bures_geodesic(a0, a1, np.linspace(0, 1, 9))
        for p in geo.points:
            assert np.linalg.eigvalsh(p).min() >= -1e-10

    def test_singular_start_regularized(self, rng):
        a0 = random_psd(rng, 3, rank=1)
        a1 = random_psd(rng, 3)
        geo = bures_geodesic(a0, a1, [0.0, 0.5, 1.0])
        assert geo.meta["mode"] == "regularized"
        assert geo.meta["delta"] > 0.0
        assert geo.meta["endpoint_error"] <= 1e-6
        assert np.linalg.norm(geo.points[0] - a0) <= 1e-6
        assert np.linalg.norm(geo.points[-1] - a1) <= 1e-6

    def test_both_endpoints_singular(self, rng):
        a0 = random_psd(rng, 3, rank=2)
        a1 = random_psd(rng, 3, rank=1)
        dist = np.sqrt(bures_distance_sq(a0, a1))
        geo = bures_geodesic(a0, a1, [0.0, 0.5, 1.0])
        assert np.linalg.norm(geo.points[0] - a0) <= 1e-6
        assert np.linalg.norm(geo.points[-1] - a1) <= 1e-6
        # Still a constant-speed path within the regularization tolerance.
        mid = np.sqrt(bures_distance_sq(a0, geo.points[1]))
        assert mid == pytest.approx(dist / 2.0, rel=1e-4, abs=1e-6)

    def test_velocities_solve_continuity_equation(self, rng):
        a0, a1 = random_spd(rng, 2), random_spd(rng, 2)
        ts = np.linspace(0.0, 1.0, 33)
        geo = bures_geodesic(a0, a1, ts)
        dt = ts[1] - ts[0]
        # Central-difference check of da/dt = (a u)^Sym at interior samples.
        for k in range(1, 32):
            u = geo.velocities[k]
            assert u is not None
            fd = (geo.points[k + 1] - geo.points[k - 1]) / (2 * dt)
            au = geo.points[k] @ u
            resid = np.linalg.norm(fd - (au + au.conj().T) / 2)
            assert resid <= 5e-3 * max(1.0, np.linalg.norm(fd))


class TestRealEmbeddingCheck:
    def test_identical(self):
        eye = np.eye(2, dtype=complex)
        lhs, rhs = bures_real_embedding_check(eye, eye)
        assert lhs == pytest.approx(0.0, abs=1e-12)
        assert rhs == pytest.approx(0.0, abs=1e-12)

    def test_real_pair(self, rng):
        a0 = np.real(random_psd(rng, 2)).astype(complex)
        a1 = np.real(random_psd(rng, 2)).astype(complex)
        lhs, rhs = bures_real_embedding_check(a0, a1)
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)

    def test_specific_complex_pair(self):
        a0 = np.array([[1.0, 0.5j], [-0.5j, 1.0]])
        lhs, rhs = bures_real_embedding_check(a0, np.eye(2, dtype=complex))
        assert lhs == pytest.approx(rhs, abs=1e-9)


class TestDynamicalSolver:
    def test_adjoint_gradient_matches_finite_differences(self, rng):
        # The adjoint pass is load-bearing; check it against brute-force FD.
        d, n_steps = 2, 8
        dt = 1.0 / n_steps
        a0 = random_spd(rng, d)
        target = random_spd(rng, d)
        us = np.stack([random_hermitian(rng, d, scale=0.3) for _ in range(n_steps)])
        beta = 7.0

        def objective(v):
            states, _, action = _forward_integrate(a0, v, dt)
            return action + 0.5 * beta * np.linalg.norm(states[-1] - target) ** 2

        states, mids, _ = _forward_integrate(a0, us, dt)
        grads = _action_gradient(a0, us, dt, beta * (states[-1] - target), states, mids)
        h = 1e-6
        for _ in range(12):
            k = int(rng.integers(0, n_steps))
            direction = random_hermitian(rng, d)
            bump = direction * _bump(k, n_steps, d)
            num = (objective(us + h * bump) - objective(us - h * bump)) / (2 * h)
            ana = frobenius_inner(grads[k], direction)
            assert num == pytest.approx(ana, rel=1e-4, abs=1e-7)

    def test_identical_endpoints(self, rng):
        a = random_spd(rng, 2)
        res = dynamical_bures_solver(a, a, 8)
        assert res.value == pytest.approx(0.0, abs=1e-10)
        assert res.converged

    def test_scalar_closed_form(self):
        res = dynamical_bures_solver(np.array([[1.0 + 0j]]), np.array([[4.0 + 0j]]), 64)
        assert res.converged
        assert res.value == pytest.approx(1.0, rel=5e-3)

    def test_matches_closed_form(self, rng):
        a0, a1 = random_spd(rng, 2), random_spd(rng, 2)
        closed = bures_distance_sq(a0, a1)
        res = dynamical_bures_solver(a0, a1, 32)
        assert res.converged
        assert abs(res.value - closed) <= 0.02 * closed

    def test_iteration_budget_flag(self, rng):
        a0, a1 = random_spd(rng, 2), random_spd(rng, 2)
        res = dynamical_bures_solver(a0, a1, 8, max_iters=3)
        assert not res.converged
        assert res.iterations <= 3

    def test_rejects_small_grid(self, rng):
        with pytest.raises(ValueError):
            dynamical_bures_solver(random_spd(rng, 2), random_spd(rng, 2), 4)


def _bump(k, n_steps, d):
    """Indicator tensor selecting velocity slot k."""
    e = np.zeros((n_steps, 1, 1))
    e[k] = 1.0
    return e
