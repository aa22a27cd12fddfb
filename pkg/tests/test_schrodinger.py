import math

import numpy as np
import pytest

from frgeo.bures import bures_geodesic
from frgeo.entropy_flow import entropy
from frgeo.exceptions import (
    AntipodalError,
    FixedPointDivergedError,
    FRGeoError,
    InfiniteEndpointEntropyError,
)
from frgeo.fisher_rao import (
    MeasurePath,
    fisher_rao_distance,
    fisher_rao_geodesic,
)
from frgeo.measures import (
    MatrixMeasure,
    Support,
    make_support,
    mass,
    reference_identity,
    tv_distance,
    uniform_reference,
)
from frgeo.schrodinger import (
    SchrodingerConfig,
    convexity_experiment,
    discrete_objective,
    gamma_sweep,
    gaussian_bridge_oracle,
    recovery_sequence,
    solve_bridge,
)
from frgeo.testing import (
    random_finite_entropy_measure,
    random_real_spd,
)


def finite_entropy_pair(rng, n=2, d=2, blend=0.5):
    sup = make_support(n)
    lam = uniform_reference(sup, d)
    g0 = random_finite_entropy_measure(rng, n, d, blend=blend, support=sup, lam=lam)
    g1 = random_finite_entropy_measure(rng, n, d, blend=blend, support=sup, lam=lam)
    return g0, g1, lam


def reachable_real_spd_pair(rng, d, epsilon, spread=0.7):
    """Real SPD pair inside the heat-flow reach 2*epsilon of each other
    (the potential system has an SPD solution only there)."""
    while True:
        a0 = random_real_spd(rng, d)
        s = rng.standard_normal((d, d))
        s = (s + s.T) / 2.0
        s /= max(float(np.abs(np.linalg.eigvalsh(s)).max()), 1e-12)
        a1 = a0 + spread * 2.0 * epsilon * s
        if float(np.linalg.eigvalsh(a1).min()) > 0.02:
            return a0, a1


class TestConfig:
    def test_epsilon_positive(self):
        with pytest.raises(ValueError):
            SchrodingerConfig(epsilon=0.0)

    def test_min_steps(self):
        with pytest.raises(ValueError):
            SchrodingerConfig(epsilon=0.1, n_steps=4)


class TestDiscreteObjective:
    def test_constant_equilibrium_path(self):
        lam = uniform_reference(make_support(2), 2)
        eq = reference_identity(lam)
        times = np.linspace(0, 1, 9)
        path = MeasurePath(times, tuple(eq for _ in times))
        kin, fis = discrete_objective(path, lam, 0.3)
        assert kin == pytest.approx(0.0, abs=1e-12)
        assert fis == pytest.approx(0.0, abs=1e-12)

    def test_geodesic_kinetic_energy(self, rng):
        g0, g1, lam = finite_entropy_pair(rng)
        dfr_sq = fisher_rao_distance(g0, g1) ** 2
        times = np.linspace(0, 1, 33)
        path = fisher_rao_geodesic(g0, g1, times)
        kin, _ = discrete_objective(path, lam, 0.1)
        # Constant-speed sampling makes the discrete energy exact up to 1%.
        assert kin == pytest.approx(dfr_sq / 2.0, rel=0.01)

    def test_kinetic_dominates_geodesic_energy(self, rng):
        # Discrete Cauchy-Schwarz: any sphere path on the grid carries at
        # least the geodesic kinetic energy.
        g0, g1, lam = finite_entropy_pair(rng)
        dfr_sq = fisher_rao_distance(g0, g1) ** 2
        times = np.linspace(0, 1, 17)
        geo = fisher_rao_geodesic(g0, g1, times)
        bent = recovery_sequence(geo, lam, 0.4)
        kin, _ = discrete_objective(bent, lam, 0.4)
        assert kin >= dfr_sq / 2.0 - 1e-9

    def test_requires_uniform_grid(self, rng):
        g0, g1, lam = finite_entropy_pair(rng)
        path = fisher_rao_geodesic(g0, g1, [0.0, 0.3, 1.0])
        with pytest.raises(FRGeoError):
            discrete_objective(path, lam, 0.1)

    def test_infinite_on_singular_interior(self, rng):
        sup = make_support(2)
        lam = uniform_reference(sup, 2)
        g = random_finite_entropy_measure(rng, 2, 2, support=sup, lam=lam)
        singular = MatrixMeasure(
            sup,
            np.stack([np.diag([0.5, 0.0]), np.diag([0.25, 0.25])]).astype(complex),
        )
        path = MeasurePath(np.linspace(0, 1, 9), tuple([g] * 4 + [singular] + [g] * 4))
        kin, fis = discrete_objective(path, lam, 0.2)
        assert math.isinf(fis)


class TestRecoverySequence:
    def test_zero_temperature_unchanged(self, rng):
        g0, g1, lam = finite_entropy_pair(rng)
        path = fisher_rao_geodesic(g0, g1, np.linspace(0, 1, 9))
        assert recovery_sequence(path, lam, 0.0) is path

    def test_equilibrium_fixed(self):
        lam = uniform_reference(make_support(2), 2)
        eq = reference_identity(lam)
        times = np.linspace(0, 1, 9)
        path = MeasurePath(times, tuple(eq for _ in times))
        out = recovery_sequence(path, lam, 0.3)
        for s in out.slices:
            assert tv_distance(s, eq) <= 1e-14

    def test_endpoints_untouched(self, rng):
        g0, g1, lam = finite_entropy_pair(rng)
        path = fisher_rao_geodesic(g0, g1, np.linspace(0, 1, 17))
        out = recovery_sequence(path, lam, 0.25)
        assert tv_distance(out.slices[0], g0) == 0.0
        assert tv_distance(out.slices[-1], g1) == 0.0

    def test_upper_bound_on_random_geodesics(self, rng):
        for _ in range(10):
            g0, g1, lam = finite_entropy_pair(rng, n=2, d=2, blend=0.5)
            e0, e1 = entropy(g0, lam), entropy(g1, lam)
            dfr_sq = fisher_rao_distance(g0, g1) ** 2
            times = np.linspace(0, 1, 33)
            geo = fisher_rao_geodesic(g0, g1, times)
            for eps in (0.05, 0.1, 0.2):
                out = recovery_sequence(geo, lam, eps)
                kin, fis = discrete_objective(out, lam, eps)
                bound = dfr_sq / 2.0 + eps * (e0 + e1)
                assert kin + fis <= bound * 1.02

    def test_infinite_endpoint_rejected(self, rng):
        sup = make_support(2)
        lam = uniform_reference(sup, 2)
        singular = MatrixMeasure(
            sup, np.stack([np.diag([0.5, 0.0]), np.diag([0.25, 0.25])]).astype(complex)
        )
        g1 = random_finite_entropy_measure(rng, 2, 2, support=sup, lam=lam)
        path = MeasurePath(np.array([0.0, 0.5, 1.0]), (singular, g1, g1))
        with pytest.raises(InfiniteEndpointEntropyError):
            recovery_sequence(path, lam, 0.1)


class TestSolveBridge:
    def test_local_gradient_matches_full_objective_fd(self, rng):
        # The solver differentiates only the objective terms touched by each
        # slice; cross-check against brute-force differences of the full
        # objective.
        from frgeo.hpsd import psd_sqrt
        from frgeo.schrodinger import _bridge_gradient, _factors_to_slice, _stack_objective

        n, d, n_steps = 2, 2, 8
        sup = make_support(n)
        lam = uniform_reference(sup, d)
        g0 = random_finite_entropy_measure(rng, n, d, support=sup, lam=lam)
        g1 = random_finite_entropy_measure(rng, n, d, support=sup, lam=lam)
        eps = 0.3
        interior = [
            random_finite_entropy_measure(rng, n, d, support=sup, lam=lam)
            for _ in range(n_steps - 1)
        ]
        factors = np.stack(
            [np.stack([psd_sqrt(g.atoms[i]) for i in range(n)]) for g in interior]
        )

        def full_obj(fac):
            stacked = np.concatenate([g0.atoms[None], _factors_to_slice(fac), g1.atoms[None]])
            kin, fis = _stack_objective(stacked, lam.weights, eps)
            return kin + fis

        grad = _bridge_gradient(factors, g0.atoms, g1.atoms, lam.weights, eps, 1e-6)
        h = 1e-7
        for _ in range(20):
            k = int(rng.integers(0, n_steps - 1))
            i, r, c = (int(rng.integers(0, m)) for m in (n, d, d))
            part = int(rng.integers(0, 2))
            delta = h if part == 0 else 1j * h
            fp = factors.copy()
            fp[k, i, r, c] += delta
            fm = factors.copy()
            fm[k, i, r, c] -= delta
            num = (full_obj(fp) - full_obj(fm)) / (2 * h)
            ana = grad[k, i, r, c].real if part == 0 else grad[k, i, r, c].imag
            assert num == pytest.approx(ana, rel=1e-4, abs=1e-8)

    def test_identical_equilibrium_endpoints(self):
        lam = uniform_reference(make_support(2), 2)
        eq = reference_identity(lam)
        cfg = SchrodingerConfig(epsilon=0.2, n_steps=8, max_iters=50)
        res = solve_bridge(eq, eq, lam, cfg)
        assert res.objective == pytest.approx(0.0, abs=1e-10)
        for s in res.path.slices:
            assert tv_distance(s, eq) <= 1e-9

    def test_objective_decomposition_and_endpoints(self, rng):
        g0, g1, lam = finite_entropy_pair(rng)
        cfg = SchrodingerConfig(epsilon=0.3, n_steps=8, max_iters=150)
        res = solve_bridge(g0, g1, lam, cfg)
        assert res.objective == pytest.approx(res.kinetic + res.fisher_term, abs=1e-12)
        assert tv_distance(res.path.slices[0], g0) <= 1e-10
        assert tv_distance(res.path.slices[-1], g1) <= 1e-10

    def test_slices_on_sphere_and_psd(self, rng):
        g0, g1, lam = finite_entropy_pair(rng)
        cfg = SchrodingerConfig(epsilon=0.2, n_steps=8, max_iters=150)
        res = solve_bridge(g0, g1, lam, cfg)
        for s in res.path.slices:
            assert abs(mass(s) - 1.0) <= 1e-8
            assert np.linalg.eigvalsh(s.atoms).min() >= -1e-10

    def test_never_above_initialization(self, rng):
        g0, g1, lam = finite_entropy_pair(rng)
        eps = 0.25
        cfg = SchrodingerConfig(epsilon=eps, n_steps=12)
        res = solve_bridge(g0, g1, lam, cfg)
        geo = fisher_rao_geodesic(g0, g1, np.linspace(0, 1, 13))
        init = recovery_sequence(geo, lam, eps)
        kin0, fis0 = discrete_objective(init, lam, eps)
        assert res.objective <= kin0 + fis0 + 1e-12

    def test_objective_monotone_in_epsilon(self, rng):
        g0, g1, lam = finite_entropy_pair(rng)
        objs = []
        for eps in (0.4, 0.2, 0.1):
            cfg = SchrodingerConfig(epsilon=eps, n_steps=8)
            objs.append(solve_bridge(g0, g1, lam, cfg).objective)
        assert objs[0] >= objs[1] * (1 - 0.01)
        assert objs[1] >= objs[2] * (1 - 0.01)

    def test_small_epsilon_approaches_geodesic_energy(self, rng):
        g0, g1, lam = finite_entropy_pair(rng, blend=0.4)
        dfr_sq = fisher_rao_distance(g0, g1) ** 2
        cfg = SchrodingerConfig(epsilon=1e-3, n_steps=16)
        res = solve_bridge(g0, g1, lam, cfg)
        assert 2.0 * res.objective == pytest.approx(dfr_sq, rel=0.01)

    def test_warm_start_path_used(self, rng):
        g0, g1, lam = finite_entropy_pair(rng)
        cfg = SchrodingerConfig(epsilon=0.3, n_steps=8)
        first = solve_bridge(g0, g1, lam, cfg)
        warm = solve_bridge(g0, g1, lam, cfg, init_path=first.path)
        assert warm.iterations <= first.iterations
        assert warm.objective <= first.objective + 1e-10

    def test_wrong_grid_init_rejected(self, rng):
        g0, g1, lam = finite_entropy_pair(rng)
        cfg = SchrodingerConfig(epsilon=0.3, n_steps=8)
        bad = fisher_rao_geodesic(g0, g1, np.linspace(0, 1, 5))
        with pytest.raises(FRGeoError):
            solve_bridge(g0, g1, lam, cfg, init_path=bad)

    def test_infinite_endpoint_entropy_rejected(self, rng):
        sup = make_support(2)
        lam = uniform_reference(sup, 2)
        singular = MatrixMeasure(
            sup, np.stack([np.diag([0.5, 0.0]), np.diag([0.25, 0.25])]).astype(complex)
        )
        g1 = random_finite_entropy_measure(rng, 2, 2, support=sup, lam=lam)
        with pytest.raises(InfiniteEndpointEntropyError):
            solve_bridge(singular, g1, lam, SchrodingerConfig(epsilon=0.1, n_steps=8))

    def test_antipodal_rejected(self):
        sup = Support(("x",))
        lam = uniform_reference(sup, 2)
        g0 = MatrixMeasure(sup, np.diag([1.0, 0.0]).astype(complex)[None])
        g1 = MatrixMeasure(sup, np.diag([0.0, 1.0]).astype(complex)[None])
        with pytest.raises((AntipodalError, InfiniteEndpointEntropyError)):
            solve_bridge(g0, g1, lam, SchrodingerConfig(epsilon=0.1, n_steps=8))

    def test_non_convergence_flagged(self, rng):
        g0, g1, lam = finite_entropy_pair(rng)
        cfg = SchrodingerConfig(epsilon=0.3, n_steps=8, max_iters=2)
        res = solve_bridge(g0, g1, lam, cfg)
        assert not res.converged
        assert res.iterations <= 2


class TestGaussianOracle:
    def test_scalar_closed_form(self):
        one = np.array([[1.0]])
        for eps in (0.5, 0.1, 0.01):
            res = gaussian_bridge_oracle(one, one, eps, [0.0, 0.5, 1.0])
            b_expected = 1.0 - eps + math.sqrt(1.0 + eps * eps)
            mid_expected = (1.0 + math.sqrt(1.0 + eps * eps)) / 2.0
            assert res.b_forward[0, 0] == pytest.approx(b_expected, abs=1e-12)
            assert res.c_backward[0, 0] == pytest.approx(b_expected, abs=1e-12)
            assert res.points[1][0, 0] == pytest.approx(mid_expected, abs=1e-12)

    def test_marginals_reproduced(self, rng):
        for _ in range(20):
            d = int(rng.integers(1, 4))
            a0, a1 = reachable_real_spd_pair(rng, d, 0.2)
            res = gaussian_bridge_oracle(a0, a1, 0.2, [0.0, 1.0])
            assert np.linalg.norm(res.points[0] - a0) <= 1e-9
            assert np.linalg.norm(res.points[-1] - a1) <= 1e-9

    def test_small_epsilon_approaches_fiber_geodesic(self, rng):
        a0, a1 = reachable_real_spd_pair(rng, 2, 0.01, spread=0.6)
        ts = np.linspace(0, 1, 5)
        geo = bures_geodesic(a0.astype(complex), a1.astype(complex), ts)
        errs = {}
        for eps in (0.1, 0.01):
            res = gaussian_bridge_oracle(a0, a1, eps, ts)
            errs[eps] = max(np.linalg.norm(res.points[k] - geo.points[k]) for k in range(len(ts)))
        assert errs[0.01] < errs[0.1]

    def test_equal_marginal_midpoint_inflates(self, rng):
        a = random_real_spd(rng, 3)
        res = gaussian_bridge_oracle(a, a, 0.3, [0.5])
        assert float(np.linalg.eigvalsh(res.points[0] - a).min()) >= -1e-10

    def test_diverges_outside_reach(self, rng):
        # Far-apart marginals at tiny temperature: the SPD potential system
        # has no solution and the iteration must flag it.
        a0 = np.eye(2)
        a1 = 4.0 * np.eye(2)
        with pytest.raises(FixedPointDivergedError):
            gaussian_bridge_oracle(a0, a1, 0.01, [0.5])

    def test_rejects_complex_input(self, rng):
        a = np.eye(2) + 1j * np.array([[0.0, 0.5], [-0.5, 0.0]])
        with pytest.raises(FRGeoError):
            gaussian_bridge_oracle(a, np.eye(2), 0.1, [0.5])


class TestGammaSweep:
    def test_objective_and_gap_decrease(self, rng):
        g0, g1, lam = finite_entropy_pair(rng, blend=0.45)
        cfg = SchrodingerConfig(epsilon=0.5, n_steps=12)
        rows = gamma_sweep(g0, g1, lam, [0.5, 0.2, 0.1], cfg)
        assert [r.epsilon for r in rows] == [0.5, 0.2, 0.1]
        assert all(r.error is None and r.converged for r in rows)
        for a, b in zip(rows, rows[1:]):
            assert b.objective <= a.objective * 1.01
            assert b.tv_gap <= a.tv_gap * 1.05 + 1e-9

    def test_identical_endpoints_all_zero_gap(self):
        lam = uniform_reference(make_support(2), 2)
        eq = reference_identity(lam)
        cfg = SchrodingerConfig(epsilon=0.5, n_steps=8, max_iters=30)
        rows = gamma_sweep(eq, eq, lam, [0.5, 0.1], cfg)
        for r in rows:
            assert r.objective == pytest.approx(r.fisher_term, abs=1e-12)
            assert r.tv_gap <= 1e-9

    def test_requires_descending_epsilons(self, rng):
        g0, g1, lam = finite_entropy_pair(rng)
        with pytest.raises(ValueError):
            gamma_sweep(g0, g1, lam, [0.1, 0.5])

    def test_failing_rows_flagged_and_sweep_continues(self, rng):
        # Infinite-entropy endpoints make every bridge solve fail; the sweep
        # must flag each row and still return the full table.
        sup = make_support(2)
        lam = uniform_reference(sup, 2)
        singular = MatrixMeasure(
            sup, np.stack([np.diag([0.5, 0.0]), np.diag([0.25, 0.25])]).astype(complex)
        )
        g1 = random_finite_entropy_measure(rng, 2, 2, support=sup, lam=lam)
        cfg = SchrodingerConfig(epsilon=0.5, n_steps=8)
        rows = gamma_sweep(singular, g1, lam, [0.5, 0.2], cfg)
        assert len(rows) == 2
        assert all(r.error is not None and not r.converged for r in rows)
        assert all(math.isnan(r.objective) for r in rows)

    def test_parallel_rows_match_cold_runs(self, rng):
        g0, g1, lam = finite_entropy_pair(rng)
        cfg = SchrodingerConfig(epsilon=0.5, n_steps=8, max_iters=150)
        rows = gamma_sweep(g0, g1, lam, [0.5, 0.2], cfg, jobs=2)
        assert [r.epsilon for r in rows] == [0.5, 0.2]
        cold0 = solve_bridge(g0, g1, lam, SchrodingerConfig(epsilon=0.5, n_steps=8, max_iters=150))
        assert rows[0].objective == pytest.approx(cold0.objective, abs=1e-10)


class TestConvexityExperiment:
    def test_identical_endpoints(self, rng):
        g, _, lam = finite_entropy_pair(rng)
        rows = convexity_experiment(g, g, lam, [0.25, 0.5, 0.75])
        e = entropy(g, lam)
        for _, lhs, rhs in rows:
            assert lhs == pytest.approx(e, rel=1e-9)
            assert rhs == pytest.approx(e, rel=1e-9)

    def test_boundary_thetas_exact(self, rng):
        g0, g1, lam = finite_entropy_pair(rng)
        rows = convexity_experiment(g0, g1, lam, [0.0, 1.0])
        assert rows[0][1] == pytest.approx(rows[0][2], abs=1e-10)
        assert rows[1][1] == pytest.approx(rows[1][2], abs=1e-10)

    def test_strengthened_chord_bound_holds(self, rng):
        thetas = [0.1 * k for k in range(1, 10)]
        for _ in range(25):
            g0, g1, lam = finite_entropy_pair(
                rng, n=int(rng.integers(1, 4)), d=int(rng.integers(1, 4))
            )
            rows = convexity_experiment(g0, g1, lam, thetas, check=True)
            for theta, lhs, rhs in rows:
                assert lhs <= rhs + 1e-6

    def test_infinite_endpoint_rejected(self, rng):
        sup = make_support(2)
        lam = uniform_reference(sup, 2)
        singular = MatrixMeasure(
            sup, np.stack([np.diag([0.5, 0.0]), np.diag([0.25, 0.25])]).astype(complex)
        )
        g1 = random_finite_entropy_measure(rng, 2, 2, support=sup, lam=lam)
        with pytest.raises(InfiniteEndpointEntropyError):
            convexity_experiment(singular, g1, lam, [0.5])


class TestBridgeVsOracleTrends:
    def test_single_point_midpoint_gap_shrinks_with_epsilon(self, rng):
        # One support point, real SPD unit-trace endpoints: the bridge
        # midpoint approaches the geodesic midpoint as the temperature
        # drops, the same trend the Gaussian oracle shows for the trace.
        sup = Support(("x",))
        d = 2
        lam = uniform_reference(sup, d)
        base = random_real_spd(rng, d)
        base = base / np.trace(base)
        bump = np.diag([0.06, -0.06])
        g0 = MatrixMeasure(sup, (base + bump).astype(complex)[None])
        g1 = MatrixMeasure(sup, (base - bump).astype(complex)[None])
        geo_mid = fisher_rao_geodesic(g0, g1, [0.0, 0.5, 1.0]).slices[1]
        gaps = []
        inflations = []
        for eps in (0.5, 0.2, 0.1):
            cfg = SchrodingerConfig(epsilon=eps, n_steps=8)
            res = solve_bridge(g0, g1, lam, cfg)
            mid = res.path.slices[res.path.n_slices // 2]
            gaps.append(tv_distance(mid, geo_mid))
            a0 = np.real(g0.atoms[0])
            a1 = np.real(g1.atoms[0])
            oracle = gaussian_bridge_oracle(a0, a1, eps, [0.5])
            geo_fiber = bures_geodesic(g0.atoms[0], g1.atoms[0], [0.5]).points[0]
            inflations.append(float(np.real(np.trace(oracle.points[0] - geo_fiber))))
        assert gaps[0] >= gaps[1] >= gaps[2] - 1e-12
        assert inflations[0] >= inflations[1] >= inflations[2] - 1e-12
