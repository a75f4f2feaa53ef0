import unittest

import numpy as np

from todalab.error import DependencyError, DimensionError, DomainError
from todalab.flow import circulation_period, craig_report, dwell_exponent, edge_dwell_times, integrate_dubrovin, \
    mu_velocity, psi, psi_jacobian, reconstruct_operator, running_sups, torus_distance, trace_P, trace_Q
from todalab.geometry import equilibrium_measure, shift_validation, site_angles
from todalab.jacobi import JacobiOperator
from todalab.lab.presets import preset_operator, synthetic_dyadic, synthetic_six_gap
from todalab.spectral import GapSet, angles_from_divisor, dirichlet_data, periodic_spectrum

ONE_GAP = GapSet(-1., 1., [(-0.2, 0.2)])
TWO_GAP = GapSet(-1., 1., [(-0.6, -0.4), (0.4, 0.6)])


class TestCraig(unittest.TestCase):
    def test_one_gap(self):
        report = craig_report(ONE_GAP)
        np.testing.assert_allclose(report.eta, [0.8])
        np.testing.assert_allclose(report.C, [np.sqrt(1.2)])
        self.assertAlmostEqual(report.S1, 0.4 * np.sqrt(1.2))
        self.assertAlmostEqual(report.S2, 0.5 * np.sqrt(1.2))
        assert report.S3 == 0.
        self.assertAlmostEqual(report.exponential_rate, 2. * report.lipschitz_bound * np.log(2.))

    def test_empty(self):
        report = craig_report(GapSet.interval())
        assert report.S1 == report.S2 == report.S3 == 0.
        assert report.lipschitz_bound == 0.
        assert report.per_gap().empty

    def test_running_sups_nondecreasing(self):
        table = running_sups(synthetic_dyadic(8), range(1, 9))
        for column in ('S1', 'S2', 'S3', 'lipschitz_bound'):
            assert np.all(np.diff(table[column].values) >= 0), column
        full = craig_report(synthetic_dyadic(8))
        self.assertAlmostEqual(table['S1'].values[-1], full.S1)

    def test_psi_bound(self):
        rng = np.random.Generator(np.random.PCG64(1))
        for E in (TWO_GAP, synthetic_six_gap()):
            bound = craig_report(E).psi_bound
            for phi in rng.uniform(-np.pi, np.pi, size=(200, E.n_gaps)):
                assert np.all(psi(E, phi) <= bound)


class TestPsi(unittest.TestCase):
    def test_one_gap_values(self):
        self.assertAlmostEqual(psi(ONE_GAP, [0.5 * np.pi])[0], 2.)
        for phi in (0., np.pi):
            self.assertAlmostEqual(psi(ONE_GAP, [phi])[0], 2. * np.sqrt(0.96))

    def test_two_gap_symmetric(self):
        values = psi(TWO_GAP, [0.5 * np.pi, 0.5 * np.pi])
        np.testing.assert_allclose(values, 2. * np.sqrt(0.5 * 1.5 * 0.99), rtol=1e-12)

    def test_dimension(self):
        with self.assertRaises(DimensionError):
            psi(TWO_GAP, [0.])
        assert psi(GapSet.interval(), []).size == 0

    def test_jacobian_matches_differences(self):
        rng = np.random.Generator(np.random.PCG64(2))
        h = 1e-6
        for E in (TWO_GAP, synthetic_six_gap()):
            for phi in rng.uniform(-np.pi, np.pi, size=(5, E.n_gaps)):
                numeric = np.empty((E.n_gaps, E.n_gaps))
                for k in range(E.n_gaps):
                    step = np.zeros(E.n_gaps)
                    step[k] = h
                    numeric[:, k] = (psi(E, phi + step) - psi(E, phi - step)) / (2. * h)
                np.testing.assert_allclose(psi_jacobian(E, phi), numeric, rtol=1e-5, atol=1e-7)

    def test_jacobian_signs(self):
        jac = psi_jacobian(TWO_GAP, [0.3, 1.2])
        # mu_0 < mu_1 and sin(phi_1) > 0
        assert jac[0, 1] > 0
        jac = psi_jacobian(TWO_GAP, [0.7, 0.])
        np.testing.assert_array_equal(jac[:, 1], 0.)

    def test_mu_velocity(self):
        for phi in (-2.5, -0.4, 0.3, 1.9, np.pi):
            expected = -0.5 * ONE_GAP.gamma * np.sin(phi) * psi(ONE_GAP, [phi])
            np.testing.assert_allclose(mu_velocity(ONE_GAP, [phi]), expected, atol=1e-14)

    def test_torus_distance(self):
        self.assertAlmostEqual(torus_distance(ONE_GAP, [0.], [np.pi]), np.sqrt(0.4) * np.pi)
        self.assertAlmostEqual(torus_distance(ONE_GAP, [0.1], [2. * np.pi - 0.1]), np.sqrt(0.4) * 0.2)
        rng = np.random.Generator(np.random.PCG64(4))
        for x, y, z in rng.uniform(0., 2. * np.pi, size=(50, 3, 2)):
            assert torus_distance(TWO_GAP, x, z) <= torus_distance(TWO_GAP, x, y) + \
                   torus_distance(TWO_GAP, y, z) + 1e-12


class TestDubrovin(unittest.TestCase):
    def test_one_gap_circulation(self):
        T = circulation_period(ONE_GAP)
        times = np.linspace(0., T, 101)
        traj = integrate_dubrovin(ONE_GAP, [0.], T, tol=1e-11, times=times)
        assert np.all(np.diff(traj.lifted[:, 0]) > 0)
        self.assertAlmostEqual(traj.lifted[-1, 0], 2. * np.pi, places=7)
        assert np.all((traj.angles >= 0.) & (traj.angles < 2. * np.pi))
        assert len(traj.divisor(50)) == 1

    def test_circulation_needs_one_gap(self):
        with self.assertRaises(DomainError):
            circulation_period(TWO_GAP)

    def test_invalid(self):
        with self.assertRaises(DomainError):
            integrate_dubrovin(ONE_GAP, [0.], 1., tol=0.)
        with self.assertRaises(DomainError):
            integrate_dubrovin(ONE_GAP, [0., 0.], 1.)
        traj = integrate_dubrovin(GapSet.interval(), [], 1.)
        assert traj.lifted.shape == (2, 0)

    def test_edge_dwell(self):
        T = circulation_period(ONE_GAP)
        traj = integrate_dubrovin(ONE_GAP, [0.1], T, tol=1e-11, times=np.linspace(0., T, 20001))
        edge_speed = 2. * np.sqrt(0.96)
        for delta in (1e-2, 1e-3):
            dwell = edge_dwell_times(traj, 0, delta)
            assert dwell.size == 2
            np.testing.assert_allclose(dwell, 2. * delta / edge_speed, rtol=1e-3)

    def test_dwell_exponent(self):
        deltas = np.array([1e-2, 1e-3, 1e-4])
        self.assertAlmostEqual(dwell_exponent(deltas, 3. * deltas), 1.)


class TestTraces(unittest.TestCase):
    def test_trace_Q(self):
        self.assertAlmostEqual(trace_Q(GapSet.interval(), []), 0.)
        op = preset_operator('p2-gap')
        E = periodic_spectrum(op)
        phi = angles_from_divisor(E, dirichlet_data(op, E))
        self.assertAlmostEqual(trace_Q(E, phi), op.b_at(0), places=9)

    def test_trace_P_needs_geometry(self):
        with self.assertRaises(DependencyError):
            trace_P(ONE_GAP, [0.5])

    def test_trace_P_free(self):
        E = GapSet.interval()
        self.assertAlmostEqual(trace_P(E, [], equilibrium_measure(E)), 0.5, places=8)

    def test_trace_P_period_two(self):
        op = preset_operator('p2-gap')
        E = periodic_spectrum(op)
        geo = equilibrium_measure(E)
        phi = site_angles(op, E, [0, 1])
        assert abs(trace_P(E, phi[0], geo) - op.a_at(0)) <= 1e-4
        assert abs(trace_P(E, phi[1], geo) - op.a_at(1)) <= 1e-4

    def test_reconstruct_asymmetric_period_three(self):
        op = JacobiOperator.periodic([0.6, 0.4, 0.5], [0.1, -0.2, 0.05])
        E = periodic_spectrum(op)
        geo = equilibrium_measure(E)
        assert E.n_gaps == 2
        assert shift_validation(op, E, geo, 2 * op.period) <= 1e-5
        sites = np.arange(2 * op.period + 1)
        rebuilt = reconstruct_operator(E, geo, site_angles(op, E, [0])[0], sites.size)
        np.testing.assert_allclose(rebuilt.b_at(sites), op.b_at(sites), atol=1e-8)
        np.testing.assert_allclose(rebuilt.a_at(sites), op.a_at(sites), atol=1e-5)

    def test_reconstruct_free(self):
        E = GapSet.interval()
        rebuilt = reconstruct_operator(E, equilibrium_measure(E), [], 3)
        np.testing.assert_allclose(rebuilt.a, 0.5, atol=1e-8)
        np.testing.assert_allclose(rebuilt.b, 0., atol=1e-12)


if __name__ == '__main__':
    unittest.main()
