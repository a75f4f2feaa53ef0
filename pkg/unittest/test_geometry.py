import unittest

import numpy as np

from todalab.error import DimensionError, DomainError
from todalab.flow import integrate_dubrovin, circulation_period
from todalab.geometry import abel_map, approximation_experiment, density_of_states, divisor_sequence, \
    dos_vs_equilibrium, equilibrium_cdf, equilibrium_density, equilibrium_measure, geometric_mean, green_function, \
    kept_gaps, lyapunov_exponent, shift_character, shift_validation, site_angles, thouless_check, toda_frequencies, \
    translate_divisor, truncate_gapset, truncation_eigenvalues, xi_at_infinity, xi_harmonic
from todalab.jacobi import JacobiOperator
from todalab.lab.presets import preset_operator, synthetic_six_gap
from todalab.np.functional import torus_arc, wrap_centered
from todalab.spectral import GapSet, band_samples, periodic_spectrum

INTERVAL = GapSet.interval()
ONE_GAP = GapSet(-1., 1., [(-0.2, 0.2)])
TWO_GAP = GapSet(-1., 1., [(-0.6, -0.4), (0.4, 0.6)])


class TestEquilibrium(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.interval = equilibrium_measure(INTERVAL)
        cls.one_gap = equilibrium_measure(ONE_GAP)

    def test_interval(self):
        geo = self.interval
        self.assertAlmostEqual(geo.capacity, 0.5, places=10)
        self.assertAlmostEqual(geo.total_mass, 1., places=12)
        self.assertAlmostEqual(geo.robin_constant, np.log(2.), places=10)
        x = np.array([-0.9, -0.3, 0., 0.5])
        np.testing.assert_allclose(equilibrium_density(geo, x), 1. / (np.pi * np.sqrt(1. - x ** 2)), rtol=1e-10)
        np.testing.assert_allclose(equilibrium_cdf(geo, x), 0.5 + np.arcsin(x) / np.pi, atol=1e-10)
        np.testing.assert_array_equal(equilibrium_cdf(geo, [-2., 2.]), [0., 1.])
        assert equilibrium_density(geo, 1.5) == 0.

    def test_two_bands(self):
        geo = self.one_gap
        self.assertAlmostEqual(geo.capacity, np.sqrt(0.24), places=8)
        np.testing.assert_allclose(geo.band_masses, [0.5, 0.5], atol=1e-10)
        self.assertAlmostEqual(equilibrium_cdf(geo, 0.), 0.5, places=10)
        assert equilibrium_density(geo, 0.) == 0.

    def test_green_interval(self):
        geo = self.interval
        self.assertAlmostEqual(green_function(geo, 2.), np.log(2. + np.sqrt(3.)), places=9)
        self.assertAlmostEqual(green_function(geo, -2.), green_function(geo, 2.), places=12)
        assert abs(green_function(geo, 0.3)) <= 1e-7
        z = 0.5 + 1.j
        expected = np.log(abs(z + np.sqrt(z - 1.) * np.sqrt(z + 1.)))
        self.assertAlmostEqual(green_function(geo, z), expected, places=6)

    def test_green_two_bands(self):
        geo = self.one_gap
        self.assertAlmostEqual(green_function(geo, 0.), 0.5 * np.log(1.5), places=8)
        self.assertAlmostEqual(green_function(geo, 0.1), green_function(geo, -0.1), places=10)
        assert abs(green_function(geo, 0.6)) <= 1e-7
        assert green_function(geo, 0.1) < green_function(geo, 0.)

    def test_node_floor(self):
        with self.assertRaises(DomainError):
            equilibrium_measure(ONE_GAP, n_nodes=16)


class TestHarmonicMeasure(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.geo = equilibrium_measure(ONE_GAP)

    def test_values(self):
        self.assertAlmostEqual(xi_harmonic(ONE_GAP, self.geo, 0, 0.), 0.5, places=10)
        assert xi_harmonic(ONE_GAP, self.geo, 0, -0.5) == 0.
        assert xi_harmonic(ONE_GAP, self.geo, 0, 0.5) == 1.
        np.testing.assert_allclose(xi_at_infinity(self.geo), [0.5], atol=1e-10)
        with self.assertRaises(DomainError):
            xi_harmonic(ONE_GAP, self.geo, 1, 0.)

    def test_monotone_in_gap(self):
        x = np.linspace(-0.2, 0.2, 21)[1:-1]
        values = [xi_harmonic(ONE_GAP, self.geo, 0, xi) for xi in x]
        assert np.all(np.diff(values) > 0)

    def test_wrong_geometry(self):
        with self.assertRaises(DomainError):
            xi_harmonic(TWO_GAP, self.geo, 0, 0.)


class TestAbel(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.geo = equilibrium_measure(ONE_GAP)
        cls.two_gap = equilibrium_measure(TWO_GAP)

    def test_edges(self):
        for phi in (0., np.pi):
            self.assertAlmostEqual(abel_map(ONE_GAP, self.geo, [phi])[0], 0., places=12)
        self.assertAlmostEqual(abel_map(ONE_GAP, self.geo, [0.5 * np.pi])[0], 0.5 * np.pi, places=9)
        with self.assertRaises(DimensionError):
            abel_map(ONE_GAP, self.geo, [0., 1.])

    def test_shift_character(self):
        np.testing.assert_allclose(shift_character(ONE_GAP, self.geo), [np.pi], atol=1e-9)
        assert shift_character(INTERVAL, equilibrium_measure(INTERVAL)).size == 0

    def test_shift_validation(self):
        op = preset_operator('p2-gap')
        E = periodic_spectrum(op)
        assert shift_validation(op, E, equilibrium_measure(E), 4) <= 1e-5

    def test_translate(self):
        for E, geo, phi, shift in ((ONE_GAP, self.geo, [0.3], [1.]),
                                   (TWO_GAP, self.two_gap, [0.4, 2.], [1., -0.5])):
            moved = translate_divisor(E, geo, phi, shift)
            step = abel_map(E, geo, moved, continuous=True) - abel_map(E, geo, phi, continuous=True)
            np.testing.assert_allclose(wrap_centered(step - np.array(shift)), 0., atol=1e-9)

    def test_translate_through_edge(self):
        # pi/2 moved by pi passes the right edge phi = 0 half way
        moved = translate_divisor(ONE_GAP, self.geo, [0.5 * np.pi], [np.pi])
        assert torus_arc(moved[0], 1.5 * np.pi) <= 1e-8
        op = preset_operator('p2-gap')
        E = periodic_spectrum(op)
        geo = equilibrium_measure(E)
        extracted = site_angles(op, E, range(5))
        translated = divisor_sequence(E, geo, extracted[0], 4)
        assert np.max(torus_arc(translated, extracted)) <= 1e-6

    def test_frequencies(self):
        T = circulation_period(ONE_GAP)
        traj = integrate_dubrovin(ONE_GAP, [0.], 3. * T, tol=1e-11, times=np.linspace(0., 3. * T, 301))
        zeta, residual = toda_frequencies(ONE_GAP, self.geo, traj)
        assert residual <= 1e-4
        # the continuous Abel map decreases as phi increases, so one circulation is -2 pi
        self.assertAlmostEqual(zeta[0] * T, -2. * np.pi, places=4)

    def test_frequencies_edge_cases(self):
        geo = equilibrium_measure(INTERVAL)
        zeta, residual = toda_frequencies(INTERVAL, geo, integrate_dubrovin(INTERVAL, [], 1.))
        assert zeta.size == 0 and residual == 0.
        short = integrate_dubrovin(ONE_GAP, [0.], 1., times=np.linspace(0., 1., 5))
        with self.assertRaises(DomainError):
            toda_frequencies(ONE_GAP, self.geo, short)


class TestApproximation(unittest.TestCase):
    def test_kept_gaps(self):
        E = synthetic_six_gap()
        np.testing.assert_array_equal(kept_gaps(E, 2), [0, 2])
        np.testing.assert_array_equal(kept_gaps(E, 10), np.arange(6))
        assert truncate_gapset(E, 3).n_gaps == 3

    def test_full_truncation_is_exact(self):
        E = synthetic_six_gap()
        f = np.linspace(0.2, 5., 6)
        table = approximation_experiment(E, f, [2, 6], np.linspace(0., 1., 5))
        assert table['N'].tolist() == [2, 6]
        assert table['sup_distance'].values[1] == 0.
        assert table['sup_distance'].values[0] > 0.


class TestAppendix(unittest.TestCase):
    def test_lyapunov(self):
        op = JacobiOperator.free()
        self.assertAlmostEqual(lyapunov_exponent(op, 2.), np.log(2. + np.sqrt(3.)), places=3)
        assert lyapunov_exponent(op, 0.5) <= 0.01
        with self.assertRaises(DomainError):
            lyapunov_exponent(op, 0.5, n_steps=0)

    def test_geometric_mean(self):
        op = preset_operator('p2-gap')
        self.assertAlmostEqual(geometric_mean(op), np.sqrt(0.24))
        self.assertAlmostEqual(geometric_mean(op), equilibrium_measure(periodic_spectrum(op)).capacity, places=8)

    def test_density_of_states(self):
        op = JacobiOperator.free()
        geo = equilibrium_measure(INTERVAL)
        grid = np.linspace(-1.2, 1.2, 49)
        assert dos_vs_equilibrium(op, geo, 2000, grid) <= 0.01
        with self.assertRaises(DomainError):
            density_of_states(op, 100, grid)
        with self.assertRaises(DomainError):
            truncation_eigenvalues(op, 1)

    def test_thouless(self):
        op = preset_operator('p2-gap')
        E = periodic_spectrum(op)
        geo = equilibrium_measure(E)
        assert thouless_check(geo, truncation_eigenvalues(op, 2000), band_samples(E, 10)) <= 0.02


if __name__ == '__main__':
    unittest.main()
