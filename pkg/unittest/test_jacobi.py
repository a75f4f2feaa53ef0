import unittest

import numpy as np

from todalab.error import DimensionError, DomainError, UnsupportedTopologyError
from todalab.jacobi import JacobiOperator, TodaFlow, TodaState, apply_jacobi, chain_drift, conserved_traces, \
    flaschka, floquet_discriminant, floquet_multipliers, hamiltonian, integrate_toda, inverse_flaschka, \
    lax_P_restriction_residual, monodromy, one_step, propagate_solutions, solve_recurrence, toda_rhs, \
    transfer_matrix, wronskian
from todalab.lab.presets import preset_operator


class TestJacobiOperator(unittest.TestCase):
    def test_apply_free(self):
        op = JacobiOperator.free(period=4)
        np.testing.assert_allclose(apply_jacobi(op, [1., 0., 0., 0.]), [0., 0.5, 0., 0.5])
        np.testing.assert_array_equal(apply_jacobi(op, np.zeros(4)), np.zeros(4))

    def test_apply_period_two(self):
        op = JacobiOperator.periodic([0.6, 0.4], [0., 0.])
        np.testing.assert_allclose(apply_jacobi(op, [1., 1.]), [1., 1.])

    def test_apply_window_zero_extension(self):
        op = JacobiOperator.window([0.5, 0.5, 0.5], [0., 0., 0.], n_min=-1)
        np.testing.assert_allclose(apply_jacobi(op, [1., 0., 0.]), [0., 0.5, 0.])

    def test_invalid(self):
        op = JacobiOperator.free(period=3)
        with self.assertRaises(DimensionError):
            apply_jacobi(op, np.zeros(4))
        with self.assertRaises(DomainError):
            JacobiOperator.periodic([0.5, 0.], [0., 0.])
        with self.assertRaises(DomainError):
            JacobiOperator.periodic([0.5, np.inf], [0., 0.])
        with self.assertRaises(UnsupportedTopologyError):
            JacobiOperator.window([0.5], [0.]).period

    def test_shift(self):
        op = JacobiOperator.periodic([0.6, 0.4, 0.3], [0.1, 0.2, 0.3])
        shifted = op.shift(1)
        np.testing.assert_array_equal(shifted.a, [0.4, 0.3, 0.6])
        np.testing.assert_array_equal(shifted.b, [0.2, 0.3, 0.1])
        assert op.shift(3) == op
        window = JacobiOperator.window([0.6, 0.4], [0.1, 0.2], n_min=0)
        assert window.shift(1).a_at(0) == window.a_at(1)

    def test_bloch_matrix_single_site(self):
        op = JacobiOperator.free()
        np.testing.assert_allclose(op.bloch_matrix(0.), [[1.]])
        np.testing.assert_allclose(op.bloch_matrix(np.pi), [[-1.]])

    def test_conserved_traces(self):
        op = JacobiOperator.free(period=2)
        np.testing.assert_allclose(conserved_traces(op, 4), [0., 0.5, 0., 0.375], atol=1e-14)
        with self.assertRaises(DomainError):
            conserved_traces(op, 5)

    def test_conserved_traces_use_tiled_window(self):
        op = preset_operator('p2-gap')
        literal = np.trace(op.bloch_matrix(0.) @ op.bloch_matrix(0.)) / op.period
        self.assertAlmostEqual(literal, 1.)
        self.assertAlmostEqual(conserved_traces(op, 2)[1], 0.6 ** 2 + 0.4 ** 2, places=14)

    def test_lax_equation_on_bloch_matrices(self):
        op = preset_operator('p4-seed0')
        da, db = toda_rhs(op)
        h = 1e-3
        moved = op.with_coefficients(op.a + h * da, op.b + h * db)
        for theta in (0., 0.4):
            J, P = op.bloch_matrix(theta), op.lax_P_bloch(theta)
            J_dot = (moved.bloch_matrix(theta) - J) / h
            np.testing.assert_allclose(P @ J - J @ P, J_dot, atol=1e-10)
            np.testing.assert_allclose(P, -P.conj().T, atol=1e-15)

    def test_lax_P_restriction(self):
        op = preset_operator('p4-seed0')
        values, vectors = np.linalg.eigh(op.bloch_matrix(0.))
        for z, u in zip(values, vectors.T):
            assert lax_P_restriction_residual(op, u, z) <= 1e-12


class TestRecurrence(unittest.TestCase):
    def test_solution_satisfies_recurrence(self):
        op = JacobiOperator.periodic([0.6, 0.4], [0.1, -0.2])
        z = 0.3
        u = solve_recurrence(op, z, 0.7, -0.2, -10, 10)
        sites = np.arange(-9, 10)
        lhs = op.a_at(sites) * u[sites + 11] + op.b_at(sites) * u[sites + 10] + op.a_at(sites - 1) * u[sites + 9]
        np.testing.assert_allclose(lhs, z * u[sites + 10], atol=1e-10)

    def test_wronskian_constant_in_n(self):
        op = preset_operator('p4-seed0')
        u = solve_recurrence(op, 0.1, 1., 0., -8, 8)
        v = solve_recurrence(op, 0.1, 0., 1., -8, 8)
        w = [wronskian(op, u, v, n, n_min=-8) for n in range(-8, 8)]
        np.testing.assert_allclose(w, w[8], rtol=1e-10)
        with self.assertRaises(DimensionError):
            wronskian(op, u, v, 8, n_min=-8)

    def test_transfer_matrices(self):
        op = JacobiOperator.periodic([0.6, 0.4], [0.1, -0.2])
        for n in range(3):
            self.assertAlmostEqual(np.linalg.det(one_step(op, 0.7, n)), 1., places=12)
        np.testing.assert_array_equal(transfer_matrix(op, 0.7, 2, 2), np.eye(2))
        with self.assertRaises(DomainError):
            transfer_matrix(op, 0.7, 3, 2)
        # T(0, n) carries the coordinates (u(1), a_0 u(0)) to (u(n + 1), a_n u(n))
        u = solve_recurrence(op, 0.7, 0.3, 1.1, 0, 6)
        V = transfer_matrix(op, 0.7, 0, 5) @ np.array([u[1], op.a_at(0) * u[0]])
        np.testing.assert_allclose(V, [u[6], op.a_at(5) * u[5]], rtol=1e-12)
        assert transfer_matrix(op, 0.7 + 0.1j, 0, 2).dtype == np.complex128

    def test_floquet(self):
        op = JacobiOperator.free()
        self.assertAlmostEqual(floquet_discriminant(op, 1.), 2.)
        self.assertAlmostEqual(floquet_discriminant(op, 0.5), 1.)
        multipliers = floquet_multipliers(JacobiOperator.periodic([0.6, 0.4], [0., 0.]), 0.)
        assert abs(multipliers[0]) < 1. < abs(multipliers[1])
        self.assertAlmostEqual(abs(np.prod(multipliers)), 1., places=12)
        np.testing.assert_allclose(monodromy(op, 0.3), one_step(op, 0.3, 1))


class TestToda(unittest.TestCase):
    def test_rhs(self):
        da, db = toda_rhs(JacobiOperator.free(period=3))
        np.testing.assert_array_equal(da, 0.)
        np.testing.assert_array_equal(db, 0.)
        da, db = toda_rhs(JacobiOperator.periodic([0.5, 0.5], [0.2, 0.2]))
        np.testing.assert_array_equal(da, 0.)
        np.testing.assert_array_equal(db, 0.)
        da, db = toda_rhs(JacobiOperator.periodic([0.6, 0.4], [0., 0.]))
        np.testing.assert_allclose(da, [0., 0.])
        np.testing.assert_allclose(db, [0.4, -0.4])

    def test_free_is_stationary(self):
        op = JacobiOperator.free(period=3)
        state = integrate_toda(TodaState(op), 2.5, tol=1e-10)
        assert state.t == 2.5
        np.testing.assert_allclose(state.op.a, op.a)
        np.testing.assert_allclose(state.op.b, op.b)

    def test_period_two(self):
        op = JacobiOperator.periodic([0.6, 0.4], [0., 0.])
        J = integrate_toda(TodaState(op), 0.1, tol=1e-12).op
        assert J.b[0] > 0
        self.assertAlmostEqual(J.b[0], -J.b[1], places=12)
        coarse = TodaFlow(op, tol=1e-8).at(0.1)
        np.testing.assert_allclose(coarse.b, J.b, atol=1e-7)

    def test_isospectral(self):
        op = preset_operator('p4-seed0')
        eig0 = np.linalg.eigvalsh(op.bloch_matrix(0.))
        for J in TodaFlow(op, tol=1e-10).operators([0.25, 0.5, 1.]):
            np.testing.assert_allclose(np.linalg.eigvalsh(J.bloch_matrix(0.)), eig0, atol=1e-8)
            np.testing.assert_allclose(conserved_traces(J, 4), conserved_traces(op, 4), atol=1e-8)

    def test_invalid_tolerance(self):
        with self.assertRaises(DomainError):
            TodaFlow(JacobiOperator.free(), tol=0.)

    def test_wronskian_invariance(self):
        op = preset_operator('p2-gap')
        u = solve_recurrence(op, 0., 1., 0., -20, 20)
        v = solve_recurrence(op, 0., 0., 1., -20, 20)
        ops, sols = propagate_solutions(op, [u, v], -20, [0., 0.5, 1.], tol=1e-10)
        w = [wronskian(J, s[0], s[1], 0, n_min=-20) for J, s in zip(ops, sols)]
        np.testing.assert_allclose(w, w[0], atol=1e-6)
        with self.assertRaises(DimensionError):
            propagate_solutions(op, [u, v[:-1]], -20, [0., 1.], tol=1e-10)


class TestFlaschka(unittest.TestCase):
    def test_equal_spacing(self):
        a, b = flaschka(np.zeros(4), np.zeros(4))
        np.testing.assert_allclose(a, 0.5)
        np.testing.assert_allclose(b, 0.)

    def test_hand_value(self):
        a, _ = flaschka([0., 0.], [0., 2. * np.log(2.)])
        self.assertAlmostEqual(a[0], 0.25, places=15)

    def test_round_trip(self):
        rng = np.random.Generator(np.random.PCG64(3))
        p, q = rng.normal(size=6), np.cumsum(rng.uniform(0.1, 1., size=6))
        a, b = flaschka(p, q)
        p2, q2 = inverse_flaschka(a, b, q0=q[0])
        np.testing.assert_allclose(p2, p, atol=1e-14)
        np.testing.assert_allclose(q2, q, atol=1e-14)
        with self.assertRaises(DomainError):
            inverse_flaschka([0.5, -0.1], [0., 0.], 0.)

    def test_hamiltonian_conserved(self):
        op = preset_operator('p4-seed0')

        def energy(J):
            p, q = inverse_flaschka(J.a, J.b, 0.)
            return hamiltonian(p, q, chain_drift(J.a))

        e0 = energy(op)
        for J in TodaFlow(op, tol=1e-11).operators([0.5, 1.]):
            self.assertAlmostEqual(energy(J), e0, places=8)
            self.assertAlmostEqual(chain_drift(J.a), chain_drift(op.a), places=8)

    def test_hamiltonian_of_free_chain(self):
        # p = 0 and unit bonds: every bond contributes e^0 = 1
        self.assertAlmostEqual(hamiltonian(np.zeros(3), np.zeros(3)), 3.)


if __name__ == '__main__':
    unittest.main()
