# ErgoCert markov/tests_dobrushin.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

import numpy as np
from django.test import SimpleTestCase, tag

from .dobrushin import (BLOCK_EXACT, BRACKET, PAULI_KERNEL, VERTEX_ENUMERATION, classical_dobrushin,
                        delta, delta_bracket, delta_exact, delta_pair_formula, delta_pauli_kernel,
                        delta_vertex_enum, induced_norm, induced_norm_bound, induced_norms)
from .exceptions import GuardError, MarkovianityError, MethodError
from .markov_ops import (MarkovOperator, block_projection, projection_from_matrix,
                         rank_one_projection)
from .sampling import (random_annihilated, random_block_projection, random_commuting,
                       random_invariant_markov, random_markov)
from .state_space import StateSpace


CLASSICAL2 = StateSpace.classical(2)
QUBIT = StateSpace.qubit()
PROPERTY_TOL = 1e-10

PHI = np.diag([1.0, -1.0, 0.0, 1.0])
PHI_P = projection_from_matrix(QUBIT, np.diag([1.0, 0.0, 0.0, 1.0]))


def _create_block_instance(rng, max_n=8):
    n = int(rng.integers(2, max_n + 1))
    P = random_block_projection(n, rng)
    return P, random_markov(n, rng)


def _classical_norm(m):
    return induced_norm(m, StateSpace.classical(m.shape[0]))


# ========== Classical Block Projections ==========

class DeltaExactTests(SimpleTestCase):
    def test_examples(self):
        P = rank_one_projection(CLASSICAL2, [0.5, 0.5])
        T = np.array([[0.7, 0.2], [0.3, 0.8]])
        self.assertAlmostEqual(delta_exact(T, P).value, 0.5, places=15)
        self.assertEqual(delta_exact(P.matrix, P).value, 0.0)
        self.assertEqual(delta_exact(np.eye(2), P).value, 1.0)

    def test_witness(self):
        P = block_projection(StateSpace.classical(5), [[0, 1], [2, 3, 4]],
                             [[0.5, 0.5], [0.2, 0.3, 0.5]])
        T = random_markov(5, 3)
        result = delta_exact(T, P)
        self.assertEqual(result.method, BLOCK_EXACT)
        self.assertAlmostEqual(np.abs(result.witness).sum(), 1.0, places=15)
        np.testing.assert_allclose(P.matrix @ result.witness, np.zeros(5), atol=1e-15)
        self.assertAlmostEqual(np.abs(T @ result.witness).sum(), result.value, places=14)

    def test_ties_go_to_first_pair(self):
        P = rank_one_projection(StateSpace.classical(3), [1 / 3, 1 / 3, 1 / 3])
        result = delta_exact(np.eye(3), P)
        self.assertEqual(result.value, 1.0)
        np.testing.assert_array_equal(result.witness, [0.5, -0.5, 0.0])

    def test_identity_projection(self):
        space = StateSpace.classical(3)
        P = block_projection(space, [[0], [1], [2]], [[1.0], [1.0], [1.0]])
        for method in (delta_exact, delta_pair_formula):
            result = method(random_markov(3, 0), P)
            self.assertEqual(result.value, 1.0)
            self.assertTrue(result.note)

    def test_requires_block_structure(self):
        P = projection_from_matrix(CLASSICAL2, [[0.5, 0.5], [0.5, 0.5]])
        with self.assertRaises(MethodError):
            delta_exact(np.eye(2), P)

    def test_single_block_is_classical_coefficient(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            n = int(rng.integers(2, 7))
            P = rank_one_projection(StateSpace.classical(n), rng.dirichlet(np.ones(n)))
            T = random_markov(n, rng)
            self.assertAlmostEqual(delta_pair_formula(T, P).value, classical_dobrushin(T), places=14)


class VertexEnumerationTests(SimpleTestCase):
    def test_zero_projection(self):
        T = np.array([[0.5, -2.0, 0.0], [0.25, 1.0, 0.0], [0.0, 0.0, 0.3]])
        result = delta_vertex_enum(T, np.zeros((3, 3)), space=StateSpace.classical(3))
        self.assertAlmostEqual(result.value, 3.0, places=12)
        self.assertEqual(result.method, VERTEX_ENUMERATION)

    def test_non_block_projection(self):
        # mixes everything onto (0.2, 0.8); kernel is the zero-mass plane
        P = projection_from_matrix(CLASSICAL2, [[0.2, 0.2], [0.8, 0.8]])
        T = np.array([[0.7, 0.2], [0.3, 0.8]])
        self.assertAlmostEqual(delta_vertex_enum(T, P).value, 0.5, places=12)

    def test_guards(self):
        with self.assertRaises(GuardError):
            delta_vertex_enum(np.eye(11), np.zeros((11, 11)))
        with self.assertRaises(MarkovianityError):
            delta_vertex_enum(np.eye(2), [[0.5, 0.6], [0.5, 0.4]])

    def test_oracle_agreement(self):
        rng = np.random.default_rng(2026)
        for trial in range(500):
            P, T = _create_block_instance(rng, max_n=6)
            exact = delta_exact(T, P).value
            oracle = delta_vertex_enum(T, P).value
            pair = delta_pair_formula(T, P).value
            self.assertLessEqual(abs(exact - oracle), 1e-10, msg='trial {}'.format(trial))
            self.assertLessEqual(abs(exact - pair), 1e-12, msg='trial {}'.format(trial))


@tag('property')
class DobrushinPropertyTests(SimpleTestCase):
    trials = 1000

    def test_properties(self):
        rng = np.random.default_rng(1)
        tol = PROPERTY_TOL
        for trial in range(self.trials):
            P, T = _create_block_instance(rng)
            n = P.space.n
            S = random_markov(n, rng)
            msg = 'trial {}'.format(trial)
            d_t = delta_exact(T, P).value

            self.assertGreaterEqual(d_t, -tol, msg=msg)
            self.assertLessEqual(d_t, 1.0 + tol, msg=msg)

            # |d(T) - d(S)| <= d(T - S) <= |T - S|
            d_diff = delta_exact(T - S, P).value
            self.assertLessEqual(abs(d_t - delta_exact(S, P).value), d_diff + tol, msg=msg)
            self.assertLessEqual(d_diff, _classical_norm(T - S) + tol, msg=msg)

            H = random_commuting(P, rng)
            self.assertLessEqual(delta_exact(T @ H, P).value, d_t * _classical_norm(H) + tol, msg=msg)

            H = random_annihilated(P, rng)
            self.assertLessEqual(_classical_norm(T @ H), d_t * _classical_norm(H) + tol, msg=msg)

            K = random_invariant_markov(P, rng)
            self.assertLessEqual(delta_exact(T @ K, P).value,
                                 d_t * delta_exact(K, P).value + tol, msg=msg)


# ========== Brackets ==========

class BracketTests(SimpleTestCase):
    def test_bracket_contains_exact_value(self):
        rng = np.random.default_rng(17)
        for trial in range(40):
            P, T = _create_block_instance(rng, max_n=6)
            exact = delta_exact(T, P).value
            result = delta_bracket(T, P, restarts=4, seed=trial)
            self.assertEqual(result.method, BRACKET)
            self.assertLessEqual(result.lower, exact + PROPERTY_TOL, msg='trial {}'.format(trial))
            self.assertGreaterEqual(result.upper, exact - PROPERTY_TOL, msg='trial {}'.format(trial))

    def test_bracket_is_deterministic(self):
        P, T = _create_block_instance(np.random.default_rng(4), max_n=6)
        first = delta_bracket(T, P, seed=9)
        second = delta_bracket(T, P, seed=9)
        self.assertEqual(first.bracket, second.bracket)

    def test_qubit_phi(self):
        result = delta_bracket(PHI, PHI_P)
        self.assertGreaterEqual(result.lower, 1.0 - 1e-9)
        self.assertLessEqual(result.upper, 1.0 + 1e-12)

    def test_qubit_cesaro_average(self):
        # (Phi + Phi^2 + Phi^3) / 3 = diag(1, -1/3, 0, 1)
        average = np.diag([1.0, -1.0 / 3.0, 0.0, 1.0])
        result = delta_bracket(average, PHI_P, space=QUBIT)
        self.assertGreaterEqual(result.lower, 1.0 / 3.0 - 1e-9)
        self.assertLessEqual(result.upper, 1.0 / 3.0 + 1e-12)

    def test_projection_itself(self):
        result = delta_bracket(PHI_P.matrix, PHI_P)
        self.assertAlmostEqual(result.lower, 0.0, places=12)
        self.assertAlmostEqual(result.upper, 0.0, places=12)

    def test_trivial_kernel(self):
        result = delta_bracket(np.eye(2), np.eye(2), space=CLASSICAL2)
        self.assertEqual(result.bracket, (1.0, 1.0))
        self.assertTrue(result.note)

    def test_pauli_kernel_inside_bracket(self):
        rng = np.random.default_rng(23)
        for trial in range(30):
            T = np.diag(np.concatenate([[1.0], rng.uniform(-1.0, 1.0, 3)]))
            p = np.concatenate([[1.0], rng.integers(0, 2, 3).astype(float)])
            P = projection_from_matrix(QUBIT, np.diag(p))
            exact = delta_pauli_kernel(T, P).value
            result = delta_bracket(T, P, restarts=4, seed=trial)
            self.assertLessEqual(result.lower, exact + PROPERTY_TOL, msg='trial {}'.format(trial))
            self.assertGreaterEqual(result.upper, exact - PROPERTY_TOL, msg='trial {}'.format(trial))


# ========== Qubit and Dispatch ==========

class PauliKernelTests(SimpleTestCase):
    def test_phi(self):
        result = delta_pauli_kernel(PHI, PHI_P)
        self.assertEqual(result.value, 1.0)
        np.testing.assert_array_equal(result.witness, [0.0, 0.5, 0.0, 0.0])

    def test_depolarizing_projection(self):
        P = projection_from_matrix(QUBIT, np.diag([1.0, 0.0, 0.0, 0.0]))
        result = delta_pauli_kernel(np.diag([1.0, 0.3, -0.6, 0.2]), P)
        self.assertAlmostEqual(result.value, 0.6, places=15)
        np.testing.assert_array_equal(result.witness, [0.0, 0.0, 0.5, 0.0])

    def test_needs_diagonal_maps(self):
        T = np.eye(4)
        T[3, 0] = 0.1
        with self.assertRaises(MethodError):
            delta_pauli_kernel(T, PHI_P)


class DispatchTests(SimpleTestCase):
    def test_methods(self):
        P = rank_one_projection(CLASSICAL2, [0.5, 0.5])
        self.assertEqual(delta(np.eye(2), P).method, BLOCK_EXACT)
        Pm = projection_from_matrix(CLASSICAL2, [[0.5, 0.5], [0.5, 0.5]])
        self.assertEqual(delta(np.eye(2), Pm).method, VERTEX_ENUMERATION)
        self.assertEqual(delta(PHI, PHI_P).method, PAULI_KERNEL)
        damping = np.eye(4)
        damping[3, 0] = 0.1
        damping[3, 3] = 0.9
        self.assertEqual(delta(damping, PHI_P, restarts=2).method, BRACKET)


class InducedNormTests(SimpleTestCase):
    def test_examples(self):
        self.assertAlmostEqual(induced_norm(random_markov(4, 0), StateSpace.classical(4)), 1.0,
                               places=14)
        extractor = np.zeros((4, 4))
        extractor[1, 1] = 1.0
        self.assertEqual(induced_norm(extractor, QUBIT), 1.0)
        self.assertEqual(induced_norm(np.zeros((4, 4)), QUBIT), 0.0)
        self.assertAlmostEqual(induced_norm(MarkovOperator(CLASSICAL2, [[0.7, 0.2], [0.3, 0.8]])), 1.0,
                               places=15)

    def test_sphere_search(self):
        # output Bloch coordinates (0, 1/4 + u1/2, 0, 0) on the pure state (1/2, u/2)
        m = np.zeros((4, 4))
        m[1, 0] = 0.5
        m[1, 1] = 1.0
        self.assertAlmostEqual(induced_norm(m, QUBIT), 1.5, places=8)
        self.assertEqual(induced_norm_bound(m, QUBIT), 1.5)

    def test_bound_dominates_sphere_search(self):
        rng = np.random.default_rng(12)
        for trial in range(50):
            m = rng.standard_normal((4, 4))
            searched = induced_norm(m, QUBIT, restarts=2)
            self.assertGreaterEqual(induced_norm_bound(m, QUBIT), searched - 1e-12,
                                    msg='trial {}'.format(trial))
            m[1:, 0] = 0.0
            self.assertAlmostEqual(induced_norm_bound(m, QUBIT), induced_norm(m, QUBIT), places=12,
                                   msg='trial {}'.format(trial))
        classical = random_markov(3, 5) - np.eye(3)
        self.assertEqual(induced_norm_bound(classical, StateSpace.classical(3)),
                         induced_norm(classical, StateSpace.classical(3)))

    def test_vectorized(self):
        rng = np.random.default_rng(8)
        stack = np.array([np.diag(np.concatenate([[1.0], rng.uniform(-1, 1, 3)])) for _ in range(5)])
        expected = [induced_norm(m, QUBIT) for m in stack]
        np.testing.assert_allclose(induced_norms(stack, QUBIT), expected)
        classical = np.array([random_markov(3, k) - np.eye(3) for k in range(4)])
        np.testing.assert_allclose(induced_norms(classical, StateSpace.classical(3)),
                                   [induced_norm(m, StateSpace.classical(3)) for m in classical])
