# ErgoCert markov/tests_markov_ops.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

import numpy as np
from django.test import SimpleTestCase, tag

from .exceptions import DimensionError, MarkovianityError, ParameterError
from .markov_ops import (MarkovOperator, MarkovProjection, block_projection, in_kernel,
                         kernel_basis, projection_from_matrix, projection_relations,
                         rank_one_projection, require_markov, validate_markov)
from .sampling import random_block_projection, random_markov
from .state_space import StateSpace


CLASSICAL2 = StateSpace.classical(2)
CLASSICAL5 = StateSpace.classical(5)
QUBIT = StateSpace.qubit()


def _amplitude_damping(gamma):
    """Bloch matrix of the amplitude damping channel, which is Markov but not Pauli-diagonal."""
    s = np.sqrt(1.0 - gamma)
    return np.array([[1.0, 0.0, 0.0, 0.0],
                     [0.0, s, 0.0, 0.0],
                     [0.0, 0.0, s, 0.0],
                     [gamma, 0.0, 0.0, 1.0 - gamma]])


def _create_five_state_projection():
    return block_projection(CLASSICAL5, [[0, 1], [2, 3, 4]], [[0.5, 0.5], [0.2, 0.3, 0.5]])


# ========== Test Cases ==========

MARKOV_CASES = [
    # space, matrix, expected is_markov, description
    (CLASSICAL2, [[0.7, 0.2], [0.3, 0.8]], True, 'column-stochastic'),
    (CLASSICAL2, [[0.7, 0.3], [0.2, 0.8]], False, 'row-stochastic only'),
    (CLASSICAL2, [[1.2, 0.0], [-0.2, 1.0]], False, 'negative entry'),
    (QUBIT, np.diag([1.0, 1.0, 0.0, 0.5]), True, 'Pauli channel inside the cube'),
    (QUBIT, np.diag([1.0, 1.2, 0.0, 0.0]), False, 'Pauli diagonal above one'),
    (QUBIT, np.diag([0.9, 0.0, 0.0, 0.0]), False, 'trace not preserved'),
]


class MarkovOperatorTests(SimpleTestCase):
    def test_validate_markov(self):
        for space, matrix, expected, message in MARKOV_CASES:
            report = validate_markov(MarkovOperator(space, matrix))
            self.assertEqual(report.is_markov, expected, msg=message)

    def test_sampled_qubit_positivity(self):
        report = validate_markov(MarkovOperator(QUBIT, _amplitude_damping(0.3)))
        self.assertTrue(report.is_markov)
        self.assertFalse(report.exact)

        transpose = np.diag([1.0, 1.0, -1.0, 1.0])
        self.assertTrue(validate_markov(MarkovOperator(QUBIT, transpose)).is_markov)

    def test_require_markov(self):
        with self.assertRaises(MarkovianityError):
            require_markov(MarkovOperator(CLASSICAL2, [[0.5, 0.5], [0.6, 0.5]]))

    def test_shape_checks(self):
        with self.assertRaises(DimensionError):
            MarkovOperator(CLASSICAL2, np.eye(3))
        with self.assertRaises(ParameterError):
            MarkovOperator(CLASSICAL2, [[np.inf, 0.0], [0.0, 1.0]])
        with self.assertRaises(DimensionError):
            MarkovOperator.identity(CLASSICAL2) @ MarkovOperator.identity(StateSpace.classical(4))

    def test_matrix_is_read_only(self):
        T = MarkovOperator.identity(CLASSICAL2)
        with self.assertRaises(ValueError):
            T.matrix[0, 0] = 2.0

    def test_composition(self):
        T = MarkovOperator(CLASSICAL2, [[0.7, 0.2], [0.3, 0.8]])
        np.testing.assert_allclose((T @ T).matrix, T.matrix @ T.matrix)
        np.testing.assert_allclose(T([1.0, 0.0]), [0.7, 0.3])


class ProjectionTests(SimpleTestCase):
    def test_block_projection(self):
        P = _create_five_state_projection()
        m = P.matrix
        np.testing.assert_allclose(m @ m, m, atol=1e-15)
        np.testing.assert_allclose(m[:, 0], [0.5, 0.5, 0.0, 0.0, 0.0])
        np.testing.assert_allclose(m[:, 4], [0.0, 0.0, 0.2, 0.3, 0.5])
        np.testing.assert_allclose(m.sum(axis=0), np.ones(5))
        self.assertTrue(P.is_block)
        self.assertEqual(P.describe(), {'blocks': [[0, 1], [2, 3, 4]],
                                        'weights': [[0.5, 0.5], [0.2, 0.3, 0.5]]})

    def test_full_length_weights(self):
        P = block_projection(CLASSICAL5, [[0, 1], [2, 3, 4]],
                             [[0.5, 0.5, 0.0, 0.0, 0.0], [0.0, 0.0, 0.2, 0.3, 0.5]])
        np.testing.assert_allclose(P.matrix, _create_five_state_projection().matrix)
        with self.assertRaises(ParameterError):
            block_projection(CLASSICAL5, [[0, 1], [2, 3, 4]],
                             [[0.5, 0.0, 0.5, 0.0, 0.0], [0.0, 0.0, 0.2, 0.3, 0.5]])

    def test_weights_follow_block_order(self):
        Q = block_projection(CLASSICAL2, [[1, 0]], [[0.25, 0.75]])
        np.testing.assert_allclose(Q.matrix, [[0.75, 0.75], [0.25, 0.25]])

    def test_block_errors(self):
        cases = [
            ([[0, 1], [1, 2, 3, 4]], [[0.5, 0.5], [0.25] * 4], ParameterError, 'overlap'),
            ([[0, 1], [2, 3]], [[0.5, 0.5], [0.5, 0.5]], ParameterError, 'missing index'),
            ([[0, 1], [2, 3, 4]], [[0.5, 0.5]], ParameterError, 'one weight vector short'),
            ([[0, 1], [2, 3, 4]], [[0.6, 0.6], [0.2, 0.3, 0.5]], ParameterError, 'mass 1.2'),
            ([[0, 1], [2, 3, 4]], [[1.0], [0.2, 0.3, 0.5]], DimensionError, 'wrong length'),
        ]
        for blocks, weights, error, message in cases:
            with self.subTest(message):
                with self.assertRaises(error):
                    block_projection(CLASSICAL5, blocks, weights)
        with self.assertRaises(ParameterError):
            block_projection(QUBIT, [[0]], [[1.0]])

    def test_not_idempotent(self):
        with self.assertRaises(MarkovianityError):
            MarkovProjection(MarkovOperator(CLASSICAL2, [[0.7, 0.2], [0.3, 0.8]]))

    def test_projection_from_matrix(self):
        P = projection_from_matrix(QUBIT, np.diag([1.0, 0.0, 0.0, 1.0]))
        self.assertFalse(P.is_block)
        self.assertEqual(P.describe(), {'pauli_p': [0.0, 0.0, 1.0]})
        with self.assertRaises(MarkovianityError):
            projection_from_matrix(CLASSICAL2, np.diag([1.0, 0.0]))

    def test_kernel(self):
        P = rank_one_projection(CLASSICAL2, [0.5, 0.5])
        basis = kernel_basis(P)
        self.assertEqual(basis.shape, (2, 1))
        self.assertAlmostEqual(abs(basis[0, 0]), 2 ** -0.5, places=14)
        self.assertAlmostEqual(basis[0, 0] + basis[1, 0], 0.0, places=14)
        self.assertTrue(in_kernel(P, [1.0, -1.0]))
        self.assertFalse(in_kernel(P, [1.0, 0.0]))

    def test_relations(self):
        P = rank_one_projection(CLASSICAL2, [0.5, 0.5])
        T = MarkovOperator(CLASSICAL2, [[0.6, 0.4], [0.4, 0.6]])
        report = projection_relations(P, P, T)
        self.assertTrue(report.P_idempotent)
        self.assertTrue(report.Q_leq_P)
        self.assertTrue(report.T_commutes_P)
        self.assertTrue(report.TP_equals_P)

        skewed = MarkovOperator(CLASSICAL2, [[0.9, 0.9], [0.1, 0.1]])
        report = projection_relations(P, P, skewed)
        self.assertFalse(report.T_commutes_P)
        self.assertFalse(report.TP_equals_P)

    def test_relations_q_below_p(self):
        P = _create_five_state_projection()
        Q = rank_one_projection(CLASSICAL5, [0.25, 0.25, 0.1, 0.15, 0.25])
        T = MarkovOperator.identity(CLASSICAL5)
        self.assertTrue(projection_relations(P, Q, T).Q_leq_P)
        self.assertFalse(projection_relations(Q, P, T).Q_leq_P)


# ========== Random Instances ==========

@tag('property')
class MarkovPropertyTests(SimpleTestCase):
    def test_random_block_projections(self):
        rng = np.random.default_rng(21)
        for trial in range(300):
            n = int(rng.integers(1, 9))
            P = random_block_projection(n, rng)
            msg = 'trial {}: blocks {}'.format(trial, P.blocks)
            np.testing.assert_allclose(P.matrix @ P.matrix, P.matrix, rtol=0, atol=1e-12,
                                       err_msg=msg)
            self.assertTrue(validate_markov(P.base).is_markov, msg=msg)
            for block, q in zip(P.blocks, P.weights):
                for i in block:
                    np.testing.assert_allclose(P.matrix[:, i], q, rtol=0, atol=1e-15, err_msg=msg)

    def test_composition_is_markov(self):
        rng = np.random.default_rng(22)
        for trial in range(1000):
            n = int(rng.integers(1, 9))
            space = StateSpace.classical(n)
            T = MarkovOperator(space, random_markov(n, rng, sparsity=float(rng.uniform(0, 0.5))))
            S = MarkovOperator(space, random_markov(n, rng))
            report = validate_markov(T @ S, tol=1e-12)
            self.assertTrue(report.is_markov, msg='trial {}'.format(trial))

    def test_pauli_composition_is_markov(self):
        rng = np.random.default_rng(23)
        for trial in range(1000):
            T = MarkovOperator(QUBIT, np.diag(np.concatenate([[1.0], rng.uniform(-1, 1, 3)])))
            S = MarkovOperator(QUBIT, np.diag(np.concatenate([[1.0], rng.uniform(-1, 1, 3)])))
            report = validate_markov(T @ S)
            self.assertTrue(report.is_markov and report.exact, msg='trial {}'.format(trial))
