# ErgoCert markov/tests_perturbation.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

import math

import numpy as np
from django.test import SimpleTestCase, tag

from .ergodicity import certify_mean, certify_uniform
from .exceptions import DimensionError, GuardError, MarkovianityError, ParameterError
from .markov_ops import MarkovOperator, block_projection, rank_one_projection
from .perturbation import (LAMBDA_CAP, dyson_eval, dyson_terms, ergodize, ergodize_lambda,
                           openness_radius, perturb, poisson_tail, probe_openness, rho_full,
                           rho_r)
from .sampling import random_block_projection, random_invariant_generator
from .semigroup import Semigroup, evaluate_matrix
from .state_space import StateSpace


CLASSICAL2 = StateSpace.classical(2)
UNIFORM2 = rank_one_projection(CLASSICAL2, [0.5, 0.5])
MIXER = MarkovOperator(CLASSICAL2, [[0.3, 0.6], [0.7, 0.4]])


def _create_two_state():
    return Semigroup.continuous(CLASSICAL2, [[-1.0, 1.0], [1.0, -1.0]], UNIFORM2)


def _create_identity_semigroup():
    return Semigroup.continuous(CLASSICAL2, np.zeros((2, 2)), UNIFORM2)


def _create_frozen_block_semigroup():
    """Five states in blocks {0, 1} and {2, 3, 4}; the second block never moves, so S is not ergodic."""
    space = StateSpace.classical(5)
    P = block_projection(space, [[0, 1], [2, 3, 4]], [[0.5, 0.5], [1 / 3, 1 / 3, 1 / 3]])
    a = np.zeros((5, 5))
    a[:2, :2] = [[-1.0, 1.0], [1.0, -1.0]]
    return Semigroup.continuous(space, a, P), P


def _closed_form(lam, t):
    """exp(t lam (P - I)) = P + exp(-lam t)(I - P) for the uniform two-state projection."""
    p = UNIFORM2.matrix
    return p + math.exp(-lam * t) * (np.eye(2) - p)


# ========== Phillips Perturbation ==========

class PerturbTests(SimpleTestCase):
    def test_identity_closed_form(self):
        for lam in (0.1, 1.0, 5.0):
            perturbed = perturb(_create_identity_semigroup(), UNIFORM2, lam)
            self.assertEqual(perturbed.lam, lam)
            np.testing.assert_allclose(perturbed.generator, lam * (UNIFORM2.matrix - np.eye(2)))
            for t in (0.5, 2.0):
                np.testing.assert_allclose(evaluate_matrix(perturbed.semigroup, t),
                                           _closed_form(lam, t), atol=1e-14)
            self.assertIs(perturbed.semigroup.commuting_projection, UNIFORM2)

    def test_tiny_lambda(self):
        perturbed = perturb(_create_two_state(), MIXER, 1e-12)
        np.testing.assert_allclose(evaluate_matrix(perturbed.semigroup, 1.0),
                                   evaluate_matrix(_create_two_state(), 1.0), atol=1e-11)

    def test_non_commuting_q_drops_projection(self):
        perturbed = perturb(_create_two_state(), MarkovOperator(CLASSICAL2, [[0.9, 0.9], [0.1, 0.1]]), 1.0)
        self.assertIsNone(perturbed.semigroup.commuting_projection)

    def test_describe(self):
        d = perturb(_create_two_state(), MIXER, 0.5).describe()
        self.assertEqual(d['perturbation']['lambda'], 0.5)
        self.assertEqual(d['perturbation']['q_operator'], [[0.3, 0.6], [0.7, 0.4]])

    def test_errors(self):
        with self.assertRaises(ParameterError):
            perturb(Semigroup.discrete(MIXER), MIXER, 1.0)
        for lam in (0.0, -1.0, math.inf):
            with self.assertRaises(ParameterError):
                perturb(_create_two_state(), MIXER, lam)
        with self.assertRaises(MarkovianityError):
            perturb(_create_two_state(), MarkovOperator(CLASSICAL2, [[0.5, 0.5], [0.6, 0.5]]), 1.0)
        with self.assertRaises(DimensionError):
            perturb(_create_two_state(), MarkovOperator.identity(StateSpace.classical(3)), 1.0)


# ========== Dyson Series ==========

class DysonTests(SimpleTestCase):
    def test_poisson_tail(self):
        self.assertAlmostEqual(poisson_tail(0, 0.7), 1 - math.exp(-0.7), places=15)
        self.assertEqual(poisson_tail(3, 0.0), 0.0)
        self.assertLess(poisson_tail(20, 1.0), 1e-19)

    def test_zeroth_order(self):
        for lam, t in ((0.5, 1.0), (2.0, 0.25), (1.0, 3.0)):
            with self.subTest(lam=lam, t=t):
                result = dyson_eval(_create_identity_semigroup(), UNIFORM2, lam, t, 0)
                self.assertAlmostEqual(result.tail_bound, 1 - math.exp(-lam * t), places=14)
                np.testing.assert_allclose(result.matrix, math.exp(-lam * t) * np.eye(2), atol=1e-14)
                self.assertLessEqual(result.closed_form_gap, result.tail_bound + 1e-12)

    def test_converges_to_closed_form(self):
        for lam in (0.5, 1.0, 2.0):
            for t in (0.5, 1.0, 2.0):
                with self.subTest(lam=lam, t=t):
                    result = dyson_eval(_create_two_state(), MIXER, lam, t, 20)
                    self.assertLess(result.closed_form_gap, 1e-8)
                    self.assertGreaterEqual(result.panels, 1)
                    closed = evaluate_matrix(perturb(_create_two_state(), MIXER, lam).semigroup, t)
                    np.testing.assert_allclose(result.matrix, closed, atol=1e-8)

    def test_ladder_mass(self):
        t = 1.5
        ladder, _ = dyson_terms(_create_two_state(), MIXER, t, 5)
        for k, term in enumerate(ladder):
            np.testing.assert_allclose(term.sum(axis=0), [t ** k / math.factorial(k)] * 2, atol=1e-9,
                                       err_msg='k = {}'.format(k))
            self.assertTrue(np.all(term >= -1e-12))

    def test_zero_time(self):
        ladder, panels = dyson_terms(_create_two_state(), MIXER, 0.0, 3)
        self.assertEqual(panels, 0)
        np.testing.assert_array_equal(ladder[0], np.eye(2))
        self.assertTrue(all(not np.any(term) for term in ladder[1:]))

    def test_errors(self):
        with self.assertRaises(ParameterError):
            dyson_terms(Semigroup.discrete(MIXER), MIXER, 1.0, 2)
        with self.assertRaises(ParameterError):
            dyson_terms(_create_two_state(), MIXER, 1.0, -1)
        with self.assertRaises(ParameterError):
            dyson_terms(_create_two_state(), MIXER, -1.0, 2)


# ========== Metrics ==========

class RhoTests(SimpleTestCase):
    def test_rho_r_closed_form(self):
        S = _create_identity_semigroup()
        for lam in (0.3, 1.0):
            S2 = perturb(S, UNIFORM2, lam).semigroup
            for r in (0.5, 1.0, 4.0):
                with self.subTest(lam=lam, r=r):
                    metric = rho_r(S, S2, r)
                    self.assertAlmostEqual(metric.value, 1 - math.exp(-lam * r), places=12)
                    self.assertLessEqual(metric.certified_error, 1e-6)
                    self.assertGreater(metric.points, 1)

    def test_rho_r_non_unital_qubit(self):
        def damping(gamma):
            a = np.diag([0.0, -gamma / 2, -gamma / 2, -gamma])
            a[3, 0] = gamma
            return Semigroup.continuous(StateSpace.qubit(), a)

        metric = rho_r(damping(1.0), damping(2.0), 1.0)
        # generator norm bounds 2 and 4 give Lipschitz 6 and curvature 20, so 1582 intervals
        self.assertEqual(metric.points, 1583)
        self.assertLessEqual(metric.certified_error, 1e-6)

        # T_t difference: first column (0, 0, 0, c), Bloch block diag(b, b, -c); on pure states only u3 matters
        t = np.linspace(0.0, 1.0, 2001)[:, np.newaxis]
        u3 = np.linspace(-1.0, 1.0, 2001)[np.newaxis, :]
        b = np.exp(-t / 2) - np.exp(-t)
        c = np.exp(-2 * t) - np.exp(-t)
        reference = np.sqrt(b ** 2 * (1 - u3 ** 2) + c ** 2 * (1 - u3) ** 2).max()
        self.assertGreater(reference, 0.49)
        self.assertAlmostEqual(metric.value, reference, delta=1e-3)

    def test_rho_r_identical(self):
        S = _create_two_state()
        metric = rho_r(S, S, 2.0)
        self.assertEqual(metric.value, 0.0)

    def test_rho_full(self):
        S = _create_identity_semigroup()
        lam = 0.5
        S2 = perturb(S, UNIFORM2, lam).semigroup
        expected = sum(2.0 ** -m * (1 - math.exp(-lam * m)) / (2 - math.exp(-lam * m))
                       for m in range(1, 200))
        coarse, fine = rho_full(S, S2, 20), rho_full(S, S2, 40)
        self.assertLessEqual(abs(coarse.value - expected), coarse.certified_error + 1e-12)
        self.assertLessEqual(abs(fine.value - expected), fine.certified_error + 1e-12)
        self.assertLessEqual(abs(coarse.value - fine.value), 2.0 ** -20 + 2e-6)
        self.assertLess(fine.value, 1.0)
        self.assertEqual(fine.to_dict()['r_or_M'], 40.0)

    def test_errors(self):
        S = _create_two_state()
        with self.assertRaises(ParameterError):
            rho_r(S, Semigroup.discrete(MIXER), 1.0)
        with self.assertRaises(ParameterError):
            rho_r(S, S, 0.0)
        with self.assertRaises(ParameterError):
            rho_full(S, S, 0)
        with self.assertRaises(DimensionError):
            rho_r(S, Semigroup.continuous(StateSpace.classical(3), np.zeros((3, 3))), 1.0)
        fast = Semigroup.continuous(CLASSICAL2, [[-1e4, 1e4], [1e4, -1e4]])
        with self.assertRaises(GuardError):
            rho_r(S, fast, 1e3, tol=1e-12)


# ========== Ergodization and Openness ==========

class ErgodizeTests(SimpleTestCase):
    def test_lambda(self):
        self.assertAlmostEqual(ergodize_lambda(0.5), 0.287682, places=6)
        self.assertLess(ergodize_lambda(0.5), -math.log(0.75))
        self.assertLess(2 * (1 - math.exp(-ergodize_lambda(0.5))), 0.5)
        self.assertEqual(ergodize_lambda(2.0), LAMBDA_CAP)
        self.assertEqual(ergodize_lambda(3.0), LAMBDA_CAP)

    def test_identity_semigroup(self):
        result = ergodize(_create_identity_semigroup(), UNIFORM2, 0.5)
        lam = ergodize_lambda(0.5)
        self.assertEqual(result.lam, lam)
        self.assertAlmostEqual(result.closeness.value, 1 - math.exp(-lam), places=12)
        self.assertTrue(result.closeness_certified)
        self.assertTrue(result.certificate.certified)
        self.assertEqual(result.certificate.t0, 1.0)
        self.assertAlmostEqual(result.certificate.q, math.exp(-lam), places=12)
        self.assertTrue(result.cross_check_ok)
        self.assertEqual(result.openness.N, 2)
        d = result.to_dict()
        self.assertEqual(d['lambda'], lam)
        self.assertIn('radius', d)
        self.assertEqual(d['certificate']['epsilon'], 0.5)

    def test_errors(self):
        with self.assertRaises(ParameterError):
            ergodize(Semigroup.discrete(MIXER), UNIFORM2, 0.5)
        with self.assertRaises(ParameterError):
            ergodize(_create_two_state(), UNIFORM2, 0.0)

    def test_openness_radius(self):
        cert = certify_uniform(_create_two_state(), UNIFORM2)
        radius = openness_radius(cert)
        self.assertEqual(radius.N, 2)
        self.assertAlmostEqual(radius.radius, (1 - math.exp(-2)) / 4, places=14)
        self.assertAlmostEqual(radius.radius, 0.216166, places=6)
        self.assertAlmostEqual(radius.guaranteed_delta, (1 + math.exp(-2)) / 2, places=14)
        with self.assertRaises(ParameterError):
            openness_radius(None)
        with self.assertRaises(ParameterError):
            openness_radius(certify_mean(_create_two_state(), UNIFORM2))
        with self.assertRaises(ParameterError):
            openness_radius(certify_uniform(_create_identity_semigroup(), UNIFORM2))

    def test_openness_neighbours(self):
        S = _create_two_state()
        cert = certify_uniform(S, UNIFORM2)
        probe = probe_openness(S, UNIFORM2, cert, count=50, seed=3)
        self.assertEqual(len(probe.rows), 50)
        self.assertTrue(probe.all_certified)
        for row in probe.rows:
            self.assertLess(row['rho_1'], probe.radius.radius)
        self.assertTrue(probe.to_dict()['all_certified'])

    def test_neighbours_of_ergodized_semigroup(self):
        S, P = _create_frozen_block_semigroup()
        self.assertFalse(certify_uniform(S, P).certified)
        result = ergodize(S, P, 1.0)
        self.assertEqual(result.certificate.t0, 1.0)
        self.assertAlmostEqual(result.certificate.q, math.exp(-result.lam), places=12)

        probe = probe_openness(result.perturbed.semigroup, P, result.certificate, count=50, seed=2)
        self.assertEqual(len(probe.rows), 50)
        for row in probe.rows:
            with self.subTest(index=row['index']):
                self.assertLess(row['rho_1'], probe.radius.radius)
                self.assertLessEqual(row['delta_t0'], probe.radius.guaranteed_delta + 1e-9)
        self.assertTrue(probe.all_certified)

    def test_neighbours_need_the_certified_semigroup(self):
        S, P = _create_frozen_block_semigroup()
        result = ergodize(S, P, 1.0)
        # the certificate belongs to the perturbed semigroup, whose neighbours differ from those of S
        with self.assertRaises(ParameterError):
            probe_openness(S, P, result.certificate, count=5)


@tag('property')
class ErgodizePropertyTests(SimpleTestCase):
    def test_random_invariant_semigroups(self):
        rng = np.random.default_rng(99)
        for trial in range(50):
            P = random_block_projection(4, rng, n_blocks=int(rng.integers(1, 4)))
            S = Semigroup.continuous(P.space, random_invariant_generator(P, rng), P)
            epsilon = float(rng.uniform(0.05, 1.5))
            result = ergodize(S, P, epsilon)
            msg = 'trial {}'.format(trial)
            self.assertTrue(result.certificate.certified, msg=msg)
            self.assertTrue(result.cross_check_ok, msg=msg)
            self.assertLess(result.closeness.value, epsilon, msg=msg)
            self.assertLessEqual(result.closeness.value, 2 * (1 - math.exp(-result.lam)) + 1e-12,
                                 msg=msg)
