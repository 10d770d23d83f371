# ErgoCert markov/tests_ergodicity.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

import math

import numpy as np
from django.test import SimpleTestCase, tag

from .ergodicity import (DOEBLIN, UNIFORM, UNIFORM_MEAN, WEAK_MEAN, certify_mean, certify_uniform,
                         decay_envelope, default_grid, doeblin_check, mean_curve, measure_curve,
                         sandwich_check, spectral_check, ume_bound, weak_mean_check)
from .exceptions import InvarianceError, MethodError, ParameterError
from .markov_ops import (MarkovOperator, block_projection, projection_from_matrix,
                         rank_one_projection)
from .sampling import random_block_projection, random_invariant_generator
from .semigroup import Semigroup
from .state_space import StateSpace


CLASSICAL2 = StateSpace.classical(2)
CLASSICAL3 = StateSpace.classical(3)
UNIFORM2 = rank_one_projection(CLASSICAL2, [0.5, 0.5])
UNIFORM3 = rank_one_projection(CLASSICAL3, [1 / 3, 1 / 3, 1 / 3])
SWAP = MarkovOperator(CLASSICAL2, [[0.0, 1.0], [1.0, 0.0]])

# eigenvalues 0, -1, -3
THREE_STATE = np.array([[-20.0, 18.0, 2.0], [18.0, -50.0, 32.0], [2.0, 32.0, -34.0]]) / 26.0


def _create_two_state():
    return Semigroup.continuous(CLASSICAL2, [[-1.0, 1.0], [1.0, -1.0]], UNIFORM2)


def _create_identity_semigroup():
    return Semigroup.continuous(CLASSICAL2, np.zeros((2, 2)), UNIFORM2)


def _create_amplitude_damping(gamma=1.0):
    """Qubit relaxation to the pure state (1/2, 0, 0, 1/2), with its invariant projection."""
    qubit = StateSpace.qubit()
    a = np.array([[0.0, 0.0, 0.0, 0.0],
                  [0.0, -gamma / 2, 0.0, 0.0],
                  [0.0, 0.0, -gamma / 2, 0.0],
                  [gamma, 0.0, 0.0, -gamma]])
    p = np.zeros((4, 4))
    p[0, 0] = p[3, 0] = 1.0
    P = projection_from_matrix(qubit, p)
    return Semigroup.continuous(qubit, a, P), P


# ========== Uniform P-ergodicity ==========

class CertifyUniformTests(SimpleTestCase):
    def test_two_state_certificate(self):
        cert = certify_uniform(_create_two_state(), UNIFORM2)
        self.assertTrue(cert.certified)
        self.assertEqual(cert.mode, UNIFORM)
        self.assertEqual(cert.t0, 1.0)
        self.assertAlmostEqual(cert.q, math.exp(-2), places=14)
        self.assertAlmostEqual(cert.C, 2 * math.exp(2), places=12)
        self.assertAlmostEqual(cert.alpha, 2.0, places=12)
        self.assertEqual(cert.to_dict()['projection'], {'blocks': [[0, 1]], 'weights': [[0.5, 0.5]]})

    def test_envelope(self):
        cert = certify_uniform(_create_two_state(), UNIFORM2)
        self.assertAlmostEqual(decay_envelope(cert, 10.0) / (2 * math.exp(-18)), 1.0, places=10)
        self.assertEqual(decay_envelope(cert, 0.0), 2.0)
        curve = measure_curve(_create_two_state(), UNIFORM2, cert, points=200)
        self.assertEqual(len(curve), 200)
        for t, measured, bound in curve:
            self.assertAlmostEqual(measured, math.exp(-2 * t), delta=1e-13)
        violations = [t for t, measured, bound in curve if measured > bound + 1e-12]
        self.assertEqual(violations, [])

    def test_sandwich(self):
        rows = sandwich_check(_create_two_state(), UNIFORM2, [0.1, 1.0, 3.0])
        for row in rows:
            self.assertTrue(row['holds'])
            self.assertAlmostEqual(row['delta'], math.exp(-2 * row['t']), places=13)
            self.assertAlmostEqual(row['norm'], math.exp(-2 * row['t']), places=13)

    def test_periodic_chain_has_no_certificate(self):
        failure = certify_uniform(Semigroup.discrete(SWAP, UNIFORM2), UNIFORM2)
        self.assertFalse(failure.certified)
        self.assertEqual(len(failure.values), 64)
        self.assertTrue(all(v == 1.0 for v in failure.values))
        self.assertFalse(failure.to_dict()['certified'])

    def test_identity_semigroup_has_no_certificate(self):
        self.assertFalse(certify_uniform(_create_identity_semigroup(), UNIFORM2).certified)

    def test_default_grid(self):
        grid = default_grid(_create_two_state())
        self.assertEqual(grid[:3], (1.0, 2.0, 4.0))
        self.assertEqual(grid[-3:], (0.5, 0.25, 0.125))
        self.assertEqual(default_grid(Semigroup.discrete(SWAP)), tuple(range(1, 65)))

    def test_errors(self):
        skewed = rank_one_projection(CLASSICAL2, [0.2, 0.8])
        S = Semigroup.continuous(CLASSICAL2, [[-1.0, 1.0], [1.0, -1.0]])
        with self.assertRaises(InvarianceError):
            certify_uniform(S, skewed)
        with self.assertRaises(ParameterError):
            certify_uniform(_create_two_state(), UNIFORM2, t_grid=[])
        mean = certify_mean(_create_two_state(), UNIFORM2)
        with self.assertRaises(ParameterError):
            decay_envelope(mean, 1.0)

    def test_random_invariant_generators(self):
        rng = np.random.default_rng(31)
        certified = 0
        for trial in range(10):
            P = random_block_projection(5, rng, n_blocks=2)
            S = Semigroup.continuous(P.space, random_invariant_generator(P, rng), P)
            cert = certify_uniform(S, P)
            if not cert.certified:
                continue
            certified += 1
            curve = measure_curve(S, P, cert, points=200)
            violations = [t for t, measured, bound in curve if measured > bound + 1e-9]
            self.assertEqual(violations, [], msg='trial {}'.format(trial))
        self.assertGreater(certified, 0)


# ========== Spectral Radius ==========

class SpectralTests(SimpleTestCase):
    def test_two_state(self):
        S = _create_two_state()
        report = spectral_check(S, UNIFORM2, 200, certify_uniform(S, UNIFORM2))
        self.assertAlmostEqual(report.r, math.exp(-2), places=14)
        self.assertLess(report.gap, 1e-12)
        self.assertTrue(report.exp_fit)
        self.assertTrue(report.spectral_fit)
        self.assertTrue(report.equivalence_consistent)
        self.assertAlmostEqual(report.alpha, 2.0, places=12)

    def test_two_mode_chain(self):
        S = Semigroup.continuous(CLASSICAL3, THREE_STATE, UNIFORM3)
        report = spectral_check(S, UNIFORM3, 200, certify_uniform(S, UNIFORM3))
        self.assertAlmostEqual(report.r, math.exp(-1), places=12)
        self.assertLess(report.gap, 1e-3)
        self.assertFalse(report.exp_fit)
        self.assertTrue(report.equivalence_consistent)
        self.assertEqual(len(report.delta_roots), 200)

    def test_errors(self):
        S = _create_two_state()
        with self.assertRaises(ParameterError):
            spectral_check(S, UNIFORM2, 10, None)
        cert = certify_uniform(S, UNIFORM2)
        with self.assertRaises(ParameterError):
            spectral_check(S, UNIFORM2, 0, cert)
        P = projection_from_matrix(CLASSICAL2, [[0.5, 0.5], [0.5, 0.5]])
        with self.assertRaises(MethodError):
            spectral_check(S, P, 10, cert)


# ========== Mean Ergodicity ==========

class CertifyMeanTests(SimpleTestCase):
    def test_two_state(self):
        S = _create_two_state()
        cert = certify_mean(S, UNIFORM2)
        q = (1 - math.exp(-2)) / 2
        self.assertEqual(cert.mode, UNIFORM_MEAN)
        self.assertEqual(cert.t0, 1.0)
        self.assertAlmostEqual(cert.q, q, places=13)
        self.assertAlmostEqual(cert.C, 2 / (1 - q), places=12)
        for t, measured, bound in mean_curve(S, UNIFORM2, cert, points=30):
            self.assertAlmostEqual(measured, (1 - math.exp(-2 * t)) / (2 * t), places=12)
            self.assertLessEqual(measured, bound + 1e-12)

    def test_periodic_chain(self):
        S = Semigroup.discrete(SWAP, UNIFORM2)
        cert = certify_mean(S, UNIFORM2)
        self.assertEqual(cert.t0, 2)
        self.assertEqual(cert.q, 0.0)
        self.assertEqual(cert.C, 4.0)
        self.assertEqual(ume_bound(cert, 1), 2.0)
        self.assertEqual(ume_bound(cert, 40), 0.1)
        for t, measured, bound in mean_curve(S, UNIFORM2, cert, points=20, span=20):
            self.assertLessEqual(measured, bound + 1e-12, msg='t = {}'.format(t))

    def test_ume_bound_needs_mean_certificate(self):
        cert = certify_uniform(_create_two_state(), UNIFORM2)
        with self.assertRaises(ParameterError):
            ume_bound(cert, 2.0)


class WeakMeanTests(SimpleTestCase):
    def test_two_state(self):
        report = weak_mean_check(_create_two_state(), UNIFORM2, t0=1.0, n0=1)
        q = (1 - math.exp(-2)) / 2
        self.assertTrue(report.certifies)
        self.assertAlmostEqual(report.q, q, places=13)
        self.assertEqual(report.certificate.mode, WEAK_MEAN)
        self.assertEqual(len(report.decay), 7)
        for t, d, bound in report.decay:
            self.assertLessEqual(d, bound + 1e-12, msg='t = {}'.format(t))

        squared = weak_mean_check(_create_two_state(), UNIFORM2, t0=1.0, n0=2)
        self.assertAlmostEqual(squared.q, q * q, places=13)
        self.assertIsNone(squared.decay[0][2])

    def test_periodic_chain(self):
        S = Semigroup.discrete(SWAP, UNIFORM2)
        self.assertFalse(weak_mean_check(S, UNIFORM2, t0=1, n0=2).certifies)
        report = weak_mean_check(S, UNIFORM2, t0=2, n0=1)
        self.assertTrue(report.certifies)
        self.assertEqual(report.q, 0.0)

    def test_errors(self):
        for t0, n0 in ((0.0, 1), (1.0, 0), (1.0, 1.5)):
            with self.assertRaises(ParameterError):
                weak_mean_check(_create_two_state(), UNIFORM2, t0=t0, n0=n0)

    def test_projection_must_be_invariant(self):
        # the symmetric chain is mean ergodic, but to the uniform state, not to the skewed one
        skewed = rank_one_projection(CLASSICAL2, [0.2, 0.8])
        S = Semigroup.continuous(CLASSICAL2, [[-1.0, 1.0], [1.0, -1.0]])
        with self.assertRaises(InvarianceError):
            weak_mean_check(S, skewed, t0=1.0, n0=1)


# ========== Doeblin-type Condition ==========

class DoeblinTests(SimpleTestCase):
    def test_two_state_holds(self):
        report = doeblin_check(_create_two_state(), UNIFORM2, UNIFORM2, tau=0.5, t0=5.0)
        self.assertTrue(report.holds)
        self.assertTrue(report.exact)
        self.assertEqual(report.max_phi_norm, 0.0)
        self.assertEqual(report.implied_delta, 0.75)
        self.assertAlmostEqual(report.delta_direct, (1 - math.exp(-10)) / 10, places=13)
        self.assertTrue(report.cross_check_ok)
        self.assertEqual(report.certificate.mode, DOEBLIN)
        self.assertAlmostEqual(report.certificate.C, 40.0, places=12)

    def test_identity_fails(self):
        report = doeblin_check(_create_identity_semigroup(), UNIFORM2, UNIFORM2, tau=0.5, t0=1.0)
        self.assertFalse(report.holds)
        self.assertAlmostEqual(report.max_phi_norm, 0.25, places=15)
        self.assertIsNone(report.implied_delta)
        self.assertIsNone(report.certificate)
        np.testing.assert_array_equal(report.witness, [1.0, 0.0])

    def test_qubit_search(self):
        S, P = _create_amplitude_damping()
        report = doeblin_check(S, P, P, tau=0.5, t0=50.0, restarts=4)
        self.assertFalse(report.exact)
        self.assertTrue(report.holds)
        self.assertTrue(report.cross_check_ok)
        self.assertTrue(report.to_dict()['heuristic'])

    def test_errors(self):
        identity = block_projection(CLASSICAL2, [[0], [1]], [[1.0], [1.0]])
        with self.assertRaises(InvarianceError):
            doeblin_check(_create_two_state(), UNIFORM2, identity, tau=0.5, t0=1.0)
        for tau in (0.0, 1.5):
            with self.assertRaises(ParameterError):
                doeblin_check(_create_two_state(), UNIFORM2, UNIFORM2, tau=tau, t0=1.0)


@tag('property')
class DoeblinPropertyTests(SimpleTestCase):
    def test_holds_implies_delta_bound(self):
        rng = np.random.default_rng(12)
        held = 0
        for trial in range(60):
            P = random_block_projection(4, rng, n_blocks=1)
            S = Semigroup.continuous(P.space, random_invariant_generator(P, rng, scale=3.0), P)
            report = doeblin_check(S, P, P, tau=float(rng.uniform(0.1, 0.9)), t0=4.0)
            if report.holds:
                held += 1
                self.assertTrue(report.cross_check_ok, msg='trial {}'.format(trial))
        self.assertGreater(held, 0)
