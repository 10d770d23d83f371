# ErgoCert markov/perturbation.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

"""Phillips perturbation, its Dyson series, the metrics rho_r and rho, and ergodization.

The semigroup generated by A + lambda (Q - I) is computed in closed form by the matrix
exponential. The Dyson series

    T^{lambda,Q-I}_t = exp(-lambda t) (T_t + sum_k lambda^k T^Q_{k,t}),
    T^Q_{k+1,t} = int_0^t T_{t-s} Q T^Q_{k,s} ds,

is evaluated independently by Gauss-Legendre spectral integration and serves as a cross-check.
"""

import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from numpy.polynomial import legendre
from scipy import linalg, special

from . import dobrushin
from .ergodicity import UNIFORM, certify_uniform, check_invariance
from .exceptions import (DimensionError, DysonMismatchError, GuardError, MarkovianityError,
                         ParameterError, VerificationError)
from .markov_ops import MarkovOperator, MarkovProjection, require_markov, validate_markov
from .sampling import random_invariant_markov, rng_from
from .semigroup import Semigroup, evaluate, evaluate_matrix


logger = logging.getLogger(__name__)

PERTURBED_SAMPLE_TIMES = (0.1, 1.0, 10.0)
DYSON_NODES = 16
DYSON_TOL = 1e-11
DYSON_MAX_DOUBLINGS = 10
QUADRATURE_BUDGET = 1e-8
RHO_MAX_POINTS = 400000
RHO_CHUNK = 4096
LAMBDA_CAP = 10.0
LAMBDA_MARGIN = 1e-6
CERT_MATCH_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PerturbedSemigroup:
    base: Semigroup
    Q: MarkovOperator
    lam: float
    semigroup: Semigroup

    @property
    def generator(self):
        return self.semigroup.generator

    def describe(self):
        return {'perturbation': {'base': self.base.describe(), 'q_operator': self.Q.matrix.tolist(),
                                 'lambda': self.lam}}


def _operator(Q):
    return Q.base if isinstance(Q, MarkovProjection) else Q


def perturb(S, Q, lam, tol=1e-9):
    """The semigroup generated by A + lam (Q - I); Markov whenever S and Q are."""
    if not S.is_continuous:
        raise ParameterError('Phillips perturbation needs a continuous semigroup')
    Q = _operator(Q)
    if Q.space != S.space:
        raise DimensionError('Q acts on {}, the semigroup on {}'.format(Q.space, S.space))
    if not (math.isfinite(lam) and lam > 0):
        raise ParameterError('lambda must be positive, got {}'.format(lam))
    require_markov(Q, tol, what='Q')

    d = S.space.coordinate_dim
    generator = S.generator + lam * (Q.matrix - np.eye(d))
    projection = S.commuting_projection
    if projection is not None:
        p = projection.matrix
        if not np.allclose(Q.matrix @ p, p @ Q.matrix, rtol=0.0, atol=1e-12):
            logger.info('Q does not commute with the projection; dropping it from the perturbation')
            projection = None
    perturbed = Semigroup.continuous(S.space, generator, projection)
    for t in PERTURBED_SAMPLE_TIMES:
        if not validate_markov(evaluate(perturbed, t), tol).is_markov:
            raise MarkovianityError('perturbed semigroup is not Markov at t = {}'.format(t))
    return PerturbedSemigroup(S, Q, float(lam), perturbed)


# ========== Dyson series ==========

def _integration_matrix(m):
    """Gauss-Legendre nodes, weights and the matrix S with S_ij = int_{-1}^{x_i} l_j(x) dx."""
    x, w = legendre.leggauss(m)
    lagrange = np.linalg.inv(legendre.legvander(x, m - 1))
    antiderivative = legendre.legint(lagrange, lbnd=-1, axis=0)
    return x, w, legendre.legval(x, antiderivative).T


def _dyson_ladder(a, q, t, K, panels, m):
    d = a.shape[0]
    x, w, s = _integration_matrix(m)
    h = t / panels
    offsets = (x + 1.0) * h / 2.0
    s_h, w_h = s * h / 2.0, w * h / 2.0
    forward = linalg.expm(offsets[:, np.newaxis, np.newaxis] * a)
    backward = linalg.expm(-offsets[:, np.newaxis, np.newaxis] * a)
    step = linalg.expm(h * a)

    start = [np.eye(d)] + [np.zeros((d, d)) for _ in range(K)]
    for _ in range(panels):
        following, previous = [], None
        for k in range(K + 1):
            if k == 0:
                inner = np.broadcast_to(start[0], (m, d, d))
                end = start[0]
            else:
                g = backward @ q @ previous
                inner = start[k] + np.einsum('ij,jab->iab', s_h, g)
                end = start[k] + np.einsum('j,jab->ab', w_h, g)
            previous = forward @ inner
            following.append(step @ end)
        start = following
    return start


def dyson_terms(S, Q, t, K, tol=DYSON_TOL, nodes=DYSON_NODES):
    """The ladder T^Q_{k,t}, k = 0..K, and the number of panels used.

    Each panel [a, b] integrates in the interaction picture relative to a, where the integrand
    exp(-(u - a)A) Q T^Q_{k,u} is smooth and bounded; panels are doubled until two successive
    ladders agree within ``tol``.
    """
    if not S.is_continuous:
        raise ParameterError('the Dyson series needs a continuous semigroup')
    if int(K) != K or K < 0:
        raise ParameterError('truncation order K must be a nonnegative integer, got {}'.format(K))
    if not (t >= 0):
        raise ParameterError('time must be nonnegative, got {}'.format(t))
    K = int(K)
    a, q = S.generator, _operator(Q).matrix
    if t == 0:
        d = a.shape[0]
        return [np.eye(d)] + [np.zeros((d, d)) for _ in range(K)], 0

    norm_a = float(np.abs(a).sum(axis=0).max()) if S.space.is_classical else float(np.linalg.norm(a, 2))
    panels = max(1, int(math.ceil(t * (norm_a + 1.0))))
    ladder = _dyson_ladder(a, q, t, K, panels, nodes)
    for _ in range(DYSON_MAX_DOUBLINGS):
        panels *= 2
        refined = _dyson_ladder(a, q, t, K, panels, nodes)
        change = max(float(np.max(np.abs(x - y))) for x, y in zip(ladder, refined))
        ladder = refined
        if change <= tol:
            break
    else:
        logger.warning('Dyson ladder did not settle within %d doublings (last change %.3g)',
                       DYSON_MAX_DOUBLINGS, change)
    logger.debug('Dyson ladder: K=%d, t=%s, %d panels', K, t, panels)
    return ladder, panels


@dataclass(frozen=True, eq=False)
class DysonResult:
    matrix: np.ndarray
    tail_bound: float
    closed_form_gap: float
    panels: int

    def to_dict(self):
        return {'matrix': self.matrix.tolist(), 'tail_bound': self.tail_bound,
                'closed_form_gap': self.closed_form_gap, 'panels': self.panels}


def poisson_tail(K, x):
    """exp(-x) sum_{k>K} x^k/k!, the regularized lower incomplete gamma P(K + 1, x)."""
    return float(special.gammainc(K + 1, x)) if x > 0 else 0.0


def dyson_eval(S, Q, lam, t, K, budget=QUADRATURE_BUDGET):
    """Truncated Dyson series of order K, checked against the closed-form perturbation.

    Since |T^Q_{k,t}| <= t^k/k!, the truncation error is at most the Poisson tail
    exp(-lam t) sum_{k>K} (lam t)^k/k!; a gap beyond tail plus ``budget`` raises.
    """
    ladder, panels = dyson_terms(S, Q, t, K)
    total = ladder[0].copy()
    for k in range(1, len(ladder)):
        total += lam ** k * ladder[k]
    matrix = math.exp(-lam * t) * total
    tail = poisson_tail(int(K), lam * t)
    closed = evaluate_matrix(perturb(S, Q, lam).semigroup, t)
    gap = dobrushin.induced_norm(matrix - closed, S.space)
    if gap > tail + budget:
        raise DysonMismatchError('Dyson series differs from the closed form by {:.3g} > {:.3g}'.format(
            gap, tail + budget))
    return DysonResult(matrix, tail, gap, panels)


# ========== Metrics ==========

@dataclass(frozen=True)
class MetricValue:
    value: float
    certified_error: float
    parameter: float
    points: int = 0

    def to_dict(self):
        return {'value': self.value, 'certified_error': self.certified_error,
                'r_or_M': self.parameter, 'points': self.points}


def _check_pair(S1, S2):
    if not (S1.is_continuous and S2.is_continuous):
        raise ParameterError('rho metrics compare continuous semigroups')
    if S1.space != S2.space:
        raise DimensionError('semigroups act on {} and {}'.format(S1.space, S2.space))


def _lipschitz_constants(S1, S2):
    # the grid error must be an upper bound, so no sphere search here
    n1 = dobrushin.induced_norm_bound(S1.generator, S1.space)
    n2 = dobrushin.induced_norm_bound(S2.generator, S2.space)
    return n1 + n2, n1 * n1 + n2 * n2


def _step_for(tol, lip, curv):
    # the grid error is the smaller of the two bounds, so either one meeting tol suffices
    if lip == 0.0:
        return math.inf
    return max(2.0 * tol / lip, math.sqrt(8.0 * tol / curv))


def _grid_error(h, lip, curv):
    return min(lip * h / 2.0, curv * h * h / 8.0)


def _distance_profile(S1, S2, times):
    out = np.empty(len(times))
    for start in range(0, len(times), RHO_CHUNK):
        chunk = times[start:start + RHO_CHUNK, np.newaxis, np.newaxis]
        diff = linalg.expm(chunk * S1.generator) - linalg.expm(chunk * S2.generator)
        out[start:start + RHO_CHUNK] = dobrushin.induced_norms(diff, S1.space)
    return out


def rho_r(S1, S2, r, tol=1e-6):
    """sup_{t in [0, r]} |T_t - S_t| from a uniform grid, with a certified error bar.

    F(t) = T_t - S_t has |F'| <= L = |A1| + |A2| and |F''| <= L2 = |A1|^2 + |A2|^2, so between
    grid points |F| exceeds the larger endpoint value by at most min(L h/2, L2 h^2/8).
    """
    _check_pair(S1, S2)
    if not (r > 0):
        raise ParameterError('r must be positive, got {}'.format(r))
    lip, curv = _lipschitz_constants(S1, S2)
    h = _step_for(tol, lip, curv)
    intervals = 1 if math.isinf(h) else int(math.ceil(r / h))
    if intervals + 1 > RHO_MAX_POINTS:
        raise GuardError('rho_r needs {} grid points (limit {}); raise tol'.format(
            intervals + 1, RHO_MAX_POINTS))
    times = np.linspace(0.0, r, intervals + 1)
    profile = _distance_profile(S1, S2, times)
    return MetricValue(float(profile.max()), _grid_error(r / intervals, lip, curv), float(r),
                       len(times))


def rho_full(S1, S2, M, tol=1e-6):
    """The series metric sum_{m=1}^M 2^-m rho_m/(1 + rho_m), certified up to 2^-M + grid error."""
    _check_pair(S1, S2)
    if int(M) != M or M < 1:
        raise ParameterError('M must be a positive integer, got {}'.format(M))
    M = int(M)
    lip, curv = _lipschitz_constants(S1, S2)
    h = _step_for(tol, lip, curv)
    per_unit = 1 if math.isinf(h) else int(math.ceil(1.0 / h))
    if M * per_unit + 1 > RHO_MAX_POINTS:
        raise GuardError('rho needs {} grid points (limit {}); raise tol or lower M'.format(
            M * per_unit + 1, RHO_MAX_POINTS))
    times = np.arange(M * per_unit + 1) / per_unit
    running = np.maximum.accumulate(_distance_profile(S1, S2, times))
    rho_m = running[np.arange(1, M + 1) * per_unit]
    weights = 0.5 ** np.arange(1, M + 1)
    value = float(np.sum(weights * rho_m / (1.0 + rho_m)))
    # x/(1 + x) is 1-Lipschitz, so each term inherits at most 2^-m times the grid error
    grid_error = _grid_error(1.0 / per_unit, lip, curv)
    return MetricValue(value, 0.5 ** M + float(np.sum(weights)) * grid_error, float(M), len(times))


# ========== Ergodization and openness ==========

def ergodize_lambda(epsilon):
    """Largest lambda, with a relative margin, such that 2(1 - exp(-lambda)) < epsilon."""
    if epsilon >= 2.0:
        return LAMBDA_CAP
    return -math.log(1.0 - epsilon / 2.0) * (1.0 - LAMBDA_MARGIN)


@dataclass(frozen=True)
class OpennessRadius:
    radius: float
    N: int
    t0: float
    q: float

    @property
    def guaranteed_delta(self):
        return 1.0 - (1.0 - self.q) / 2.0

    def to_dict(self):
        return {'radius': self.radius, 'N': self.N, 'guaranteed_delta': self.guaranteed_delta}


def openness_radius(cert):
    """Radius (1 - q)/(2N), N = floor(t0) + 1, of a rho_1 ball of uniformly ergodic semigroups.

    Any P-invariant R with rho_1(R, T) below the radius has delta_P(R_t0) <= q + N rho_1(R, T)
    <= 1 - (1 - q)/2.
    """
    if cert is None or not getattr(cert, 'certified', False) or cert.mode != UNIFORM:
        raise ParameterError('openness_radius needs a uniform certificate')
    N = int(math.floor(cert.t0)) + 1
    return OpennessRadius((1.0 - cert.q) / (2.0 * N), N, float(cert.t0), float(cert.q))


@dataclass(frozen=True, eq=False)
class ErgodizeResult:
    perturbed: PerturbedSemigroup
    lam: float
    epsilon: float
    closeness: MetricValue
    certificate: object
    a_priori_q: float = None
    cross_check_ok: bool = None
    openness: OpennessRadius = None

    @property
    def closeness_certified(self):
        return self.closeness.value + self.closeness.certified_error < self.epsilon

    def to_dict(self):
        d = {
            'lambda': self.lam,
            'epsilon': self.epsilon,
            'closeness': self.closeness.to_dict(),
            'closeness_certified': self.closeness_certified,
            'a_priori_q': self.a_priori_q,
            'cross_check_ok': self.cross_check_ok,
            'certificate': self.certificate.to_dict(),
        }
        if self.openness is not None:
            d.update(self.openness.to_dict())
        return d


def ergodize(S, P, epsilon, t_grid=None, tol=1e-6, delta_fn=None):
    """Perturb a P-invariant semigroup by lambda (P - I) into a uniformly P-ergodic one rho_1-close to it.

    rho_1(S, S') <= 2(1 - exp(-lambda)) < epsilon, and on ker P the perturbed semigroup is
    exp(-lambda t) T_t, so its certificate has q <= exp(-lambda t0).
    """
    if not S.is_continuous:
        raise ParameterError('ergodize is defined for continuous semigroups')
    if not (epsilon > 0):
        raise ParameterError('epsilon must be positive, got {}'.format(epsilon))
    check_invariance(S, P, (0.5, 1.0, 2.0))

    lam = ergodize_lambda(epsilon)
    perturbed = perturb(S, P, lam)
    closeness = rho_r(S, perturbed.semigroup, 1.0, tol)
    if closeness.value >= epsilon:
        raise VerificationError('measured rho_1 = {:.17g} is not below epsilon = {}'.format(
            closeness.value, epsilon))
    cert = certify_uniform(perturbed.semigroup, P, t_grid, delta_fn)
    if not cert.certified:
        logger.warning('ergodized semigroup did not certify on the grid: %s', cert.reason)
        return ErgodizeResult(perturbed, lam, epsilon, closeness, cert)

    a_priori = math.exp(-lam * cert.t0)
    cross_ok = cert.q <= a_priori + 1e-9
    extra = dict(cert.extra, **{'lambda': lam, 'epsilon': epsilon})
    opening = openness_radius(cert)
    extra.update(opening.to_dict())
    cert = replace(cert, extra=extra)
    return ErgodizeResult(perturbed, lam, epsilon, closeness, cert, a_priori, cross_ok, opening)


@dataclass(frozen=True)
class ProbeResult:
    radius: OpennessRadius
    lam: float
    rows: tuple

    @property
    def all_certified(self):
        return all(row['certified'] for row in self.rows)

    def to_dict(self):
        return {'lambda': self.lam, 'all_certified': self.all_certified, 'neighbours': list(self.rows)}


def probe_openness(T, P, cert, count=50, seed=0, fraction=0.9, tol=1e-6, delta_fn=None):
    """Sample P-invariant neighbours R = perturb(T, K, lam') inside the openness radius of T.

    ``T`` is the semigroup ``cert`` was issued for (after ergodize, the perturbed semigroup, not
    the original one). K is a random Markov operator with K P = P K = P (a block-diagonal
    uniformized invariant chain, or T_s for non-block P), and lam' makes
    2(1 - exp(-lam')) = fraction * radius.
    """
    radius = openness_radius(cert)
    delta_fn = delta_fn if delta_fn is not None else dobrushin.delta
    q = float(delta_fn(evaluate_matrix(T, radius.t0), P).upper)
    if abs(q - radius.q) > CERT_MATCH_TOL:
        raise ParameterError('certificate (q = {!r}) was not issued for this semigroup '
                             '(delta_P(T_t0) = {!r})'.format(radius.q, q))
    lam = -math.log(1.0 - fraction * radius.radius / 2.0)
    rng = rng_from(seed)
    rows = []
    for i in range(count):
        if isinstance(P, MarkovProjection) and P.is_block:
            k = random_invariant_markov(P, rng)
        else:
            k = evaluate_matrix(T, float(rng.uniform(0.1, 1.0)))
        neighbour = perturb(T, MarkovOperator(T.space, k), lam)
        distance = rho_r(T, neighbour.semigroup, 1.0, tol)
        d = float(delta_fn(evaluate_matrix(neighbour.semigroup, radius.t0), P).upper)
        rows.append({'index': i, 'rho_1': distance.value, 'rho_1_error': distance.certified_error,
                     'delta_t0': d, 'certified': d <= radius.guaranteed_delta + 1e-9})
    return ProbeResult(radius, lam, tuple(rows))
