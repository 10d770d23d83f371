# ErgoCert markov/ergodicity.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

"""Certificates of uniform and mean P-ergodicity, rate envelopes, and the Doeblin-type check.

A uniform certificate (t0, q) with q = delta_P(T_t0) < 1 yields |T_t - P| <= C exp(-alpha t) with
C = 2/q and alpha = ln(1/q)/t0: submultiplicativity gives delta_P(T_t) <= q^floor(t/t0) <=
q^(t/t0 - 1), and |T_t - P| <= 2 delta_P(T_t). A mean certificate (t0, q) with
q = delta_Q(A_t0) < 1 yields |A_t - Q| <= (2 t0/(1 - q)) / t for t >= t0.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import dobrushin
from .exceptions import InvarianceError, MethodError, ParameterError
from .markov_ops import projection_relations
from .semigroup import cesaro_matrix, evaluate_matrix, evaluate_many
from .state_space import sup_over_sphere


logger = logging.getLogger(__name__)

UNIFORM = 'uniform'
UNIFORM_MEAN = 'uniform_mean'
WEAK_MEAN = 'weak_mean'
DOEBLIN = 'doeblin'

CERT_MARGIN = 1e-6
Q_FLOOR = 1e-12
CONTINUOUS_GRID_EXPONENTS = (0, 1, 2, 3, 4, 5, 6, -1, -2, -3)
DISCRETE_GRID_MAX = 64


@dataclass(frozen=True, eq=False)
class ErgodicityCertificate:
    mode: str
    t0: float
    q: float
    C: float
    alpha: float
    projection: object
    tau: float = None
    n0: int = None
    max_phi_norm: float = None
    grid: tuple = ()
    measured_curve: tuple = ()
    extra: dict = field(default_factory=dict)

    certified = True

    def to_dict(self):
        d = {
            'mode': self.mode,
            't0': self.t0,
            'q': self.q,
            'C': self.C,
            'alpha': self.alpha,
            'tau': self.tau,
            'n0': self.n0,
            'max_phi_norm': self.max_phi_norm,
            'projection': self.projection.describe(),
            'grid': list(self.grid),
            'measured_curve': [list(p) for p in self.measured_curve],
        }
        d.update(self.extra)
        return d


@dataclass(frozen=True)
class CertificationFailure:
    """No grid point certified; a legitimate answer rather than an error."""
    mode: str
    reason: str
    grid: tuple = ()
    values: tuple = ()

    certified = False

    def to_dict(self):
        return {'mode': self.mode, 'certified': False, 'reason': self.reason,
                'grid': list(self.grid), 'values': list(self.values)}


def default_grid(S, t_unit=1.0):
    """Geometric times t_unit 2^k scanned from k = 0 upward, then downward; 1..64 when discrete."""
    if not S.is_continuous:
        return tuple(range(1, DISCRETE_GRID_MAX + 1))
    return tuple(t_unit * 2.0 ** k for k in CONTINUOUS_GRID_EXPONENTS)


def _upper(result):
    return float(result.upper) if hasattr(result, 'upper') else float(result)


def _delta_fn(delta_fn):
    return delta_fn if delta_fn is not None else dobrushin.delta


def _sample_times(grid):
    grid = list(grid)
    return sorted({grid[0], grid[len(grid) // 2], grid[-1]})


def check_invariance(S, P, times, tol=1e-9):
    """Raise InvarianceError unless T_t P = P T_t = P at each sampled time."""
    for t in times:
        rel = projection_relations(P, P, evaluate_matrix(S, t), tol)
        if not (rel.TP_equals_P and rel.T_commutes_P):
            raise InvarianceError('T_t P = P T_t = P fails at t = {}'.format(t))


# ========== Uniform P-ergodicity ==========

def certify_uniform(S, P, t_grid=None, delta_fn=None, margin=CERT_MARGIN, tol=1e-9):
    """Scan ``t_grid`` for the first t0 with q = delta_P(T_t0) <= 1 - margin.

    Returns an ErgodicityCertificate, or a CertificationFailure when no grid point certifies.
    """
    grid = tuple(t_grid) if t_grid is not None else default_grid(S)
    if not grid:
        raise ParameterError('empty time grid')
    check_invariance(S, P, _sample_times(grid), tol)
    delta_fn = _delta_fn(delta_fn)

    values = []
    for t in grid:
        q = _upper(delta_fn(evaluate_matrix(S, t), P))
        values.append(q)
        logger.debug('uniform scan: delta_P(T_%s) = %.17g', t, q)
        if q <= 1.0 - margin:
            q_eff = max(q, Q_FLOOR)
            return ErgodicityCertificate(
                mode=UNIFORM, t0=t, q=q, C=2.0 / q_eff, alpha=math.log(1.0 / q_eff) / t,
                projection=P, grid=grid)
    logger.info('no uniform certificate on a grid of %d points', len(grid))
    return CertificationFailure(UNIFORM, 'delta_P(T_t) > 1 - {} at every grid point'.format(margin),
                                grid, tuple(values))


def decay_envelope(cert, t):
    """min(2, C exp(-alpha t)), a bound on |T_t - P|."""
    if cert.mode != UNIFORM:
        raise ParameterError('decay_envelope needs a uniform certificate, got {!r}'.format(cert.mode))
    return min(2.0, cert.C * math.exp(-cert.alpha * t))


def _time_points(S, start, stop, points):
    times = np.linspace(start, stop, points)
    if not S.is_continuous:
        times = np.unique(np.round(times)).astype(int)
    return times


def measure_curve(S, P, cert, points=200, span=50.0):
    """(t, |T_t - P|, envelope) on ``points`` times in [0, span t0]."""
    times = _time_points(S, 0.0, span * cert.t0, points)
    norms = dobrushin.induced_norms(evaluate_many(S, times) - P.matrix, S.space)
    return tuple((float(t), float(m), decay_envelope(cert, float(t))) for t, m in zip(times, norms))


def sandwich_check(S, P, times, delta_fn=None, slack=1e-9):
    """Check delta_P(T_t) <= |T_t - P| <= 2 delta_P(T_t) at the given times."""
    delta_fn = _delta_fn(delta_fn)
    rows = []
    for t in times:
        tt = evaluate_matrix(S, t)
        d = _upper(delta_fn(tt - P.matrix, P))
        norm = dobrushin.induced_norm(tt - P.matrix, S.space)
        rows.append({'t': float(t), 'delta': d, 'norm': norm,
                     'holds': d <= norm + slack and norm <= 2.0 * d + slack})
    return rows


# ========== Spectral radius ==========

@dataclass(frozen=True)
class SpectralReport:
    delta_roots: tuple
    r: float
    gap: float
    exp_fit: bool
    spectral_fit: bool
    alpha: float
    grid: tuple
    grid_deltas: tuple
    grid_radii: tuple

    @property
    def equivalence_consistent(self):
        return self.exp_fit == self.spectral_fit

    def to_dict(self):
        return {
            'delta_roots': list(self.delta_roots),
            'r': self.r,
            'gap': self.gap,
            'exp_fit': self.exp_fit,
            'spectral_fit': self.spectral_fit,
            'equivalence_consistent': self.equivalence_consistent,
            'alpha': self.alpha,
            'grid': list(self.grid),
            'grid_deltas': list(self.grid_deltas),
            'grid_radii': list(self.grid_radii),
        }


def spectral_check(S, P, n_max, certificate=None, grid=None, tol=1e-8):
    """Compare delta_P(T_n)^(1/n) with the spectral radius r(T_1 - P).

    delta_P(T_n) is evaluated as delta_P((T_1 - P)^n): for P-invariant semigroups
    (T_1 - P)^n = T_n - P, and delta_P ignores the P part, so no cancellation occurs for large n.
    ``exp_fit`` tests delta_P(T_t) = exp(-alpha t) with alpha = -ln delta_P(T_1) on ``grid``;
    ``spectral_fit`` tests delta_P(T_t) = r(T_t - P) there.
    """
    if certificate is None or certificate.mode != UNIFORM:
        raise ParameterError('spectral_check needs a uniform certificate')
    if not P.is_block:
        raise MethodError('spectral_check needs the exact delta of a block projection')
    if n_max < 1:
        raise ParameterError('n_max must be at least 1')

    d = evaluate_matrix(S, 1) - P.matrix
    roots = []
    power = np.eye(d.shape[0])
    for n in range(1, n_max + 1):
        power = power @ d
        value = dobrushin.delta_exact(power, P).upper
        roots.append(value ** (1.0 / n) if value > 0.0 else 0.0)
    r = float(np.max(np.abs(np.linalg.eigvals(d))))

    if grid is None:
        grid = (0.5, 1.0, 2.0, 4.0) if S.is_continuous else (1, 2, 3, 4)
    deltas = [dobrushin.delta_exact(evaluate_matrix(S, t) - P.matrix, P).upper for t in grid]
    radii = [float(np.max(np.abs(np.linalg.eigvals(evaluate_matrix(S, t) - P.matrix))))
             for t in grid]
    delta_one = dobrushin.delta_exact(d, P).upper
    alpha = -math.log(delta_one) if delta_one > 0.0 else math.inf
    fitted = [math.exp(-alpha * t) for t in grid]
    exp_fit = all(abs(a - b) <= tol for a, b in zip(deltas, fitted))
    spectral_fit = all(abs(a - b) <= tol for a, b in zip(deltas, radii))
    if exp_fit != spectral_fit:
        logger.warning('exponential fit and spectral fit disagree on the grid %s', grid)
    return SpectralReport(tuple(roots), r, abs(roots[-1] - r), exp_fit, spectral_fit, alpha,
                          tuple(grid), tuple(deltas), tuple(radii))


# ========== Mean ergodicity ==========

def certify_mean(S, Q, t_grid=None, delta_fn=None, margin=CERT_MARGIN, tol=1e-9):
    """Scan ``t_grid`` for the first t0 with q = delta_Q(A_t0) <= 1 - margin."""
    grid = tuple(t_grid) if t_grid is not None else default_grid(S)
    if not grid:
        raise ParameterError('empty time grid')
    for t in _sample_times(grid):
        if not projection_relations(Q, Q, cesaro_matrix(S, t), tol).T_commutes_P:
            raise InvarianceError('A_t Q = Q A_t fails at t = {}'.format(t))
    delta_fn = _delta_fn(delta_fn)

    values = []
    for t in grid:
        q = _upper(delta_fn(cesaro_matrix(S, t), Q))
        values.append(q)
        logger.debug('mean scan: delta_Q(A_%s) = %.17g', t, q)
        if q <= 1.0 - margin:
            return ErgodicityCertificate(mode=UNIFORM_MEAN, t0=t, q=q, C=2.0 * t / (1.0 - q),
                                         alpha=1.0, projection=Q, grid=grid,
                                         extra={'rate': '1/t'})
    return CertificationFailure(UNIFORM_MEAN,
                                'delta_Q(A_t) > 1 - {} at every grid point'.format(margin),
                                grid, tuple(values))


def ume_bound(cert, t):
    """(2 t0/(1 - q)) / t for t >= t0 (capped at the trivial bound 2)."""
    if cert.mode not in (UNIFORM_MEAN, DOEBLIN):
        raise ParameterError('ume_bound needs a mean certificate, got {!r}'.format(cert.mode))
    if t < cert.t0:
        return 2.0
    return min(2.0, cert.C / t)


def mean_curve(S, Q, cert, points=200, span=100.0):
    """(t, |A_t - Q|, ume_bound) on ``points`` times in [t0, span t0]."""
    rows = []
    for t in _time_points(S, cert.t0, span * cert.t0, points):
        norm = dobrushin.induced_norm(cesaro_matrix(S, t) - Q.matrix, S.space)
        rows.append((float(t), norm, ume_bound(cert, float(t))))
    return tuple(rows)


@dataclass(frozen=True, eq=False)
class WeakMeanReport:
    q: float
    certifies: bool
    t0: float
    n0: int
    decay: tuple = ()
    certificate: ErgodicityCertificate = None

    def to_dict(self):
        return {
            'q': self.q,
            'certifies': self.certifies,
            't0': self.t0,
            'n0': self.n0,
            'decay': [{'t': t, 'delta': d, 'reference_bound': b} for t, d, b in self.decay],
            'certificate': None if self.certificate is None else self.certificate.to_dict(),
        }


def weak_mean_check(S, P, t0, n0, delta_fn=None, margin=CERT_MARGIN, steps=7, tol=1e-9):
    """delta_P(A_t0^n0) < 1 certifies weak mean P-ergodicity; the decay of delta_P(A_t) is observed.

    For n0 = 1 the uniform-mean rate min(1, 2 t0/((1 - q) t)) is attached as a reference bound.
    """
    if not (t0 > 0):
        raise ParameterError('t0 must be positive, got {}'.format(t0))
    if int(n0) != n0 or n0 < 1:
        raise ParameterError('n0 must be a positive integer, got {}'.format(n0))
    n0 = int(n0)
    check_invariance(S, P, (t0, t0 * 2 ** max(steps - 1, 0)), tol)
    delta_fn = _delta_fn(delta_fn)

    q = _upper(delta_fn(np.linalg.matrix_power(cesaro_matrix(S, t0), n0), P))
    certifies = q <= 1.0 - margin
    if not certifies:
        return WeakMeanReport(q, False, t0, n0)

    decay = []
    for k in range(steps):
        t = t0 * 2 ** k
        d = _upper(delta_fn(cesaro_matrix(S, t), P))
        bound = min(1.0, 2.0 * t0 / ((1.0 - q) * t)) if n0 == 1 else None
        decay.append((float(t), d, bound))
    cert = ErgodicityCertificate(mode=WEAK_MEAN, t0=t0, q=q, C=None, alpha=None, projection=P,
                                 n0=n0)
    return WeakMeanReport(q, True, t0, n0, tuple(decay), cert)


# ========== Doeblin-type condition ==========

@dataclass(frozen=True, eq=False)
class DoeblinReport:
    holds: bool
    max_phi_norm: float
    implied_delta: float
    delta_direct: float
    cross_check_ok: bool
    exact: bool
    tau: float
    t0: float
    witness: np.ndarray = None
    certificate: ErgodicityCertificate = None

    def to_dict(self):
        return {
            'holds': self.holds,
            'max_phi_norm': self.max_phi_norm,
            'implied_delta': self.implied_delta,
            'delta_direct': self.delta_direct,
            'cross_check_ok': self.cross_check_ok,
            'exact': self.exact,
            'heuristic': not self.exact,
            'tau': self.tau,
            't0': self.t0,
            'witness': None if self.witness is None else [float(v) for v in self.witness],
            'certificate': None if self.certificate is None else self.certificate.to_dict(),
        }


def _qubit_phi_sup(m, restarts, seed):
    m00, r, c, B = m[0, 0], m[0, 1:], m[1:, 0], m[1:, 1:]

    def phi(u):
        y0 = (m00 + u @ r) / 2.0
        radius = np.linalg.norm(c + u @ B.T, axis=-1) / 2.0
        return np.maximum(y0 + radius, 0.0) + np.maximum(y0 - radius, 0.0)

    if not np.any(r) and not np.any(c):
        # y0 is constant and phi is nondecreasing in |y|, so the top singular direction wins
        _, _, vt = np.linalg.svd(B)
        u = vt[0]
        return float(phi(u[np.newaxis, :])[0]), np.concatenate([[0.5], u / 2.0]), True
    value, u = sup_over_sphere(phi, restarts=restarts, seed=seed)
    return value, np.concatenate([[0.5], u / 2.0]), False


def doeblin_check(S, P, Q, tau, t0, delta_fn=None, restarts=8, seed=0, tol=1e-9):
    """Test A_t0 x + phi_x >= tau Q x with sup_x |phi_x| <= tau/4 over states x.

    The pointwise-minimal compensator is phi_x = (tau Q x - A_t0 x)_+. Classically x -> |phi_x|
    is convex, so its supremum over the simplex is the maximum over the vertices e_i; for the
    qubit it is maximized over pure states, exactly when the Bloch matrix of tau Q - A_t0 is
    block diagonal and heuristically otherwise.
    """
    if not (0.0 < tau <= 1.0):
        raise ParameterError('tau must lie in (0, 1], got {}'.format(tau))
    if not projection_relations(P, Q, np.eye(P.space.coordinate_dim), tol).Q_leq_P:
        raise InvarianceError('Q <= P (Q = QP = PQ) does not hold')

    a = cesaro_matrix(S, t0)
    m = tau * Q.matrix - a
    if S.space.is_classical:
        phi_norms = np.maximum(m, 0.0).sum(axis=0)
        i = int(np.argmax(phi_norms))
        max_phi, exact = float(phi_norms[i]), True
        witness = np.zeros(S.space.n)
        witness[i] = 1.0
    else:
        max_phi, witness, exact = _qubit_phi_sup(m, restarts, seed)

    holds = max_phi <= tau / 4.0 + 1e-12
    delta_direct = _upper(_delta_fn(delta_fn)(a, P))
    implied, cross_ok, cert = None, None, None
    if holds:
        implied = 1.0 - tau / 2.0
        cross_ok = delta_direct <= implied + tol
        if not cross_ok:
            logger.warning('Doeblin condition holds but delta_P(A_t0) = %.17g exceeds 1 - tau/2',
                           delta_direct)
        cert = ErgodicityCertificate(mode=DOEBLIN, t0=t0, q=implied, C=2.0 * t0 / (1.0 - implied),
                                     alpha=1.0, projection=P, tau=tau, max_phi_norm=max_phi,
                                     extra={'rate': '1/t'})
    return DoeblinReport(holds, max_phi, implied, delta_direct, cross_ok, exact, tau, t0,
                         witness, cert)
