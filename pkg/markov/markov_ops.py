# ErgoCert markov/markov_ops.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

"""Markov operators and Markov projections on a state space.

Operators act on column vectors of coordinates from the left, so a classical Markov operator is
a column-stochastic matrix and a qubit Markov operator has first Bloch row (1, 0, 0, 0).
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .exceptions import DimensionError, MarkovianityError, ParameterError
from .state_space import DEFAULT_TOL, haar_directions, pure_states


logger = logging.getLogger(__name__)

POSITIVITY_SAMPLES = 10000
IDEMPOTENCY_TOL = 1e-12


def _frozen(matrix):
    matrix = np.array(matrix, dtype=float)
    matrix.setflags(write=False)
    return matrix


def check_matrix(space, matrix):
    matrix = np.asarray(matrix, dtype=float)
    d = space.coordinate_dim
    if matrix.shape != (d, d):
        raise DimensionError('matrix of shape {} does not act on {} (expected {}x{})'.format(
            matrix.shape, space, d, d))
    if not np.all(np.isfinite(matrix)):
        raise ParameterError('matrix has non-finite entries')
    return matrix


def pauli_diagonal(matrix, tol=0.0):
    """Return the diagonal of a 4x4 Bloch matrix when it is diagonal within ``tol``, else None."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (4, 4):
        return None
    off = matrix - np.diag(np.diag(matrix))
    if np.max(np.abs(off)) > tol:
        return None
    return np.diag(matrix).copy()


@dataclass(frozen=True, eq=False)
class MarkovOperator:
    """A linear map x -> matrix @ x on ``space``; Markovianity is checked by ``validate_markov``."""
    space: object
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'matrix', _frozen(check_matrix(self.space, self.matrix)))

    @classmethod
    def identity(cls, space):
        return cls(space, np.eye(space.coordinate_dim))

    def __call__(self, x):
        return self.matrix @ np.asarray(x, dtype=float)

    def __matmul__(self, other):
        if isinstance(other, MarkovOperator):
            if other.space != self.space:
                raise DimensionError('cannot compose operators on {} and {}'.format(
                    self.space, other.space))
            return MarkovOperator(self.space, self.matrix @ other.matrix)
        return NotImplemented

    def __repr__(self):
        return 'MarkovOperator({}, {})'.format(self.space, self.matrix.tolist())


@dataclass(frozen=True, eq=False)
class MarkovProjection:
    """An idempotent Markov operator, optionally carrying classical block (lumping) structure.

    ``blocks`` is a tuple of index tuples partitioning range(n); ``weights`` holds one length-n
    probability vector per block, supported on that block.
    """
    base: MarkovOperator
    blocks: tuple = None
    weights: tuple = None

    def __post_init__(self):
        m = self.base.matrix
        if not np.allclose(m @ m, m, rtol=0.0, atol=IDEMPOTENCY_TOL * max(1.0, np.abs(m).max())):
            raise MarkovianityError('projection matrix is not idempotent')

    @property
    def space(self):
        return self.base.space

    @property
    def matrix(self):
        return self.base.matrix

    @property
    def is_block(self):
        return self.blocks is not None

    @property
    def pauli_diagonal(self):
        if not self.space.is_qubit:
            return None
        return pauli_diagonal(self.matrix)

    def describe(self):
        if self.is_block:
            return {
                'blocks': [list(b) for b in self.blocks],
                'weights': [[float(w[i]) for i in b] for b, w in zip(self.blocks, self.weights)],
            }
        diag = self.pauli_diagonal
        if diag is not None:
            return {'pauli_p': [float(v) for v in diag[1:]]}
        return {'matrix': self.matrix.tolist()}


# ========== Validation ==========

@dataclass(frozen=True)
class MarkovReport:
    is_positive: bool
    preserves_base: bool
    exact: bool = True

    @property
    def is_markov(self):
        return self.is_positive and self.preserves_base


def validate_markov(T, tol=DEFAULT_TOL, samples=POSITIVITY_SAMPLES, seed=0):
    """Check positivity and base preservation of ``T``.

    Classical checks are exact. For the qubit, Pauli-diagonal maps diag(a0, a1, a2, a3) use the
    exact criterion max |a_i| <= a0; any other Bloch matrix is tested on ``samples`` Haar-random
    pure states, which is reported with ``exact=False``.
    """
    space, m = T.space, T.matrix
    if space.is_classical:
        return MarkovReport(
            is_positive=bool(np.all(m >= -tol)),
            preserves_base=bool(np.allclose(m.sum(axis=0), 1.0, rtol=0.0, atol=tol)))

    preserves_base = bool(np.allclose(m[0], [1.0, 0.0, 0.0, 0.0], rtol=0.0, atol=tol))
    diag = pauli_diagonal(m)
    if diag is not None:
        return MarkovReport(is_positive=bool(np.max(np.abs(diag[1:])) <= diag[0] + tol),
                            preserves_base=preserves_base)

    images = pure_states(haar_directions(samples, np.random.default_rng(seed))) @ m.T
    positive = np.all(images[:, 0] >= -tol) and \
        np.all(np.linalg.norm(images[:, 1:], axis=1) <= images[:, 0] + tol)
    logger.debug('sampled qubit positivity over %d pure states: %s', samples, positive)
    return MarkovReport(is_positive=bool(positive), preserves_base=preserves_base, exact=False)


def require_markov(T, tol=DEFAULT_TOL, what='operator'):
    report = validate_markov(T, tol)
    if not report.is_markov:
        raise MarkovianityError('{} is not Markov (positive: {}, preserves base: {})'.format(
            what, report.is_positive, report.preserves_base))
    return report


# ========== Projections ==========

def block_projection(space, blocks, weights):
    """Build the lumping projection P x = sum_j (mass of x on block j) q_j.

    Parameters
    ----------
    space : StateSpace
        Must be classical.
    blocks : sequence of sequences of int
        A partition of range(n), 0-based.
    weights : sequence of sequences of float
        One probability vector per block, either listing the block's entries in block order or
        given as a full length-n vector vanishing off the block.
    """
    if not space.is_classical:
        raise ParameterError('block projections live on classical spaces only')
    n = space.n
    blocks = tuple(tuple(int(i) for i in b) for b in blocks)
    seen = sorted(i for b in blocks for i in b)
    if any(len(b) == 0 for b in blocks) or seen != list(range(n)):
        raise ParameterError('blocks {} do not partition range({})'.format(
            [list(b) for b in blocks], n))
    if len(weights) != len(blocks):
        raise ParameterError('{} weight vectors given for {} blocks'.format(len(weights), len(blocks)))

    full = []
    for j, (block, w) in enumerate(zip(blocks, weights)):
        w = np.asarray(w, dtype=float)
        q = np.zeros(n)
        if w.shape == (len(block),):
            q[list(block)] = w
        elif w.shape == (n,):
            outside = np.delete(w, list(block))
            if np.any(np.abs(outside) > 0.0):
                raise ParameterError('weight vector {} is not supported on block {}'.format(j, list(block)))
            q = w.copy()
        else:
            raise DimensionError('weight vector {} has length {}, expected {} or {}'.format(
                j, w.size, len(block), n))
        if np.any(q < 0.0) or abs(q.sum() - 1.0) > 1e-12:
            raise ParameterError('weight vector {} is not a probability vector'.format(j))
        q.setflags(write=False)
        full.append(q)

    matrix = np.zeros((n, n))
    for block, q in zip(blocks, full):
        matrix[:, list(block)] += q[:, np.newaxis]
    return MarkovProjection(MarkovOperator(space, matrix), blocks=blocks, weights=tuple(full))


def rank_one_projection(space, pi):
    """The classical averaging projection x -> (sum x) pi."""
    return block_projection(space, [range(space.n)], [pi])


def projection_from_matrix(space, matrix, tol=DEFAULT_TOL):
    """Accept a raw idempotent Markov matrix as a projection without block structure."""
    P = MarkovProjection(MarkovOperator(space, matrix))
    require_markov(P.base, tol, what='projection')
    return P


def projection_matrix(P):
    """The matrix of a MarkovProjection, or of a raw square array standing in for one."""
    if isinstance(P, MarkovProjection):
        return P.matrix
    if isinstance(P, MarkovOperator):
        return P.matrix
    return np.asarray(P, dtype=float)


def kernel_basis(P):
    """Orthonormal basis (columns) of N_P = ker P."""
    return linalg.null_space(projection_matrix(P))


def in_kernel(P, x, tol=IDEMPOTENCY_TOL):
    return bool(np.max(np.abs(projection_matrix(P) @ np.asarray(x, dtype=float)), initial=0.0) <= tol)


@dataclass(frozen=True)
class RelationsReport:
    P_idempotent: bool
    Q_leq_P: bool
    T_commutes_P: bool
    TP_equals_P: bool


def _close(a, b, tol):
    return bool(np.allclose(a, b, rtol=0.0, atol=tol))


def projection_relations(P, Q, T, tol=DEFAULT_TOL):
    """Entrywise checks of P^2 = P, Q <= P (Q = QP = PQ), TP = PT and TP = P."""
    p, q = projection_matrix(P), projection_matrix(Q)
    t = T.matrix if isinstance(T, MarkovOperator) else np.asarray(T, dtype=float)
    if not (p.shape == q.shape == t.shape):
        raise DimensionError('projection_relations needs operators of one size, got {}, {}, {}'.format(
            p.shape, q.shape, t.shape))
    return RelationsReport(
        P_idempotent=_close(p @ p, p, tol),
        Q_leq_P=_close(q @ p, q, tol) and _close(p @ q, q, tol),
        T_commutes_P=_close(t @ p, p @ t, tol),
        TP_equals_P=_close(t @ p, p, tol),
    )
