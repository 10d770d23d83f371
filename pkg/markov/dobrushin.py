# ErgoCert markov/dobrushin.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

"""The generalized Dobrushin coefficient delta_P(T) = sup {|Tx| / |x| : x in ker P, x != 0}.

Several methods are provided. ``delta_exact`` and ``delta_pair_formula`` handle classical block
projections through the extreme points +-(e_i - e_k)/2 of the unit ball of ker P.
``delta_vertex_enum`` enumerates the vertices of {x : Px = 0, |x|_1 <= 1} for any classical
projection and serves as the brute-force oracle. ``delta_pauli_kernel`` is the closed form for
Pauli-diagonal qubit maps. ``delta_bracket`` gives a certified bracket for everything else.
``delta`` picks the best applicable method.

When ker P = {0} (P = I) every method returns 1, following the convention for the identity.
"""

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, optimize

from .exceptions import DimensionError, GuardError, MarkovianityError, MethodError
from .markov_ops import (IDEMPOTENCY_TOL, MarkovOperator, MarkovProjection, pauli_diagonal,
                         projection_matrix)
from .state_space import bloch_trace_norm, sup_over_sphere


logger = logging.getLogger(__name__)

BLOCK_EXACT = 'BlockExact'
VERTEX_ENUMERATION = 'VertexEnumeration'
PAIR_FORMULA = 'PairFormula'
PAULI_KERNEL = 'PauliKernel'
BRACKET = 'Bracket'

VERTEX_ENUM_MAX_N = 10
TRIVIAL_KERNEL_NOTE = 'trivial kernel N_P = {0}: delta_P is 1 by convention'

_VERTEX_CHUNK = 20000


@dataclass(frozen=True, eq=False)
class DeltaResult:
    lower: float
    upper: float
    method: str
    witness: np.ndarray = None
    note: str = ''
    details: dict = field(default_factory=dict)

    @property
    def is_exact(self):
        return self.method != BRACKET

    @property
    def value(self):
        """The exact value, or None for a bracket."""
        return self.upper if self.is_exact else None

    @property
    def bracket(self):
        return (self.lower, self.upper)

    def to_dict(self):
        d = {
            'method': self.method,
            'value': self.value,
            'lower': self.lower,
            'upper': self.upper,
            'witness': None if self.witness is None else [float(v) for v in self.witness],
        }
        if self.note:
            d['note'] = self.note
        d.update(self.details)
        return d


def _exact(value, method, witness=None, note=''):
    value = float(value)
    return DeltaResult(value, value, method, witness, note)


def _matrix(T):
    return T.matrix if isinstance(T, MarkovOperator) else np.asarray(T, dtype=float)


def _space_of(T, P, space=None):
    for candidate in (space, getattr(P, 'space', None), getattr(T, 'space', None)):
        if candidate is not None:
            return candidate
    raise DimensionError('cannot infer the state space from raw matrices; pass space=')


def _check_shapes(t, p):
    if t.shape != p.shape or t.shape[0] != t.shape[1]:
        raise DimensionError('operator {} and projection {} do not match'.format(t.shape, p.shape))


# ========== Operator norms ==========

def _qubit_norm_parts(m):
    return m[0, 0], m[0, 1:], m[1:, 0], m[1:, 1:]


def induced_norm(T, space=None, restarts=8, seed=0):
    """Operator norm of ``T`` for the base norm of ``space``.

    Classical: maximum column l1 norm. Qubit: the supremum over the pure states (1/2, u/2),
    which are the extreme points of the trace-norm ball. With Bloch matrix [[m00, r], [c, B]]
    the image norm is max(|m00 + r.u|, |c + B u|); the first part peaks at |m00| + |r| and,
    for c = 0, the second at the largest singular value of B. Only c != 0 needs a sphere search.
    """
    m = _matrix(T)
    space = space if space is not None else getattr(T, 'space', None)
    if space is None:
        raise DimensionError('induced_norm needs a state space')
    if m.shape != (space.coordinate_dim, space.coordinate_dim):
        raise DimensionError('matrix of shape {} does not act on {}'.format(m.shape, space))
    if space.is_classical:
        return float(np.abs(m).sum(axis=0).max(initial=0.0))

    m00, r, c, B = _qubit_norm_parts(m)
    first = abs(m00) + float(np.linalg.norm(r))
    if not np.any(c):
        return max(first, float(np.linalg.norm(B, 2)))
    second, _ = sup_over_sphere(lambda u: np.linalg.norm(c + u @ B.T, axis=1),
                                restarts=restarts, seed=seed)
    logger.debug('qubit induced norm by sphere search (first column not diagonal): %.17g', second)
    return max(first, second)


def induced_norm_bound(T, space):
    """Closed-form upper bound on ``induced_norm``; exact unless the qubit first column has c != 0.

    On pure states |c + B u| <= |c| + |B|_2, so no sphere search is needed.
    """
    m = _matrix(T)
    if space.is_classical:
        return induced_norm(m, space)
    m00, r, c, B = _qubit_norm_parts(m)
    first = abs(m00) + float(np.linalg.norm(r))
    return max(first, float(np.linalg.norm(c)) + float(np.linalg.norm(B, 2)))


def induced_norms(stack, space):
    """Vectorized ``induced_norm`` over a stack of matrices (last two axes)."""
    stack = np.asarray(stack, dtype=float)
    if space.is_classical:
        return np.abs(stack).sum(axis=-2).max(axis=-1)
    if not np.any(stack[..., 1:, 0]):
        first = np.abs(stack[..., 0, 0]) + np.linalg.norm(stack[..., 0, 1:], axis=-1)
        second = np.linalg.norm(stack[..., 1:, 1:], ord=2, axis=(-2, -1))
        return np.maximum(first, second)
    flat = stack.reshape((-1, 4, 4))
    return np.array([induced_norm(m, space) for m in flat]).reshape(stack.shape[:-2])


def classical_dobrushin(T):
    """The classical coefficient (1/2) max_{i,k} |T e_i - T e_k|_1."""
    t = _matrix(T)
    diffs = np.abs(t[:, :, np.newaxis] - t[:, np.newaxis, :]).sum(axis=0)
    return 0.5 * float(diffs.max(initial=0.0))


# ========== Classical block projections ==========

def _require_block(P):
    if not isinstance(P, MarkovProjection) or not P.is_block:
        raise MethodError('this method needs a classical projection with block structure')
    if not P.space.is_classical:
        raise MethodError('block methods apply to classical spaces only')


def delta_exact(T, P):
    """Exact delta_P(T) for a block projection P.

    ker P is the set of vectors whose block sums vanish, the extreme points of its l1 unit ball
    are +-(e_i - e_k)/2 with i, k in a common block, and x -> |Tx|_1 is convex, so the supremum
    is (1/2) max_j max_{i,k in B_j} |T(e_i - e_k)|_1. Ties go to the lexicographically smallest
    (j, i, k).
    """
    _require_block(P)
    t = _matrix(T)
    _check_shapes(t, P.matrix)

    best, best_pair = -1.0, None
    for j, block in enumerate(P.blocks):
        if len(block) < 2:
            continue
        idx = sorted(block)
        cols = t[:, idx]
        pair_values = 0.5 * np.abs(cols[:, :, np.newaxis] - cols[:, np.newaxis, :]).sum(axis=0)
        pair_values[np.tril_indices(len(idx))] = -1.0
        flat = int(np.argmax(pair_values))
        value = float(pair_values.flat[flat])
        if value > best:
            best = value
            best_pair = (idx[flat // len(idx)], idx[flat % len(idx)])
    if best_pair is None:
        return _exact(1.0, BLOCK_EXACT, note=TRIVIAL_KERNEL_NOTE)

    witness = np.zeros(t.shape[0])
    witness[best_pair[0]], witness[best_pair[1]] = 0.5, -0.5
    return _exact(best, BLOCK_EXACT, witness)


def delta_pair_formula(T, P, space=None):
    """delta_P(T) = (1/2) sup {|Tu - Tv| : u, v in the base, u - v in ker P}, over vertex pairs."""
    _require_block(P)
    if space is not None and space != P.space:
        raise DimensionError('projection lives on {}, not {}'.format(P.space, space))
    t = _matrix(T)
    _check_shapes(t, P.matrix)

    best, witness = None, None
    for block in P.blocks:
        for i, k in itertools.combinations(sorted(block), 2):
            value = 0.5 * float(np.abs(t[:, i] - t[:, k]).sum())
            if best is None or value > best:
                best = value
                witness = np.zeros(t.shape[0])
                witness[i], witness[k] = 0.5, -0.5
    if best is None:
        return _exact(1.0, PAIR_FORMULA, note=TRIVIAL_KERNEL_NOTE)
    return _exact(best, PAIR_FORMULA, witness)


# ========== Vertex enumeration ==========

def delta_vertex_enum(T, P, space=None, max_n=VERTEX_ENUM_MAX_N):
    """Exact delta_P(T) for any classical idempotent P by vertex enumeration.

    With R an orthonormal basis of the row space of P, the set {x : Px = 0, |x|_1 = 1} is the
    image under (u, v) -> u - v of the polytope {u, v >= 0, R(u - v) = 0, sum(u + v) = 1}. Every
    basic feasible solution of that system is enumerated and |Tx|_1 maximized over them.
    """
    t, p = _matrix(T), projection_matrix(P)
    _check_shapes(t, p)
    space = space if space is not None else getattr(P, 'space', None) or getattr(T, 'space', None)
    if space is not None and not space.is_classical:
        raise MethodError('vertex enumeration applies to classical spaces only')
    n = t.shape[0]
    if n > max_n:
        raise GuardError('vertex enumeration is limited to n <= {}, got n = {}'.format(max_n, n))
    if not np.allclose(p @ p, p, rtol=0.0, atol=IDEMPOTENCY_TOL * max(1.0, np.abs(p).max())):
        raise MarkovianityError('projection matrix is not idempotent')

    rows = linalg.orth(p.T).T if np.any(p) else np.zeros((0, n))
    rank = rows.shape[0]
    if rank == n:
        return _exact(1.0, VERTEX_ENUMERATION, note=TRIVIAL_KERNEL_NOTE)

    system = np.vstack([np.hstack([rows, -rows]), np.ones((1, 2 * n))])
    m = rank + 1
    rhs = np.zeros((m, 1))
    rhs[-1, 0] = 1.0

    best, witness, visited = -1.0, None, 0
    combos = itertools.combinations(range(2 * n), m)
    while True:
        chunk = np.array(list(itertools.islice(combos, _VERTEX_CHUNK)), dtype=int)
        if chunk.size == 0:
            break
        bases = np.moveaxis(system[:, chunk], 1, 0)
        regular = np.linalg.svd(bases, compute_uv=False)[:, -1] > 1e-10
        if not np.any(regular):
            continue
        chunk, bases = chunk[regular], bases[regular]
        solutions = np.linalg.solve(bases, np.broadcast_to(rhs, (len(chunk), m, 1)))[..., 0]
        feasible = np.all(solutions >= -1e-12, axis=1)
        if not np.any(feasible):
            continue
        chunk, solutions = chunk[feasible], solutions[feasible]
        lifted = np.zeros((len(chunk), 2 * n))
        np.put_along_axis(lifted, chunk, solutions, axis=1)
        x = lifted[:, :n] - lifted[:, n:]
        # u_i = v_i = 1/2 is basic too; it projects to x = 0
        x = x[np.abs(x).sum(axis=1) > 1e-12]
        if x.size == 0:
            continue
        values = np.abs(x @ t.T).sum(axis=1)
        visited += len(x)
        k = int(np.argmax(values))
        if values[k] > best:
            best, witness = float(values[k]), x[k] / np.abs(x[k]).sum()
    logger.debug('vertex enumeration: %d feasible bases, n=%d, rank P=%d', visited, n, rank)
    return _exact(best, VERTEX_ENUMERATION, witness)


# ========== Qubit ==========

def delta_pauli_kernel(T, P):
    """Closed form for Pauli-diagonal T = diag(1, a1, a2, a3) and Pauli-diagonal projection P.

    ker P = span {sigma_i : p_i = 0}, and on it |Tx| / |x| = |(a_i w_i)|_2 / |w|_2, whose
    supremum is max |a_i| over the kernel indices, attained at sigma_i / 2.
    """
    t, p = _matrix(T), projection_matrix(P)
    a, q = pauli_diagonal(t), pauli_diagonal(p)
    if a is None or q is None:
        raise MethodError('the Pauli kernel reduction needs Pauli-diagonal operator and projection')
    if not np.all(np.isin(np.round(q, 12), (0.0, 1.0))) or q[0] != 1.0:
        raise MethodError('Pauli-diagonal projection must have diagonal (1, p1, p2, p3) with p_i in {0, 1}')
    kernel = [i for i in (1, 2, 3) if abs(q[i]) < 0.5]
    if not kernel:
        return _exact(1.0, PAULI_KERNEL, note=TRIVIAL_KERNEL_NOTE)
    i = max(kernel, key=lambda k: (abs(a[k]), -k))
    witness = np.zeros(4)
    witness[i] = 0.5
    return _exact(abs(a[i]), PAULI_KERNEL, witness)


# ========== Bracket ==========

def _ratio_function(t, basis, space):
    if space.is_classical:
        def norm(x):
            return np.abs(x).sum(axis=-1)
    else:
        norm = bloch_trace_norm

    def ratio(c):
        x = np.atleast_2d(c) @ basis.T
        size = norm(x)
        return np.divide(norm(x @ t.T), size, out=np.zeros_like(size), where=size > 0)
    return ratio


def delta_bracket(T, P, restarts=16, seed=0, space=None):
    """Certified bracket lower <= delta_P(T) <= upper for any idempotent P.

    Lower: the best ratio |Tx| / |x| found over directions x in ker P (kernel basis vectors,
    singular directions of T restricted to ker P, and ``restarts`` seeded random starts, each
    polished by Nelder-Mead). Upper: the operator norm of T(I - P), since x = (I - P)x on ker P.
    """
    space = _space_of(T, P, space)
    t, p = _matrix(T), projection_matrix(P)
    _check_shapes(t, p)
    basis = linalg.null_space(p)
    d = basis.shape[1]
    if d == 0:
        return DeltaResult(1.0, 1.0, BRACKET, note=TRIVIAL_KERNEL_NOTE)

    upper = induced_norm(t @ (np.eye(t.shape[0]) - p), space, seed=seed)
    ratio = _ratio_function(t, basis, space)

    rng = np.random.default_rng(seed)
    _, _, vt = np.linalg.svd(t @ basis)
    starts = np.vstack([np.eye(d), vt, rng.standard_normal((restarts, d))])
    values = ratio(starts)
    k = int(np.argmax(values))
    lower, best = float(values[k]), starts[k]
    if d > 1:
        for start in starts[np.argsort(values)[::-1][:max(restarts, 1)]]:
            result = optimize.minimize(lambda c: -float(ratio(c)[0]), start, method='Nelder-Mead',
                                       options={'xatol': 1e-12, 'fatol': 1e-15, 'maxiter': 2000 * d})
            if -result.fun > lower:
                lower, best = float(-result.fun), result.x
    witness = basis @ best
    witness = witness / (np.abs(witness).sum() if space.is_classical else bloch_trace_norm(witness))
    return DeltaResult(lower, max(upper, lower), BRACKET, witness)


# ========== Dispatch ==========

def delta(T, P, restarts=16, seed=0, space=None):
    """delta_P(T) by the best method that applies to (T, P)."""
    space = _space_of(T, P, space)
    if space.is_classical:
        if isinstance(P, MarkovProjection) and P.is_block:
            return delta_exact(T, P)
        if space.n <= VERTEX_ENUM_MAX_N:
            return delta_vertex_enum(T, P, space)
    elif pauli_diagonal(_matrix(T)) is not None and pauli_diagonal(projection_matrix(P)) is not None:
        try:
            return delta_pauli_kernel(T, P)
        except MethodError:
            pass
    return delta_bracket(T, P, restarts=restarts, seed=seed, space=space)
