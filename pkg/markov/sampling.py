# ErgoCert markov/sampling.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

"""Seeded random instances: Markov matrices, block projections and P-invariant generators.

The invariant family used throughout is the set of generators A with A P = P A = 0. For a block
projection these are the block-diagonal rate matrices whose j-th block annihilates the block
weight q_j; they are sampled reversible with respect to q_j, which makes them valid rate matrices
by construction.
"""

import numpy as np

from .markov_ops import block_projection
from .state_space import StateSpace


def rng_from(seed_or_rng):
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def random_markov(n, rng, sparsity=0.0):
    """Column-stochastic n x n matrix with Dirichlet columns; ``sparsity`` zeroes entries at random."""
    rng = rng_from(rng)
    m = rng.dirichlet(np.ones(n), size=n).T
    if sparsity > 0.0:
        mask = rng.random((n, n)) < sparsity
        mask[rng.integers(n, size=n), np.arange(n)] = False
        m = np.where(mask, 0.0, m)
        m /= m.sum(axis=0, keepdims=True)
    return m


def random_rate_matrix(n, rng, scale=1.0):
    rng = rng_from(rng)
    a = scale * rng.random((n, n))
    np.fill_diagonal(a, 0.0)
    np.fill_diagonal(a, -a.sum(axis=0))
    return a


def random_partition(n, rng, n_blocks=None):
    rng = rng_from(rng)
    if n_blocks is None:
        n_blocks = int(rng.integers(1, n + 1))
    labels = np.concatenate([np.arange(n_blocks), rng.integers(n_blocks, size=n - n_blocks)])
    labels = rng.permutation(labels)
    return [sorted(np.flatnonzero(labels == j).tolist()) for j in range(n_blocks)]


def random_block_projection(n, rng, n_blocks=None):
    rng = rng_from(rng)
    blocks = random_partition(n, rng, n_blocks)
    weights = [rng.dirichlet(np.ones(len(b))) for b in blocks]
    return block_projection(StateSpace.classical(n), blocks, weights)


def _reversible_block(q, rng, scale):
    k = len(q)
    s = scale * rng.random((k, k))
    s = (s + s.T) / 2.0
    rates = s * q[:, np.newaxis]
    np.fill_diagonal(rates, 0.0)
    np.fill_diagonal(rates, -rates.sum(axis=0))
    return rates


def random_invariant_generator(P, rng, scale=1.0):
    """Rate matrix A with A P = P A = 0, so that T_t P = P T_t = P for all t."""
    rng = rng_from(rng)
    n = P.space.n
    a = np.zeros((n, n))
    for block, q in zip(P.blocks, P.weights):
        idx = list(block)
        a[np.ix_(idx, idx)] = _reversible_block(q[idx], rng, scale)
    return a


def random_invariant_markov(P, rng):
    """Markov matrix K with K P = P K = P, obtained by uniformizing a random invariant generator."""
    rng = rng_from(rng)
    a = random_invariant_generator(P, rng)
    rate = max(float(np.max(-np.diag(a), initial=0.0)), 1e-12)
    return np.eye(P.space.n) + a / rate


def random_commuting(P, rng):
    """A general (non-Markov) matrix H with H P = P H: H = P + (I - P) R (I - P)."""
    rng = rng_from(rng)
    n = P.space.n
    r = rng.standard_normal((n, n))
    i_p = np.eye(n) - P.matrix
    return P.matrix + i_p @ r @ i_p


def random_annihilated(P, rng):
    """A matrix H with P H = 0, namely (I - P) R."""
    rng = rng_from(rng)
    n = P.space.n
    return (np.eye(n) - P.matrix) @ rng.standard_normal((n, n))
