# ErgoCert markov/state_space.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

"""Concrete finite-dimensional state spaces.

Two spaces are realized. ``Classical(n)`` is R^n with the l1 norm, the nonnegative orthant as
cone and the probability simplex as base. ``Qubit`` is the space of 2x2 Hermitian matrices in
Bloch coordinates (w0, w1, w2, w3) with respect to {1, sigma_1, sigma_2, sigma_3}; its base norm
is the trace norm and its base the density matrices.

Elements are plain 1-d numpy arrays of coordinates; stacks of elements use the last axis.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .exceptions import DimensionError, ParameterError


logger = logging.getLogger(__name__)

CLASSICAL = 'classical'
QUBIT = 'qubit'

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class StateSpace:
    kind: str
    n: int = 2

    def __post_init__(self):
        if self.kind not in (CLASSICAL, QUBIT):
            raise ParameterError('unknown state space kind {!r}'.format(self.kind))
        if self.kind == CLASSICAL and (int(self.n) != self.n or self.n < 1):
            raise ParameterError('classical dimension must be a positive integer, got {}'.format(self.n))

    @classmethod
    def classical(cls, n):
        return cls(CLASSICAL, int(n))

    @classmethod
    def qubit(cls):
        return cls(QUBIT, 2)

    @property
    def is_classical(self):
        return self.kind == CLASSICAL

    @property
    def is_qubit(self):
        return self.kind == QUBIT

    @property
    def coordinate_dim(self):
        return self.n if self.kind == CLASSICAL else 4

    def describe(self):
        if self.is_classical:
            return {'classical': {'n': self.n}}
        return 'qubit'

    def __str__(self):
        return 'Classical({})'.format(self.n) if self.is_classical else 'Qubit'


def as_element(space, x):
    """Return ``x`` as a float coordinate array valid for ``space``, or raise."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (space.coordinate_dim,):
        raise DimensionError('element of shape {} does not fit {} (coordinate_dim {})'.format(
            x.shape, space, space.coordinate_dim))
    if not np.all(np.isfinite(x)):
        raise ParameterError('element has non-finite coordinates')
    return x


def bloch_trace_norm(w):
    """Trace norm of Hermitian matrices given in Bloch coordinates (last axis).

    The eigenvalues of w0*1 + w.sigma are w0 +- |w|, so the trace norm is 2*max(|w0|, |w|).
    """
    w = np.asarray(w, dtype=float)
    return 2.0 * np.maximum(np.abs(w[..., 0]), np.linalg.norm(w[..., 1:], axis=-1))


def bloch_positive_part_norm(w):
    """Trace norm of the positive part of Bloch-coordinate Hermitian matrices."""
    w = np.asarray(w, dtype=float)
    r = np.linalg.norm(w[..., 1:], axis=-1)
    return np.maximum(w[..., 0] + r, 0.0) + np.maximum(w[..., 0] - r, 0.0)


def base_norm(space, x):
    x = as_element(space, x)
    if space.is_classical:
        return float(np.abs(x).sum())
    return float(bloch_trace_norm(x))


def is_positive(space, x, tol=DEFAULT_TOL):
    x = as_element(space, x)
    if space.is_classical:
        return bool(np.all(x >= -tol))
    return bool(x[0] >= -tol and np.linalg.norm(x[1:]) <= x[0] + tol)


def functional_f(space, x):
    """The strictly positive functional cutting out the base: mass or trace."""
    x = as_element(space, x)
    if space.is_classical:
        return float(x.sum())
    return float(2.0 * x[0])


def in_base(space, x, tol=DEFAULT_TOL):
    return is_positive(space, x, tol) and abs(functional_f(space, x) - 1.0) <= tol


# ========== Pure qubit states ==========

def pure_states(directions):
    """Bloch coordinates (1/2, u/2) of the pure states with unit Bloch vectors ``u``."""
    u = np.atleast_2d(np.asarray(directions, dtype=float))
    return np.hstack([np.full((u.shape[0], 1), 0.5), 0.5 * u])


def fibonacci_sphere(count):
    """Nearly uniform deterministic points on the unit 2-sphere."""
    k = np.arange(count) + 0.5
    z = 1.0 - 2.0 * k / count
    radius = np.sqrt(1.0 - z * z)
    phi = np.pi * (1.0 + 5.0 ** 0.5) * k
    return np.column_stack([radius * np.cos(phi), radius * np.sin(phi), z])


def haar_directions(count, rng):
    """Bloch vectors of Haar-random pure qubit states (uniform on the sphere)."""
    g = rng.standard_normal((count, 3))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _angles_to_direction(angles):
    theta, phi = angles
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


def sup_over_sphere(objective, restarts=8, seed=0, grid=2000):
    """Heuristic supremum of ``objective`` over unit vectors of R^3.

    ``objective`` maps an (m, 3) array of unit vectors to m values. A Fibonacci grid is scanned,
    then the best grid points and ``restarts`` random starts are polished with Nelder-Mead in
    spherical angles. Every evaluated value is attained, so the result is a certified lower bound
    on the supremum.

    Returns
    -------
    (float, numpy.ndarray)
        The best value found and the unit vector attaining it.
    """
    rng = np.random.default_rng(seed)
    points = np.vstack([fibonacci_sphere(grid), haar_directions(max(restarts, 1), rng)])
    values = objective(points)
    best = int(np.argmax(values))
    best_value, best_point = float(values[best]), points[best]

    starts = points[np.argsort(values)[::-1][:max(restarts, 1)]]
    for start in starts:
        theta0 = np.arccos(np.clip(start[2], -1.0, 1.0))
        phi0 = np.arctan2(start[1], start[0])
        result = optimize.minimize(
            lambda a: -float(objective(_angles_to_direction(a)[np.newaxis, :])[0]),
            np.array([theta0, phi0]), method='Nelder-Mead',
            options={'xatol': 1e-12, 'fatol': 1e-14, 'maxiter': 4000})
        value = -float(result.fun)
        if value > best_value:
            best_value, best_point = value, _angles_to_direction(result.x)
    logger.debug('sphere search: best %.17g after %d starts', best_value, len(starts))
    return best_value, best_point
