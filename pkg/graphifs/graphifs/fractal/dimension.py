"""
Hausdorff dimension of graph-directed attractors.

``A(t)`` has entry ``(u, v)`` equal to the sum of ``r_e ** t`` over edges
from u to v. Its spectral radius decreases strictly in t and the dimension is
the unique ``s`` with ``rho(A(s)) = 1``; the Perron vector of ``A(s)`` is the
vector of Hausdorff measures up to scale.
"""
import logging

import attr
import numpy as np
from django.conf import settings

from .exceptions import BracketFailure, InvalidTolerance, NotAtEigenvalueOne
from .ifs_graph import ROOT_VERTEX, compute_hulls


logger = logging.getLogger(__name__)

MIN_TOLERANCE = 1e-14


def build_matrix(ifs, t):
    matrix = np.zeros((ifs.vertex_count, ifs.vertex_count))
    for edge in ifs.edges:
        matrix[edge.source, edge.target] += float(edge.ratio) ** t
    return matrix


def _power_iteration(matrix):
    # A + I is primitive for any irreducible A, so the iteration converges
    # even when the graph is periodic.
    shifted = matrix + np.eye(matrix.shape[0])
    vector = np.ones(matrix.shape[0])
    lower = upper = 0.0
    for step in range(1, settings.POWER_ITERATION_MAX_STEPS + 1):
        image = shifted @ vector
        quotients = image / vector
        lower, upper = quotients.min(), quotients.max()
        vector = image / image.max()
        if upper - lower <= settings.POWER_ITERATION_TOLERANCE * upper:
            return (lower + upper) / 2 - 1, vector, step
    logger.warning(
        'power iteration stopped after %d steps with bracket [%g, %g]',
        settings.POWER_ITERATION_MAX_STEPS, lower - 1, upper - 1,
    )
    return (lower + upper) / 2 - 1, vector, settings.POWER_ITERATION_MAX_STEPS


def spectral_radius(matrix):
    matrix = np.asarray(matrix, dtype=float)
    size = matrix.shape[0]
    if size == 1:
        return float(matrix[0, 0])
    if size == 2:
        trace = matrix[0, 0] + matrix[1, 1]
        det = matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]
        return float((trace + np.sqrt(max(trace * trace - 4 * det, 0.0))) / 2)
    radius, _, _ = _power_iteration(matrix)
    return float(radius)


def eigen_residual(ifs, s, h):
    matrix = build_matrix(ifs, s)
    h = np.asarray(h, dtype=float)
    return float(np.abs(matrix @ h - h).max())


def perron_vector(ifs, s):
    """
    Positive eigenvector of ``A(s)`` for eigenvalue one, scaled so the root
    vertex carries ``|I_root| ** s``.
    """
    matrix = build_matrix(ifs, s)
    radius = spectral_radius(matrix)
    if abs(radius - 1) > settings.EIGEN_RESIDUAL_TOLERANCE:
        raise NotAtEigenvalueOne(
            f'rho(A({s:.10g})) = {radius:.15g} is not 1 within '
            f'{settings.EIGEN_RESIDUAL_TOLERANCE:g}'
        )
    size = ifs.vertex_count
    if size == 1:
        vector = np.ones(1)
    elif size == 2:
        # first row of A(s) h = h fixes h_1 once h_0 = 1
        vector = np.array([1.0, (1 - matrix[0, 0]) / matrix[0, 1]])
    else:
        _, _, right = np.linalg.svd(matrix - np.eye(size))
        vector = right[-1]
        vector = np.abs(vector * np.sign(vector.sum()))
    if not np.all(vector > 0):
        raise NotAtEigenvalueOne(f'eigenvector {vector} is not strictly positive')
    root_length = float(compute_hulls(ifs).length(ROOT_VERTEX))
    vector = vector * (root_length ** s / vector[ROOT_VERTEX])
    return tuple(float(component) for component in vector)


@attr.frozen
class DimensionResult:
    s: float
    rho_residual: float
    h: tuple
    root_vertex: int = ROOT_VERTEX
    bracket: tuple = (0.0, 0.0)
    iterations: int = 0
    eigen_residual: float = 0.0

    def h_ratio(self, numerator=1, denominator=ROOT_VERTEX):
        return self.h[numerator] / self.h[denominator]

    def as_document(self):
        return {
            's': self.s,
            'rho_residual': self.rho_residual,
            'h': list(self.h),
            'root_vertex': self.root_vertex,
            'bracket': list(self.bracket),
            'iterations': self.iterations,
            'eigen_residual': self.eigen_residual,
        }


def solve_dimension(ifs, tol=None):
    """ Bisection for rho(A(s)) = 1 on a bracket grown by doubling """
    tol = settings.DIMENSION_TOLERANCE if tol is None else tol
    if not tol >= MIN_TOLERANCE:
        raise InvalidTolerance(f'tolerance {tol!r} is below {MIN_TOLERANCE:g}')

    def radius(t):
        return spectral_radius(build_matrix(ifs, t))

    lower, upper = 0.0, 1.0
    while radius(upper) >= 1:
        lower, upper = upper, upper * 2
        if upper > settings.BRACKET_LIMIT:
            raise BracketFailure(
                f'rho(A(t)) stays at or above 1 up to t = {settings.BRACKET_LIMIT}'
            )
    bracket = (lower, upper)

    iterations = 0
    while iterations < settings.BISECTION_MAX_ITERATIONS:
        middle = (lower + upper) / 2
        if not lower < middle < upper:
            break
        iterations += 1
        if radius(middle) > 1:
            lower = middle
        else:
            upper = middle
        if upper - lower <= settings.BISECTION_INTERVAL_TOLERANCE:
            break

    s = (lower + upper) / 2
    residual = abs(radius(s) - 1)
    if residual > tol:
        logger.warning('dimension residual %g exceeds tolerance %g', residual, tol)
    h = perron_vector(ifs, s)
    result = DimensionResult(
        s=s,
        rho_residual=residual,
        h=h,
        bracket=bracket,
        iterations=iterations,
        eigen_residual=eigen_residual(ifs, s, h),
    )
    logger.debug('dimension of %s: s=%.12g after %d bisections', ifs, s, iterations)
    return result
