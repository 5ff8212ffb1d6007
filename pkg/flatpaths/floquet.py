#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
flatpaths.floquet
~~~~~~~~~~~~~~~~~

This module provides the Floquet decomposition of a periodic discrete
Schrödinger operator :math:`H = \\Delta + \\mu Q`: assembly of the Hermitian
Floquet matrices :math:`H(\\theta)`, band functions sampled over a
quasi-momentum grid with refined extrema, and the Lebesgue measure of the
union of band intervals.
"""

from collections import namedtuple
import logging

import numpy as np
from scipy import linalg, optimize

from .lattice import as_potential, induced_subgraph
from .cohomology import GaugePotential, chain_psi_theta, solve_gauge


logger = logging.getLogger(__name__)

DEFAULT_GRID = {1: 64, 2: 64, 3: 24}
GOLDEN_ITERATIONS = 30
HERMITIAN_TOL = 1e-12
RESIDUAL_TOL = 1e-10
MERGE_TOL = 1e-9

SpectrumEstimate = namedtuple("SpectrumEstimate", ["intervals", "measure", "grid", "refinement_depth"])


class NumericalContractError(RuntimeError):
    """Raised when a numerical post-condition does not hold."""


class NonHermitianError(NumericalContractError):
    """Raised when a Floquet matrix fails the Hermitian check."""


class FloquetMatrix(object):
    """Floquet matrix :math:`H(\\theta)` with rows and columns indexed by ``vertices``."""

    def __init__(self, matrix, vertices, theta=None):
        self.matrix = np.asarray(matrix, dtype=complex)
        self.vertices = tuple(vertices)
        self.theta = theta

    @property
    def shape(self):
        return self.matrix.shape

    def __repr__(self):
        return "FloquetMatrix(vertices={}, theta={})".format(len(self.vertices), self.theta)


def default_grid(d):
    """Default number of quasi-momentum samples per axis."""
    return DEFAULT_GRID.get(d, 12)


def theta_grid(grid):
    """Uniform quasi-momentum grid :math:`\\{k/N\\}` as an array of shape ``(prod(N), d)``."""
    axes = [np.arange(n) / n for n in grid]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([axis.ravel() for axis in mesh], axis=1)


def _normalize_grid(grid, d):
    if grid is None:
        grid = default_grid(d)
    if np.isscalar(grid):
        grid = (int(grid),) * d
    grid = tuple(int(n) for n in grid)
    if len(grid) == 1 and d > 1:
        grid = grid * d
    if len(grid) != d or any(n < 2 for n in grid):
        raise ValueError("Grid {} must give {} sample counts >= 2.".format(grid, d))
    return grid


def _floquet_stack(vertices, edges, d, diagonal, thetas, hopping=1.0):
    """Floquet matrices at every row of ``thetas``; parallel edges add their phases."""
    index = {v: i for i, v in enumerate(vertices)}
    thetas = np.asarray(thetas, dtype=float).reshape(-1, d)
    size = len(vertices)

    stack = np.zeros((len(thetas), size, size), dtype=complex)
    stack[:, np.arange(size), np.arange(size)] = diagonal
    if edges:
        offsets = np.array([edge[2] for edge in edges], dtype=float).reshape(len(edges), d)
        phases = hopping * np.exp(2j * np.pi * thetas @ offsets.T)
        for column, (u, v, _) in enumerate(edges):
            stack[:, index[u], index[v]] += phases[:, column]
            stack[:, index[v], index[u]] += np.conj(phases[:, column])
    return stack


def _check_hermitian(stack):
    scale = max(1.0, float(np.abs(stack).max())) if stack.size else 1.0
    deviation = float(np.abs(stack - np.conj(np.swapaxes(stack, -1, -2))).max()) if stack.size else 0.0
    if deviation > HERMITIAN_TOL * scale:
        raise NonHermitianError("Matrix deviates from its adjoint by {:.3g}.".format(deviation))


def _stack_eigenvalues(stack):
    _check_hermitian(stack)
    return np.linalg.eigvalsh(stack)


def assemble_floquet(graph, potential, mu, theta, hopping=1.0):
    """Assemble :math:`H_{\\mu Q}(\\theta)`.

    Diagonal entries are :math:`\\mu Q(u)`; an edge ``(u, v, n)`` adds
    :math:`e^{2\\pi i \\langle n, \\theta \\rangle}` at ``(u, v)`` and its conjugate at ``(v, u)``.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :param potential: Potential values or :py:obj:`None`.
    :param float mu: Coupling constant.
    :param theta: Quasi-momentum.
    :param float hopping: Weight of every edge.
    :return: Floquet matrix.
    :rtype: :class:`~flatpaths.floquet.FloquetMatrix`
    """
    diagonal = mu * as_potential(potential, graph)
    stack = _floquet_stack(graph.vertices, graph.edges, graph.d, diagonal, theta, hopping)
    return FloquetMatrix(stack[0], graph.vertices, tuple(np.asarray(theta, dtype=float).ravel()))


def assemble_restricted_laplacian(graph, vertices, theta):
    """Assemble :math:`\\Delta_{V_0}(\\theta)`, the Floquet Laplacian of the subgraph induced by ``vertices``.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :param vertices: Non-empty vertex subset.
    :param theta: Quasi-momentum.
    :return: Floquet matrix indexed by the sorted subset.
    :rtype: :class:`~flatpaths.floquet.FloquetMatrix`
    """
    if not len(vertices):
        raise ValueError("Vertex subset must be non-empty.")
    fragment = induced_subgraph(graph, vertices)
    stack = _floquet_stack(fragment.vertices, fragment.edges, fragment.d, np.zeros(len(fragment.vertices)), theta)
    return FloquetMatrix(stack[0], fragment.vertices, tuple(np.asarray(theta, dtype=float).ravel()))


def hermitian_eigenvalues(matrix, check_residual=False):
    """Eigenvalues of a Hermitian matrix in ascending order.

    :param matrix: :class:`~flatpaths.floquet.FloquetMatrix` or square array.
    :param bool check_residual: Also verify :math:`\\|Mv - \\lambda v\\| \\le 10^{-10}\\|M\\|`.
    :return: Eigenvalues.
    :rtype: :class:`numpy.ndarray`
    """
    matrix = matrix.matrix if isinstance(matrix, FloquetMatrix) else np.asarray(matrix)
    _check_hermitian(matrix[np.newaxis])
    if not check_residual:
        return linalg.eigvalsh(matrix)

    values, vectors = linalg.eigh(matrix)
    residual = float(np.linalg.norm(matrix @ vectors - vectors * values, axis=0).max())
    norm = float(np.linalg.norm(matrix, 2))
    if residual > RESIDUAL_TOL * max(norm, np.finfo(float).tiny):
        raise NumericalContractError("Eigen-residual {:.3g} exceeds tolerance for norm {:.3g}.".format(residual, norm))
    return values


class BandStructure(object):
    """Sampled band functions and the band intervals derived from them.

    ``eigenvalues[p, j]`` is the ``j``-th eigenvalue at ``thetas[p]``;
    ``intervals[j]`` is ``[min, max]`` of band ``j`` after extremum refinement.
    """

    def __init__(self, thetas, eigenvalues, intervals, grid, refinement_depth, mu=None):
        self.thetas = thetas
        self.eigenvalues = eigenvalues
        self.intervals = intervals
        self.grid = grid
        self.refinement_depth = refinement_depth
        self.mu = mu

    @property
    def num_bands(self):
        return self.intervals.shape[0]

    def __repr__(self):
        return "BandStructure(bands={}, grid={}, mu={})".format(self.num_bands, self.grid, self.mu)


def _refine_extremum(band, sign, start, value, grid, evaluate):
    """Coordinate-wise bounded minimization of ``sign * lambda_band`` within one grid cell of ``start``."""
    theta = np.array(start, dtype=float)
    best = sign * value
    for axis, n in enumerate(grid):
        step = 1.0 / n

        def objective(t):
            point = theta.copy()
            point[axis] = t
            return sign * evaluate(point)[band]

        result = optimize.minimize_scalar(objective, bounds=(theta[axis] - step, theta[axis] + step),
                                          method="bounded", options={"maxiter": GOLDEN_ITERATIONS, "xatol": 1e-12})
        if result.fun < best:
            best = float(result.fun)
            theta[axis] = result.x
    return sign * best


def _bands(vertices, edges, d, diagonal, grid, refine, hopping=1.0):
    grid = _normalize_grid(grid, d)
    thetas = theta_grid(grid)
    eigenvalues = _stack_eigenvalues(_floquet_stack(vertices, edges, d, diagonal, thetas, hopping))
    intervals = np.stack([eigenvalues.min(axis=0), eigenvalues.max(axis=0)], axis=1)

    if refine and edges:
        def evaluate(theta):
            return _stack_eigenvalues(_floquet_stack(vertices, edges, d, diagonal, theta, hopping))[0]

        for band in range(intervals.shape[0]):
            low_at = int(np.argmin(eigenvalues[:, band]))
            high_at = int(np.argmax(eigenvalues[:, band]))
            low = _refine_extremum(band, 1.0, thetas[low_at], intervals[band, 0], grid, evaluate)
            high = _refine_extremum(band, -1.0, thetas[high_at], intervals[band, 1], grid, evaluate)
            intervals[band] = min(intervals[band, 0], low), max(intervals[band, 1], high)

    return BandStructure(thetas, eigenvalues, intervals, grid, GOLDEN_ITERATIONS if refine else 0)


def compute_bands(graph, potential, mu, grid=None, refine=True, hopping=1.0):
    """Band functions of :math:`H_{\\mu Q}` over a uniform quasi-momentum grid.

    Each sampled band minimum and maximum is refined by a bounded scalar search
    along every axis within one grid cell; refinement only widens band intervals.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :param potential: Potential values or :py:obj:`None`.
    :param float mu: Coupling constant.
    :param grid: Samples per axis (an integer or one per axis).
    :param bool refine: Refine band extrema.
    :param float hopping: Weight of every edge.
    :return: Band structure.
    :rtype: :class:`~flatpaths.floquet.BandStructure`
    """
    diagonal = mu * as_potential(potential, graph)
    bands = _bands(graph.vertices, graph.edges, graph.d, diagonal, grid, refine, hopping)
    bands.mu = mu
    logger.debug("Computed %d bands at mu=%g on grid %s", bands.num_bands, mu, bands.grid)
    return bands


def merge_intervals(intervals, merge_eps=0.0):
    """Union of closed intervals; intervals closer than ``merge_eps`` are joined.

    :param intervals: Sequence of ``(lo, hi)`` pairs.
    :param float merge_eps: Gap below which neighbouring intervals are joined.
    :return: Disjoint sorted intervals.
    :rtype: :py:class:`list`
    """
    merged = list()
    for low, high in sorted((float(lo), float(hi)) for lo, hi in intervals):
        if merged and low <= merged[-1][1] + merge_eps:
            merged[-1][1] = max(merged[-1][1], high)
        else:
            merged.append([low, high])
    return [tuple(interval) for interval in merged]


def merge_tolerance(intervals, rel_tol=MERGE_TOL):
    """Merge tolerance :math:`\\mathrm{rel\\_tol}\\cdot\\max(1, R)` with ``R`` the largest absolute band edge."""
    intervals = np.asarray(intervals, dtype=float)
    radius = float(np.abs(intervals).max()) if intervals.size else 0.0
    return rel_tol * max(1.0, radius)


def spectrum_measure(bands, merge_eps=None, rel_tol=MERGE_TOL):
    """Lebesgue measure of the union of band intervals.

    :param bands: :class:`~flatpaths.floquet.BandStructure` or sequence of ``(lo, hi)`` pairs.
    :param float merge_eps: Merge tolerance; defaults to :func:`merge_tolerance` of the intervals.
    :param float rel_tol: Relative merge tolerance used when ``merge_eps`` is not given.
    :return: Spectrum estimate.
    :rtype: :class:`~flatpaths.floquet.SpectrumEstimate`
    """
    if isinstance(bands, BandStructure):
        intervals, grid, depth = bands.intervals, bands.grid, bands.refinement_depth
    else:
        intervals, grid, depth = np.asarray(bands, dtype=float).reshape(-1, 2), None, 0

    if merge_eps is None:
        merge_eps = merge_tolerance(intervals, rel_tol)
    merged = merge_intervals(intervals, merge_eps)
    return SpectrumEstimate(merged, float(sum(high - low for low, high in merged)), grid, depth)


def gauge_conjugate(matrix, phi):
    """Conjugate a Floquet matrix by :math:`U = \\mathrm{diag}(e^{-2\\pi i \\phi})`, returning :math:`U^* M U`.

    :param matrix: :class:`~flatpaths.floquet.FloquetMatrix`.
    :param phi: :class:`~flatpaths.cohomology.GaugePotential` covering the matrix vertices.
    :return: Conjugated matrix.
    :rtype: :class:`~flatpaths.floquet.FloquetMatrix`
    """
    if isinstance(phi, GaugePotential):
        phi = dict(zip(phi.vertices, phi.values))
    unitary = np.exp(-2j * np.pi * np.array([phi[v] for v in matrix.vertices]))
    conjugated = np.conj(unitary)[:, np.newaxis] * matrix.matrix * unitary[np.newaxis, :]
    return FloquetMatrix(conjugated, matrix.vertices, matrix.theta)


def gauge_invariance_check(graph, vertices, thetas):
    """Compare :math:`\\Delta_{V_0}(\\theta)` with :math:`\\Delta_{V_0}(0)` on a level set with trivial offset class.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :param vertices: Vertex subset with trivial offset class.
    :param thetas: Quasi-momenta to test.
    :return: Largest eigenvalue deviation and largest entrywise deviation after gauge conjugation.
    :rtype: :py:class:`tuple`
    """
    fragment = induced_subgraph(graph, vertices)
    base = assemble_restricted_laplacian(graph, vertices, np.zeros(graph.d))
    base_eigenvalues = hermitian_eigenvalues(base)

    eigenvalue_deviation = 0.0
    entry_deviation = 0.0
    for theta in np.atleast_2d(thetas):
        matrix = assemble_restricted_laplacian(graph, vertices, theta)
        phi = solve_gauge(fragment, chain_psi_theta(fragment, theta))
        eigenvalue_deviation = max(eigenvalue_deviation,
                                   float(np.abs(hermitian_eigenvalues(matrix) - base_eigenvalues).max()))
        entry_deviation = max(entry_deviation,
                              float(np.abs(gauge_conjugate(matrix, phi).matrix - base.matrix).max()))
    return eigenvalue_deviation, entry_deviation
