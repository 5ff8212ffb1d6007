#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
flatpaths.sweep
~~~~~~~~~~~~~~~

This module studies the spectrum of :math:`H = \\Delta + \\mu Q` as the coupling
:math:`\\mu` grows: it sweeps a coupling schedule, assigns bands to the level
set they cluster around, fits the decay of the spectral measure, computes the
first-order coefficients of each cluster and checks them against the full
eigenvalues, and evaluates the lower bound available for separable
potentials on :math:`\\mathbb{Z}^d`.
"""

from collections import namedtuple
import itertools
import logging
import warnings

import networkx as nx
from networkx.algorithms import isomorphism
import numpy as np

from .lattice import as_potential, gen_lattice, induced_subgraph, level_sets, DEFAULT_LEVEL_TOL
from .cohomology import flat_path_report
from .floquet import (compute_bands, merge_tolerance, spectrum_measure, _floquet_stack, _stack_eigenvalues, _bands,
                      MERGE_TOL)


logger = logging.getLogger(__name__)

DEFAULT_MUS = tuple(float(mu) for mu in np.geomspace(10.0, 1000.0, 5))
MEASURE_FLOOR = 1e-9
FLAT_TOL = 1e-6
NONFLAT_TOL = 1e-3
DECAY_SLOPE = -0.9
BOUNDED_FLOOR = 0.5
LOWER_BOUND_SLACK = 0.1

DecayFit = namedtuple("DecayFit", ["slope", "intercept", "residual", "samples"])
FirstOrderCoefficients = namedtuple("FirstOrderCoefficients", ["value", "vertices", "thetas", "coefficients", "flat"])
PerturbationReport = namedtuple("PerturbationReport", ["value", "mu", "max_deviation", "scale"])
CriterionCheck = namedtuple("CriterionCheck", ["report", "sweep", "fit", "lower_bound", "consistent"])


class ClusterOverlapWarning(UserWarning):
    """Issued when a coupling is too small for the level-set clusters to separate."""


class ClusterOverlapError(ValueError):
    """Raised when a perturbation check is requested below the separation threshold."""


class InsufficientDataError(ValueError):
    """Raised when too few positive measures are available for a decay fit."""


class NotHypercubicError(ValueError):
    """Raised when the separable lower bound is requested for a graph that is not :math:`\\mathbb{Z}^d`."""


class SweepResult(object):
    """Spectral measures along a coupling schedule.

    ``cluster_lengths[i, c]`` is the merged band length of the cluster around the
    ``c``-th level value at coupling ``mus[i]``.
    """

    def __init__(self, mus, measures, level_values=(), cluster_lengths=None, estimates=(), grid=None,
                 threshold=0.0):
        self.mus = np.asarray(mus, dtype=float)
        self.measures = np.asarray(measures, dtype=float)
        self.level_values = tuple(level_values)
        self.cluster_lengths = (np.zeros((len(self.mus), 0)) if cluster_lengths is None
                                else np.asarray(cluster_lengths, dtype=float))
        self.estimates = list(estimates)
        self.grid = grid
        self.threshold = threshold

    def rows(self):
        """Rows of coupling, total measure and per-cluster lengths."""
        for i, mu in enumerate(self.mus):
            yield (mu, self.measures[i]) + tuple(self.cluster_lengths[i])

    def __repr__(self):
        return "SweepResult(mus={}, measures={})".format(self.mus.tolist(), self.measures.tolist())


def max_degree(graph):
    """Largest row sum bound of the Floquet Laplacian."""
    return max(graph.degree(v) for v in graph.vertices)


def separation_threshold(graph, potential, tol=DEFAULT_LEVEL_TOL):
    """Coupling above which the clusters around distinct level values cannot overlap.

    :return: :math:`3 \\max\\deg / \\min_{a \\ne b} |a - b|`, or 0 for a single level set.
    :rtype: :py:class:`float`
    """
    values = [level_set.value for level_set in level_sets(graph, potential, tol)]
    if len(values) < 2:
        return 0.0
    return 3.0 * max_degree(graph) / float(np.diff(values).min())


def cluster_bands(intervals, level_values, mu):
    """Assign each band to the level value :math:`\\mu a` nearest its midpoint; ties go to the smaller value."""
    midpoints = np.asarray(intervals, dtype=float).mean(axis=1)
    targets = mu * np.asarray(level_values, dtype=float)
    return np.argmin(np.abs(midpoints[:, np.newaxis] - targets[np.newaxis, :]), axis=1)


def coupling_sweep(graph, potential, mus=DEFAULT_MUS, grid=None, tol=DEFAULT_LEVEL_TOL, refine=True,
                   rel_tol=MERGE_TOL):
    """Spectral measure of :math:`H_{\\mu Q}` for each coupling of a schedule.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :param potential: Potential values.
    :param mus: Positive, strictly ascending couplings.
    :param grid: Samples per axis.
    :param float tol: Level-set grouping tolerance.
    :param bool refine: Refine band extrema.
    :param float rel_tol: Relative tolerance for joining touching bands, see :func:`~flatpaths.floquet.merge_tolerance`.
    :return: Sweep result.
    :rtype: :class:`~flatpaths.sweep.SweepResult`
    """
    mus = tuple(float(mu) for mu in mus)
    if not mus or any(mu <= 0 for mu in mus) or any(a >= b for a, b in zip(mus[:-1], mus[1:])):
        raise ValueError("Couplings must be positive and strictly ascending, got {}.".format(mus))

    values = [level_set.value for level_set in level_sets(graph, potential, tol)]
    threshold = separation_threshold(graph, potential, tol)

    measures = list()
    lengths = list()
    estimates = list()
    for mu in mus:
        if mu < threshold:
            warnings.warn("Coupling {:.4g} is below the separation threshold {:.4g}; clusters may overlap.".format(
                mu, threshold), ClusterOverlapWarning)
        bands = compute_bands(graph, potential, mu, grid, refine)
        merge_eps = merge_tolerance(bands.intervals, rel_tol)
        estimate = spectrum_measure(bands, merge_eps)
        labels = cluster_bands(bands.intervals, values, mu)
        lengths.append([spectrum_measure(bands.intervals[labels == c], merge_eps).measure
                        for c in range(len(values))])
        measures.append(estimate.measure)
        estimates.append(estimate)
        logger.info("mu=%g measure=%.6g", mu, estimate.measure)

    return SweepResult(mus, measures, values, lengths, estimates, estimates[0].grid, threshold)


def fit_decay(result, floor=MEASURE_FLOOR):
    """Least-squares fit of :math:`\\log \\mathrm{Leb}` against :math:`\\log \\mu`.

    :param result: :class:`~flatpaths.sweep.SweepResult`.
    :param float floor: Measures at or below this value are left out.
    :return: Decay fit.
    :rtype: :class:`~flatpaths.sweep.DecayFit`
    """
    keep = result.measures > floor
    if keep.sum() < 3:
        raise InsufficientDataError("Decay fit needs 3 measures above {:g}, got {}.".format(floor, int(keep.sum())))
    x = np.log(result.mus[keep])
    y = np.log(result.measures[keep])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return DecayFit(float(slope), float(intercept), residual, int(keep.sum()))


def _level_vertices(graph, potential, level, tol):
    if hasattr(level, "vertices"):
        return level.value, tuple(level.vertices)
    values = as_potential(potential, graph)
    vertices = tuple(int(v) for v in np.flatnonzero(np.abs(values - level) <= tol))
    if not vertices:
        raise ValueError("No vertex has potential value {}.".format(level))
    return float(level), vertices


def first_order_coefficients(graph, potential, level, grid=None, tol=DEFAULT_LEVEL_TOL):
    """Eigenvalues :math:`c_r(\\theta)` of the Floquet Laplacian restricted to a level set.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :param potential: Potential values.
    :param level: :class:`~flatpaths.lattice.LevelSet` or level value.
    :param grid: Samples per axis.
    :param float tol: Tolerance used to match a level value.
    :return: Coefficients per grid point, with a flag per branch that is true when the branch is constant.
    :rtype: :class:`~flatpaths.sweep.FirstOrderCoefficients`
    """
    value, vertices = _level_vertices(graph, potential, level, tol)
    fragment = induced_subgraph(graph, vertices)
    bands = _bands(fragment.vertices, fragment.edges, fragment.d, np.zeros(len(fragment.vertices)), grid, False)
    spread = bands.eigenvalues.max(axis=0) - bands.eigenvalues.min(axis=0)
    return FirstOrderCoefficients(value, fragment.vertices, bands.thetas, bands.eigenvalues,
                                  tuple(bool(s <= FLAT_TOL) for s in spread))


def perturbation_check(graph, potential, level, mu, grid=None, tol=DEFAULT_LEVEL_TOL):
    """Compare the eigenvalues of :math:`H_{\\mu Q}(\\theta)` near :math:`\\mu a` with :math:`\\mu a + c_r(\\theta)`.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :param potential: Potential values.
    :param level: :class:`~flatpaths.lattice.LevelSet` or level value.
    :param float mu: Coupling, at least the separation threshold.
    :param grid: Samples per axis.
    :param float tol: Level-set grouping tolerance.
    :return: Largest deviation over the grid, reported with the expected scale :math:`1/\\mu`.
    :rtype: :class:`~flatpaths.sweep.PerturbationReport`
    """
    threshold = separation_threshold(graph, potential, tol)
    if mu < threshold:
        raise ClusterOverlapError("Coupling {:.4g} is below the separation threshold {:.4g}.".format(mu, threshold))

    coefficients = first_order_coefficients(graph, potential, level, grid, tol)
    value = coefficients.value
    size = len(coefficients.vertices)

    diagonal = mu * as_potential(potential, graph)
    eigenvalues = _stack_eigenvalues(_floquet_stack(graph.vertices, graph.edges, graph.d, diagonal,
                                                    coefficients.thetas))
    nearest = np.argsort(np.abs(eigenvalues - mu * value), axis=1, kind="stable")[:, :size]
    cluster = np.sort(np.take_along_axis(eigenvalues, nearest, axis=1), axis=1)
    predicted = mu * value + np.sort(coefficients.coefficients, axis=1)
    return PerturbationReport(value, mu, float(np.abs(cluster - predicted).max()), 1.0 / mu)


def _offset_digraph(graph):
    """Directed graph with the set of arc offsets from ``u`` to ``v`` stored on edge ``(u, v)``."""
    offsets = dict()
    for u, v, offset in graph.arcs:
        offsets.setdefault((u, v), set()).add(offset)
    digraph = nx.DiGraph()
    digraph.add_nodes_from(graph.vertices)
    digraph.add_edges_from((u, v, {"offsets": frozenset(arc_offsets)}) for (u, v), arc_offsets in offsets.items())
    return digraph


def _same_offsets(first, second):
    return first["offsets"] == second["offsets"]


def _box_shapes(nu, d):
    divisors = [k for k in range(1, nu + 1) if nu % k == 0]
    return [shape for shape in itertools.product(divisors, repeat=d) if int(np.prod(shape)) == nu]


def hypercubic_layout(graph):
    """Cell shape and residue of every vertex when ``graph`` is a box cell of the nearest-neighbour lattice.

    Graphs generated as hypercubic lattices carry their layout. Any other graph is
    matched against the generated box cells of the same size by an isomorphism that
    preserves the offsets of every arc.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :return: ``(periods, residues)`` or :py:obj:`None` when the graph is not :math:`\\mathbb{Z}^d`.
    :rtype: :py:class:`tuple`
    """
    if graph.lattice == "hypercubic" and all(base == 0 for base, _ in graph.labels):
        return graph.periods, [residue for _, residue in graph.labels]
    if any(graph.degree(v) != 2 * graph.d for v in graph.vertices):
        return None

    digraph = _offset_digraph(graph)
    for shape in _box_shapes(graph.nu, graph.d):
        box, _ = gen_lattice("hypercubic", graph.d, shape, refine="off")
        matcher = isomorphism.DiGraphMatcher(digraph, _offset_digraph(box), edge_match=_same_offsets)
        if matcher.is_isomorphic():
            logger.debug("Graph %r matches the hypercubic cell %s.", graph.name, shape)
            return shape, [box.labels[matcher.mapping[v]][1] for v in graph.vertices]
    return None


def _free_axes(periods, residues, values, tol):
    """Axes along which the potential is invariant under a unit shift."""
    cells = np.full(periods, np.nan)
    for value, residue in zip(values, residues):
        cells[tuple(residue)] = value
    return [axis for axis in range(len(periods))
            if np.allclose(cells, np.roll(cells, 1, axis=axis), rtol=0.0, atol=tol)]


def separable_lower_bound(graph, potential, tol=DEFAULT_LEVEL_TOL):
    """Lower bound :math:`4mr` on the spectral measure for :math:`\\mathbb{Z}^d` with a potential that is
    constant along ``m`` axes and takes ``r`` distinct values.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph` whose lift is :math:`\\mathbb{Z}^d`.
    :param potential: Potential values.
    :param float tol: Value grouping tolerance.
    :return: Lower bound (0 when no axis is free).
    :rtype: :py:class:`float`
    """
    layout = hypercubic_layout(graph)
    if layout is None:
        raise NotHypercubicError("Graph {!r} is not a nearest-neighbour lattice Z^d.".format(graph.name))
    periods, residues = layout
    free = len(_free_axes(periods, residues, as_potential(potential, graph), tol))
    distinct = len(level_sets(graph, potential, tol))
    return float(4 * free * distinct)


def scaling_check(graph, potential, mu, grid=None):
    """Relative deviation between :math:`\\sigma(H_{\\mu Q})` and :math:`\\mu\\,\\sigma(Q + \\Delta/\\mu)` band edges."""
    direct = compute_bands(graph, potential, mu, grid, refine=False).intervals
    scaled = mu * compute_bands(graph, potential, 1.0, grid, refine=False, hopping=1.0 / mu).intervals
    return float(np.abs(direct - scaled).max() / max(1.0, float(np.abs(direct).max())))


def verify_criterion(graph, potential, mus=DEFAULT_MUS, grid=None, tol=DEFAULT_LEVEL_TOL, refine=True,
                     rel_tol=MERGE_TOL):
    """Check the flat-path verdict against a coupling sweep.

    Decay is confirmed when the fitted slope is at most ``DECAY_SLOPE`` (or every
    measure is already below ``MEASURE_FLOOR``); boundedness when the measure at
    the largest coupling is at least ``BOUNDED_FLOOR`` and, for separable
    potentials on :math:`\\mathbb{Z}^d`, within ``LOWER_BOUND_SLACK`` of the bound.

    :return: Report, sweep, fit, lower bound and consistency flag.
    :rtype: :class:`~flatpaths.sweep.CriterionCheck`
    """
    report = flat_path_report(graph, potential, tol)
    result = coupling_sweep(graph, potential, mus, grid, tol, refine, rel_tol)

    try:
        fit = fit_decay(result)
    except InsufficientDataError:
        fit = None

    try:
        bound = separable_lower_bound(graph, potential, tol)
    except NotHypercubicError:
        bound = None

    final = result.measures[-1]
    if report.decays:
        consistent = (fit.slope <= DECAY_SLOPE) if fit is not None else bool(final <= MEASURE_FLOOR)
    else:
        consistent = bool(final >= BOUNDED_FLOOR)
        if bound:
            consistent = consistent and bool(final >= bound - LOWER_BOUND_SLACK)

    if not consistent:
        logger.warning("Sweep does not confirm the flat-path verdict %r.", report.verdict)
    return CriterionCheck(report, result, fit, bound, consistent)
