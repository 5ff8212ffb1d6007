#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
flatpaths.lattice
~~~~~~~~~~~~~~~~~

This module provides the :class:`~flatpaths.lattice.PeriodicGraph` class that
stores a :math:`\\mathbb{Z}^d`-periodic graph through its quotient data: the
vertices of one fundamental cell and the quotient edges, each carrying the
integer offset vector of the cell its second endpoint lives in.

It also provides routines to refine the period of a graph (so that the quotient
has neither self-loops nor parallel edges), to split the fundamental cell into
level sets of a periodic potential, to restrict a graph to a vertex subset, and
to generate the standard hypercubic and stripe examples.
"""

import itertools
import logging
from collections import namedtuple

import numpy as np


logger = logging.getLogger(__name__)

DEFAULT_LEVEL_TOL = 0.0
MAX_REFINEMENT_FACTOR = 8

LevelSet = namedtuple("LevelSet", ["value", "vertices", "tolerance"])


class GraphFormatError(ValueError):
    """Raised when graph data cannot be turned into a periodic graph."""


class RefinementBoundError(ValueError):
    """Raised when no refinement within the factor bound makes the graph admissible."""

    def __init__(self, message, bound):
        super(RefinementBoundError, self).__init__(message)
        self.bound = bound


class UnknownLatticeError(KeyError):
    """Raised by :func:`gen_lattice` for an unknown lattice kind."""


def canonical_edge(u, v, offset):
    """Orient a quotient edge canonically: lower vertex first, ties broken by the
    lexicographically smaller offset.

    :param int u: Tail vertex.
    :param int v: Head vertex.
    :param offset: Offset vector :math:`\\sigma(u, v)`.
    :return: Canonically oriented edge ``(u, v, offset)``.
    :rtype: :py:class:`tuple`
    """
    offset = tuple(int(n) for n in offset)
    reverse = tuple(-n for n in offset)
    if u < v or (u == v and offset <= reverse):
        return u, v, offset
    return v, u, reverse


class PeriodicGraph(object):
    """Quotient data of a :math:`\\mathbb{Z}^d`-periodic graph.

    ``arcs`` holds every oriented edge ``(u, v, offset)`` exactly as declared (plus
    its reverse when ``symmetrize`` is set); ``edges`` holds one canonically
    oriented representative per unoriented edge. Parallel edges with different
    offsets and self-loops are representable, so that :func:`~flatpaths.validator.validate_graph`
    can report them.
    """

    def __init__(self, d, num_vertices, edges=(), name="", symmetrize=True, periods=None, labels=None,
                 lattice=None):
        """Graph initializer.

        :param int d: Spatial dimension.
        :param int num_vertices: Number of vertices in the fundamental cell.
        :param edges: Iterable of ``(u, v, offset)`` triples.
        :param str name: Optional graph name.
        :param bool symmetrize: Add the reversed edge of every declared edge.
        :param periods: Size of the fundamental cell measured in cells of the generating model.
        :param labels: ``(base_vertex, residue)`` pair per vertex.
        :param str lattice: ``"hypercubic"`` for nearest-neighbour :math:`\\mathbb{Z}^d` models.
        """
        self.d = int(d)
        self.nu = int(num_vertices)
        self.name = name
        if self.d < 1:
            raise GraphFormatError("Dimension d must be at least 1, got {}.".format(d))
        if self.nu < 1:
            raise GraphFormatError("Number of vertices must be at least 1, got {}.".format(num_vertices))

        arcs = set()
        for index, (u, v, offset) in enumerate(edges):
            u, v, offset = int(u), int(v), tuple(int(n) for n in offset)
            if len(offset) != self.d:
                raise GraphFormatError("Edge #{} ({}, {}) has offset {} of length {}, expected d = {}.".format(
                    index, u, v, list(offset), len(offset), self.d))
            if not (0 <= u < self.nu and 0 <= v < self.nu):
                raise GraphFormatError("Edge #{} ({}, {}) references a vertex outside [0, {}).".format(
                    index, u, v, self.nu))
            arcs.add((u, v, offset))
            if symmetrize:
                arcs.add((v, u, tuple(-n for n in offset)))

        self.arcs = frozenset(arcs)
        self.edges = tuple(sorted({canonical_edge(*arc) for arc in arcs}))
        self.periods = tuple(int(p) for p in periods) if periods is not None else (1,) * self.d
        if labels:
            self.labels = tuple((int(base), tuple(int(r) for r in residue)) for base, residue in labels)
        else:
            self.labels = tuple((v, (0,) * self.d) for v in range(self.nu))
        self.lattice = lattice

    @property
    def vertices(self):
        """Vertex identifiers ``0 .. nu - 1``."""
        return tuple(range(self.nu))

    @property
    def offsets(self):
        """Offsets of the canonical edges as an integer array of shape ``(E, d)``."""
        return np.array([edge[2] for edge in self.edges], dtype=int).reshape(len(self.edges), self.d)

    def degree(self, vertex):
        """Number of oriented edges leaving ``vertex`` (a self-loop counts twice).

        :param int vertex: Vertex identifier.
        :return: Degree.
        :rtype: :py:class:`int`
        """
        return sum(1 for arc in self.arcs if arc[0] == vertex)

    def __eq__(self, other):
        return (isinstance(other, PeriodicGraph) and self.d == other.d and self.nu == other.nu
                and self.arcs == other.arcs)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "PeriodicGraph(name={!r}, d={}, nu={}, edges={})".format(self.name, self.d, self.nu, len(self.edges))


class GraphFragment(object):
    """Subgraph of a quotient graph induced by a vertex subset; vertex identifiers
    are those of the parent graph."""

    def __init__(self, d, vertices, edges):
        """Fragment initializer.

        :param int d: Spatial dimension.
        :param vertices: Vertex identifiers of the fragment.
        :param edges: Canonically oriented edges with both endpoints in ``vertices``.
        """
        self.d = d
        self.vertices = tuple(sorted(vertices))
        self.edges = tuple(sorted(edges))

    @property
    def offsets(self):
        """Offsets of the canonical edges as an integer array of shape ``(E, d)``."""
        return np.array([edge[2] for edge in self.edges], dtype=int).reshape(len(self.edges), self.d)

    @property
    def arcs(self):
        """Both orientations of every edge."""
        arcs = set()
        for u, v, offset in self.edges:
            arcs.add((u, v, offset))
            arcs.add((v, u, tuple(-n for n in offset)))
        return frozenset(arcs)

    def __eq__(self, other):
        return (isinstance(other, GraphFragment) and self.d == other.d and self.vertices == other.vertices
                and self.edges == other.edges)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "GraphFragment(d={}, vertices={}, edges={})".format(self.d, self.vertices, len(self.edges))


def as_potential(values, graph):
    """Convert values into a potential on the fundamental cell of ``graph``.

    :param values: One real value per vertex, or :py:obj:`None` for the zero potential.
    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :return: Potential values.
    :rtype: :class:`numpy.ndarray`
    """
    if values is None:
        return np.zeros(graph.nu)
    potential = np.asarray(values, dtype=float)
    if potential.shape != (graph.nu,):
        raise GraphFormatError("Potential has {} values, expected one per vertex ({}).".format(
            potential.size, graph.nu))
    if not np.all(np.isfinite(potential)):
        raise GraphFormatError("Potential contains non-finite values.")
    return potential


def refine_period(graph, potential, factors):
    """View ``graph`` as periodic with respect to the sublattice generated by
    ``factors[i] * e_i``.

    The new vertex ``(v, r)``, with ``r`` a residue vector in ``prod(range(f_i))``, gets
    identifier ``v * prod(factors) + flat(r)`` (C order, last axis fastest).

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :param potential: Potential values or :py:obj:`None`.
    :param factors: Positive integer refinement factor per axis.
    :return: Refined graph and copied potential.
    :rtype: :py:class:`tuple`
    """
    factors = tuple(int(f) for f in factors)
    if len(factors) != graph.d or any(f < 1 for f in factors):
        raise ValueError("Refinement factors {} must be {} integers >= 1.".format(factors, graph.d))

    residues = list(itertools.product(*(range(f) for f in factors)))
    cells = len(residues)
    position = {residue: i for i, residue in enumerate(residues)}

    arcs = []
    for u, v, offset in sorted(graph.arcs):
        for residue in residues:
            shifted = np.add(residue, offset)
            target = tuple(int(x) for x in np.mod(shifted, factors))
            carry = tuple(int(x) for x in np.floor_divide(shifted, factors))
            arcs.append((u * cells + position[residue], v * cells + position[target], carry))

    labels = []
    for base, old_residue in graph.labels:
        for residue in residues:
            labels.append((base, tuple(int(r) for r in np.add(old_residue, np.multiply(graph.periods, residue)))))

    refined = PeriodicGraph(
        graph.d, graph.nu * cells, arcs,
        name=graph.name,
        symmetrize=False,
        periods=np.multiply(graph.periods, factors),
        labels=labels,
        lattice=graph.lattice
    )
    refined_potential = None if potential is None else np.repeat(np.asarray(potential, dtype=float), cells)
    return refined, refined_potential


def _offset_differences(graph):
    """Offset differences that must not vanish modulo the refinement factors."""
    grouped = {}
    for u, v, offset in graph.arcs:
        grouped.setdefault((u, v), set()).add(offset)
    for (u, v), offsets in grouped.items():
        if u == v:
            offsets = offsets | {(0,) * graph.d}
        for first, second in itertools.combinations(sorted(offsets), 2):
            yield np.subtract(first, second)
    for u, v, offset in graph.arcs:
        if u == v and not any(offset):
            yield np.zeros(graph.d, dtype=int)


def minimal_assumption_refinement(graph, bound=MAX_REFINEMENT_FACTOR):
    """Smallest refinement factors that remove all self-loops and parallel edges.

    Refining by ``f`` identifies two edges between the same pair of vertices exactly
    when their offsets agree modulo ``f`` componentwise, and turns a self-loop with
    offset ``n`` into a self-loop exactly when ``n`` vanishes modulo ``f``. Candidates
    are ordered by cell size, then lexicographically.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :param int bound: Largest factor tried per axis.
    :return: Refinement factors.
    :rtype: :py:class:`tuple`
    """
    missing = [arc for arc in graph.arcs if (arc[1], arc[0], tuple(-n for n in arc[2])) not in graph.arcs]
    if missing:
        raise GraphFormatError("Edge set is not symmetric (e.g. {}); refinement cannot repair it.".format(
            sorted(missing)[0]))

    differences = list(_offset_differences(graph))
    candidates = sorted(itertools.product(range(1, bound + 1), repeat=graph.d),
                        key=lambda factors: (int(np.prod(factors)), factors))
    for factors in candidates:
        if all(np.any(np.mod(delta, factors) != 0) for delta in differences):
            return tuple(int(f) for f in factors)

    raise RefinementBoundError(
        "No refinement with factors up to {} per axis makes the graph admissible.".format(bound), bound)


def apply_refinement(graph, potential, policy="auto", bound=MAX_REFINEMENT_FACTOR):
    """Apply a refinement policy to a graph at load time.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :param potential: Potential values or :py:obj:`None`.
    :param policy: ``"auto"``, ``"off"`` or a sequence of factors.
    :param int bound: Largest factor tried per axis by ``"auto"``.
    :return: Possibly refined graph and potential.
    :rtype: :py:class:`tuple`
    """
    if policy == "off":
        return graph, potential
    if policy == "auto":
        factors = minimal_assumption_refinement(graph, bound)
    else:
        factors = tuple(policy)

    if all(f == 1 for f in factors):
        return graph, potential

    refined, refined_potential = refine_period(graph, potential, factors)
    logger.info("Refined period of graph %r by factors %s: %d -> %d vertices.",
                graph.name, factors, graph.nu, refined.nu)
    return refined, refined_potential


def level_sets(graph, potential, tol=DEFAULT_LEVEL_TOL):
    """Partition the fundamental cell into level sets of the potential.

    Values are clustered by single linkage: two vertices belong to the same level
    set when a chain of values with consecutive gaps ``<= tol`` joins them. Level
    sets are returned by ascending value; the value of a level set is the mean of
    its members.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :param potential: Potential values or :py:obj:`None`.
    :param float tol: Grouping tolerance.
    :return: Level sets.
    :rtype: :py:class:`list` of :class:`~flatpaths.lattice.LevelSet`
    """
    if tol < 0:
        raise ValueError("Level-set tolerance must be >= 0, got {}.".format(tol))
    values = as_potential(potential, graph)
    order = np.argsort(values, kind="stable")

    groups = [[int(order[0])]]
    for previous, current in zip(order[:-1], order[1:]):
        if values[current] - values[previous] > tol:
            groups.append([])
        groups[-1].append(int(current))

    return [LevelSet(float(np.mean(values[group])), tuple(sorted(group)), tol) for group in groups]


def induced_subgraph(graph, vertices):
    """Restrict a graph (or fragment) to the edges with both endpoints in ``vertices``.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph` or
                  :class:`~flatpaths.lattice.GraphFragment`.
    :param vertices: Vertex subset.
    :return: Induced fragment.
    :rtype: :class:`~flatpaths.lattice.GraphFragment`
    """
    keep = set(int(v) for v in vertices)
    unknown = keep - set(graph.vertices)
    if unknown:
        raise ValueError("Vertices {} are not in the graph.".format(sorted(unknown)))
    edges = [edge for edge in graph.edges if edge[0] in keep and edge[1] in keep]
    return GraphFragment(graph.d, keep, edges)


def _unit_cell(d):
    """Single-vertex cell of the nearest-neighbour lattice :math:`\\mathbb{Z}^d`."""
    edges = [(0, 0, tuple(int(i == axis) for i in range(d))) for axis in range(d)]
    return PeriodicGraph(d, 1, edges, name="hypercubic-{}d".format(d), lattice="hypercubic")


def gen_lattice(kind, d=1, periods=None, values=None, path=None, refine="auto", bound=MAX_REFINEMENT_FACTOR):
    """Generate a standard periodic graph.

    ``hypercubic`` is :math:`\\mathbb{Z}^d` with a cell of size ``periods`` and no
    potential; ``stripe`` is :math:`\\mathbb{Z}^d` with ``Q(u) = values[u_1 mod len(values)]``,
    constant along every other axis; ``custom-file`` reads the graph file at ``path``.

    :param str kind: ``hypercubic``, ``stripe`` or ``custom-file``.
    :param int d: Spatial dimension.
    :param periods: Cell size per axis before the refinement policy is applied.
    :param values: Stripe values.
    :param str path: Graph file for ``custom-file``.
    :param refine: Refinement policy, see :func:`apply_refinement`.
    :param int bound: Largest factor tried per axis by ``"auto"``.
    :return: Graph and potential (:py:obj:`None` for ``hypercubic``).
    :rtype: :py:class:`tuple`
    """
    if kind == "hypercubic":
        periods = tuple(periods) if periods else (1,) * d
        graph, potential = refine_period(_unit_cell(d), None, periods)

    elif kind == "stripe":
        values = tuple(float(w) for w in values) if values else (0.0, 1.0)
        periods = tuple(periods) if periods else (len(values),) + (1,) * (d - 1)
        if d < 2:
            raise ValueError("Stripe potentials need d >= 2, got d = {}.".format(d))
        if periods[0] % len(values):
            raise ValueError("First period {} is not a multiple of the {} stripe values.".format(
                periods[0], len(values)))
        graph, _ = refine_period(_unit_cell(d), None, periods)
        graph.name = "stripe-{}d".format(d)
        potential = np.array([values[residue[0] % len(values)] for _, residue in graph.labels])

    elif kind == "custom-file":
        from . import fileio
        graphfile = next(fileio.read_files(path))
        graph, potential = graphfile.to_graph()

    else:
        raise UnknownLatticeError("Unknown lattice kind \"{}\".".format(kind))

    return apply_refinement(graph, potential, refine, bound)
