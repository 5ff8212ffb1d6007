#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
flatpaths.cohomology
~~~~~~~~~~~~~~~~~~~~

This module provides the graph cohomology used by the flat-path criterion:
antisymmetric edge functions (1-chains), loop sums, a cycle basis of a
quotient subgraph with the integer offset of every basis cycle, and the
gauge potential that trivializes an exact 1-chain.

A level set :math:`V^a` of the potential has no flat path exactly when
every cycle of the induced quotient subgraph has zero offset, i.e. when
the offset 1-chain is exact on that subgraph.
"""

from collections import namedtuple, deque
import logging

import networkx as nx
import numpy as np

from .lattice import canonical_edge, induced_subgraph, level_sets, DEFAULT_LEVEL_TOL


logger = logging.getLogger(__name__)

DEFAULT_CHAIN_TOL = 1e-10

Cycle = namedtuple("Cycle", ["vertices", "arcs", "offset"])
CycleBasis = namedtuple("CycleBasis", ["cycles", "beta0", "beta1", "parent", "roots"])
GaugePotential = namedtuple("GaugePotential", ["vertices", "values"])
LevelSetResult = namedtuple("LevelSetResult", ["level_set", "fragment", "beta0", "beta1", "trivial", "witness"])


class EdgeNotPresentError(KeyError):
    """Raised when a loop uses an edge that is not in the graph."""


class NontrivialClassError(ValueError):
    """Raised when a 1-chain is not exact; carries a cycle with nonzero loop sum."""

    def __init__(self, cycle, loop_sum):
        super(NontrivialClassError, self).__init__(
            "Loop {} has loop sum {:.6g}; the 1-chain is not exact.".format(list(cycle.vertices), loop_sum))
        self.cycle = cycle
        self.loop_sum = loop_sum


class OneChain(object):
    """Antisymmetric function on the oriented edges of a graph or fragment.

    Values are stored per canonical edge; ``chain(u, v, offset)`` returns the value
    on the oriented edge, negated when the orientation is reversed. Values may be
    real (one per edge) or integer vectors (one row per edge).
    """

    def __init__(self, fragment, values):
        self.fragment = fragment
        self.values = np.asarray(values)
        if self.values.shape[:1] != (len(fragment.edges),):
            raise ValueError("Expected {} edge values, got array of shape {}.".format(
                len(fragment.edges), self.values.shape))
        self._index = {edge: i for i, edge in enumerate(fragment.edges)}

    def __call__(self, u, v, offset):
        offset = tuple(int(n) for n in offset)
        key = canonical_edge(u, v, offset)
        try:
            value = self.values[self._index[key]]
        except KeyError:
            raise EdgeNotPresentError("Edge ({}, {}, {}) is not in the graph.".format(u, v, list(offset)))
        return value if key == (u, v, offset) else -value

    def __repr__(self):
        return "OneChain(edges={}, values={})".format(len(self.fragment.edges), self.values.tolist())


def _multigraph(fragment, order=None):
    """Build a :class:`networkx.MultiGraph` keyed by canonical edge index.

    Vertices are inserted in ``order`` and edges in canonical order, so neighbour
    iteration and BFS are deterministic.
    """
    order = tuple(fragment.vertices) if order is None else tuple(order)
    if sorted(order) != sorted(fragment.vertices):
        raise ValueError("Vertex order must be a permutation of the fragment vertices.")
    rank = {v: i for i, v in enumerate(order)}

    graph = nx.MultiGraph()
    graph.add_nodes_from(order)
    for key, (u, v, offset) in sorted(enumerate(fragment.edges),
                                      key=lambda item: (min(rank[item[1][0]], rank[item[1][1]]),
                                                        max(rank[item[1][0]], rank[item[1][1]]), item[0])):
        graph.add_edge(u, v, key=key, offset=offset)
    return graph, order


def _spanning_forest(fragment, order=None):
    """BFS spanning forest of a fragment.

    :return: Multigraph, vertex order, parent arcs, tree edge keys, heights and roots.
    :rtype: :py:class:`tuple`
    """
    graph, order = _multigraph(fragment, order)
    parent = dict()
    heights = dict()
    tree_keys = set()
    roots = list()

    for root in order:
        if root in heights:
            continue
        roots.append(root)
        heights[root] = np.zeros(fragment.d, dtype=int)
        for tail, head in nx.bfs_edges(graph, root):
            key = next(iter(graph[tail][head]))
            u, v, offset = fragment.edges[key]
            offset = np.array(offset, dtype=int) if (u, v) == (tail, head) else -np.array(offset, dtype=int)
            parent[head] = (tail, (tail, head, tuple(int(n) for n in offset)))
            heights[head] = heights[tail] + offset
            tree_keys.add(key)

    return graph, order, parent, tree_keys, heights, roots


def _path_to_root(vertex, parent):
    path = [vertex]
    while path[-1] in parent:
        path.append(parent[path[-1]][0])
    return path


def _reverse_arc(arc):
    return arc[1], arc[0], tuple(-n for n in arc[2])


def _fundamental_cycle(edge, parent):
    """Cycle closed by a non-forest edge ``a -> b`` through the forest paths to their common ancestor."""
    a, b, offset = edge
    if a == b:
        return Cycle((a, a), ((a, a, offset),), tuple(offset))

    up_a = _path_to_root(a, parent)
    up_b = _path_to_root(b, parent)
    on_a = set(up_a)
    ancestor = next(v for v in up_b if v in on_a)

    vertices = [a, b]
    arcs = [(a, b, offset)]
    for v in up_b[:up_b.index(ancestor)]:
        arcs.append(_reverse_arc(parent[v][1]))
        vertices.append(parent[v][0])
    for v in reversed(up_a[:up_a.index(ancestor)]):
        arcs.append(parent[v][1])
        vertices.append(v)

    total = np.sum([arc[2] for arc in arcs], axis=0)
    return Cycle(tuple(vertices), tuple(arcs), tuple(int(n) for n in total))


def betti_numbers(fragment):
    """First two Betti numbers of a quotient subgraph.

    :param fragment: Instance of :class:`~flatpaths.lattice.GraphFragment` or
                     :class:`~flatpaths.lattice.PeriodicGraph`.
    :return: Number of components and cycle rank ``E - V + beta0``.
    :rtype: :py:class:`tuple`
    """
    graph, _ = _multigraph(fragment)
    beta0 = nx.number_connected_components(graph)
    beta1 = len(fragment.edges) - len(fragment.vertices) + beta0
    return beta0, beta1


def cycle_basis(fragment, order=None):
    """Fundamental cycle basis with the integer offset of each cycle.

    The spanning forest is grown by BFS from the lowest vertex of each component
    (in ``order``); every non-forest edge closes one basis cycle.

    :param fragment: Instance of :class:`~flatpaths.lattice.GraphFragment`.
    :param order: Optional vertex order used for roots and traversal.
    :return: Cycle basis.
    :rtype: :class:`~flatpaths.cohomology.CycleBasis`
    """
    _, _, parent, tree_keys, _, roots = _spanning_forest(fragment, order)
    cycles = [_fundamental_cycle(edge, parent)
              for key, edge in enumerate(fragment.edges) if key not in tree_keys]
    beta0 = len(roots)
    return CycleBasis(cycles, beta0, len(cycles), parent, tuple(roots))


def loop_sum(chain, loop):
    """Sum a 1-chain along a closed walk.

    :param chain: Instance of :class:`~flatpaths.cohomology.OneChain`.
    :param loop: A :class:`~flatpaths.cohomology.Cycle` or a closed vertex sequence.
    :return: Loop sum (a vector for vector-valued chains).
    """
    if isinstance(loop, Cycle):
        arcs = loop.arcs
    else:
        arcs = list()
        for tail, head in zip(loop[:-1], loop[1:]):
            candidates = [edge for edge in chain.fragment.edges if {edge[0], edge[1]} == {tail, head}]
            if not candidates:
                raise EdgeNotPresentError("No edge between {} and {}.".format(tail, head))
            if len(candidates) > 1:
                raise ValueError("Vertices {} and {} are joined by {} edges; pass a Cycle instead.".format(
                    tail, head, len(candidates)))
            u, v, offset = candidates[0]
            arcs.append((u, v, offset) if (u, v) == (tail, head) else _reverse_arc((u, v, offset)))

    total = np.zeros(chain.values.shape[1:], dtype=chain.values.dtype)
    for arc in arcs:
        total = total + chain(*arc)
    return total


def offset_chain(fragment):
    """Integer vector-valued 1-chain of edge offsets."""
    return OneChain(fragment, fragment.offsets)


def chain_psi_theta(fragment, theta):
    """Real 1-chain :math:`\\psi_\\theta(e) = \\langle \\sigma(e), \\theta \\rangle`.

    :param fragment: Instance of :class:`~flatpaths.lattice.GraphFragment`.
    :param theta: Quasi-momentum vector.
    :return: 1-chain.
    :rtype: :class:`~flatpaths.cohomology.OneChain`
    """
    theta = np.asarray(theta, dtype=float)
    return OneChain(fragment, fragment.offsets.astype(float) @ theta)


def gradient(fragment, phi):
    """Coboundary of a vertex function: :math:`(\\nabla\\phi)(u, v) = \\phi(v) - \\phi(u)`.

    :param fragment: Instance of :class:`~flatpaths.lattice.GraphFragment`.
    :param phi: :class:`~flatpaths.cohomology.GaugePotential` or mapping from vertex to value.
    :return: 1-chain.
    :rtype: :class:`~flatpaths.cohomology.OneChain`
    """
    if isinstance(phi, GaugePotential):
        phi = dict(zip(phi.vertices, phi.values))
    return OneChain(fragment, [phi[v] - phi[u] for u, v, _ in fragment.edges])


def restrict_chain(chain, vertices):
    """Restrict a 1-chain to the subgraph induced by ``vertices``."""
    fragment = induced_subgraph(chain.fragment, vertices)
    return OneChain(fragment, [chain(*edge) for edge in fragment.edges])


def is_h1_trivial(fragment, order=None):
    """Decide whether every cycle of the fragment has zero offset.

    :param fragment: Instance of :class:`~flatpaths.lattice.GraphFragment`.
    :param order: Optional vertex order used for the spanning forest.
    :return: Verdict and a witness cycle with nonzero offset (or :py:obj:`None`).
    :rtype: :py:class:`tuple`
    """
    for cycle in cycle_basis(fragment, order).cycles:
        if any(cycle.offset):
            return False, cycle
    return True, None


def brute_force_lift_oracle(graph, vertices, radius):
    """Search the lift for a path joining a vertex to a nonzero translate of itself.

    Runs BFS over pairs ``(v, n)`` with ``n`` in the box ``[-radius, radius]^d``,
    using only edges with both endpoints in ``vertices``.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :param vertices: Vertex subset.
    :param int radius: Box radius.
    :return: Whether a translate was reached.
    :rtype: :py:obj:`True` or :py:obj:`False`
    """
    fragment = induced_subgraph(graph, vertices)
    neighbours = {v: [] for v in fragment.vertices}
    for u, v, offset in fragment.arcs:
        neighbours[u].append((v, np.array(offset, dtype=int)))

    origin = np.zeros(fragment.d, dtype=int)
    for start in fragment.vertices:
        seen = {(start, tuple(origin))}
        queue = deque([(start, origin)])
        while queue:
            u, position = queue.popleft()
            for v, offset in neighbours[u]:
                target = position + offset
                if np.any(np.abs(target) > radius):
                    continue
                if v == start and np.any(target):
                    return True
                node = (v, tuple(int(n) for n in target))
                if node not in seen:
                    seen.add(node)
                    queue.append((v, target))
    return False


def solve_gauge(fragment, chain, tol=DEFAULT_CHAIN_TOL):
    """Find :math:`\\phi` with :math:`\\nabla\\phi = \\psi` and :math:`\\phi(root) = 0` on every component.

    :param fragment: Instance of :class:`~flatpaths.lattice.GraphFragment`.
    :param chain: Real-valued 1-chain on ``fragment``.
    :param float tol: Largest residual accepted on non-forest edges.
    :return: Gauge potential.
    :rtype: :class:`~flatpaths.cohomology.GaugePotential`
    """
    _, order, parent, tree_keys, _, roots = _spanning_forest(fragment)
    phi = {root: 0.0 for root in roots}

    pending = [v for v in order if v not in phi]
    while pending:
        for v in list(pending):
            tail, arc = parent[v]
            if tail in phi:
                phi[v] = phi[tail] + float(chain(*arc))
                pending.remove(v)

    for key, edge in enumerate(fragment.edges):
        if key in tree_keys:
            continue
        residual = phi[edge[1]] - phi[edge[0]] - float(chain(*edge))
        if abs(residual) > tol:
            cycle = _fundamental_cycle(edge, parent)
            raise NontrivialClassError(cycle, float(loop_sum(chain, cycle)))

    vertices = tuple(fragment.vertices)
    return GaugePotential(vertices, np.array([phi[v] for v in vertices]))


def witness_check(witness, fragment, thetas):
    """Largest deviation of the witness loop sum of :math:`\\psi_\\theta` from :math:`\\langle k, \\theta \\rangle`."""
    deviation = 0.0
    for theta in np.atleast_2d(thetas):
        expected = float(np.dot(witness.offset, theta))
        deviation = max(deviation, abs(float(loop_sum(chain_psi_theta(fragment, theta), witness)) - expected))
    return deviation


class FlatPathReport(object):
    """Per level-set outcome of the flat-path criterion."""

    def __init__(self, results, tol):
        self.results = results
        self.tol = tol

    @property
    def decays(self):
        """True when every level set has trivial offset class."""
        return all(result.trivial for result in self.results)

    @property
    def verdict(self):
        return "measure -> 0 predicted" if self.decays else "measure bounded below"

    def rows(self):
        """Report rows: value, size, beta0, beta1, trivial flag and witness."""
        for result in self.results:
            yield (
                result.level_set.value,
                len(result.level_set.vertices),
                result.beta0,
                result.beta1,
                result.trivial,
                format_witness(result.witness)
            )

    def to_text(self):
        """Render the report as structured text."""
        lines = ["Flat-path report", "Level-set tolerance: {:.4g}".format(self.tol),
                 "Level sets: {}".format(len(self.results)), ""]
        for value, size, beta0, beta1, trivial, witness in self.rows():
            lines.append("a = {:.12g}  |V^a| = {}  beta0 = {}  beta1 = {}  H1 = {}".format(
                value, size, beta0, beta1, "trivial" if trivial else "nontrivial"))
            if not trivial:
                lines.append("    witness: {}".format(witness))
        lines.extend(["", "Verdict: {}".format(self.verdict)])
        return "\n".join(lines)

    def __repr__(self):
        return "FlatPathReport(level_sets={}, verdict={!r})".format(len(self.results), self.verdict)


def format_witness(witness):
    """Render a witness loop as its vertex sequence, arc offsets and total offset."""
    if witness is None:
        return ""
    arcs = " ".join("{}-{}->{}".format(u, list(offset), v) for u, v, offset in witness.arcs)
    return "{} k={}".format(arcs, list(witness.offset))


def flat_path_report(graph, potential, tol=DEFAULT_LEVEL_TOL):
    """Apply the flat-path criterion to every level set of the potential.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :param potential: Potential values.
    :param float tol: Level-set grouping tolerance.
    :return: Report.
    :rtype: :class:`~flatpaths.cohomology.FlatPathReport`
    """
    results = list()
    for level_set in level_sets(graph, potential, tol):
        fragment = induced_subgraph(graph, level_set.vertices)
        basis = cycle_basis(fragment)
        trivial, witness = is_h1_trivial(fragment)
        results.append(LevelSetResult(level_set, fragment, basis.beta0, basis.beta1, trivial, witness))
        logger.debug("Level set a=%g: |V|=%d beta0=%d beta1=%d trivial=%s",
                     level_set.value, len(level_set.vertices), basis.beta0, basis.beta1, trivial)
    return FlatPathReport(results, tol)
