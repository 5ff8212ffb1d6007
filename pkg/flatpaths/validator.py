#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
flatpaths.validator
~~~~~~~~~~~~~~~~~~~

This module contains routines to check that a quotient graph is
admissible: the edge set is symmetric under reversal, there are no
self-loops, and every pair of vertices is joined by at most one offset.
"""

from collections import namedtuple
from datetime import datetime
import io
import sys

import flatpaths
from .lattice import GraphFormatError, RefinementBoundError, minimal_assumption_refinement, MAX_REFINEMENT_FACTOR


Violation = namedtuple("Violation", ["kind", "edge", "message"])

VALIDATION_LOG_HEADER = \
"""Validation Log
{}
flatpaths Python Library Version: {}
Source:        {}
Graph name:    {}
Dimension:     {}
Vertices:      {}
Edges:         {}"""


class ValidationReport(list):
    """List of :class:`~flatpaths.validator.Violation` found in a graph."""

    @property
    def is_admissible(self):
        return not self

    def kinds(self):
        """Set of violation kinds present in the report."""
        return {violation.kind for violation in self}


def validate_symmetry(graph):
    """Find oriented edges whose reverse is missing.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :return: Violations.
    :rtype: :py:class:`list`
    """
    violations = list()
    for u, v, offset in sorted(graph.arcs):
        reverse = (v, u, tuple(-n for n in offset))
        if reverse not in graph.arcs:
            violations.append(Violation(
                "missing_reverse", (u, v, offset),
                "Edge ({}, {}, {}) has no reverse edge ({}, {}, {}).".format(u, v, list(offset), *reverse[:2],
                                                                           list(reverse[2]))
            ))
    return violations


def validate_self_loops(graph):
    """Find self-loops of the quotient graph."""
    return [
        Violation("self_loop", edge, "Vertex {} has a self-loop with offset {}.".format(edge[0], list(edge[2])))
        for edge in graph.edges if edge[0] == edge[1]
    ]


def validate_parallel_edges(graph):
    """Find vertex pairs joined by more than one offset."""
    violations = list()
    offsets = dict()
    for u, v, offset in graph.edges:
        if u != v:
            offsets.setdefault((u, v), []).append(offset)
    for (u, v), pair_offsets in sorted(offsets.items()):
        if len(pair_offsets) > 1:
            violations.append(Violation(
                "multiple_offsets", (u, v, pair_offsets[0]),
                "Vertices {} and {} are joined by {} offsets: {}.".format(
                    u, v, len(pair_offsets), ", ".join(str(list(o)) for o in pair_offsets))
            ))
    return violations


def validate_graph(graph):
    """Check that a quotient graph is admissible.

    :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
    :return: Every violation found; empty when the graph is admissible.
    :rtype: :class:`~flatpaths.validator.ValidationReport`
    """
    report = ValidationReport()
    report.extend(validate_symmetry(graph))
    report.extend(validate_self_loops(graph))
    report.extend(validate_parallel_edges(graph))
    return report


def validate_file(graphfile, verbose=False, bound=MAX_REFINEMENT_FACTOR):
    """Validate a graph file and produce a validation log.

    :param graphfile: Instance of :class:`~flatpaths.graphfile.GraphFile`.
    :param bool verbose: Print the log to stdout instead of returning it.
    :param int bound: Largest refinement factor tried when suggesting a fix.
    :return: Validation report, suggested refinement factors (or :py:obj:`None`) and the log.
    :rtype: :py:class:`tuple`
    """
    if not verbose:
        error_stout = io.StringIO()
    else:
        error_stout = sys.stdout

    graph, _ = graphfile.to_graph()

    print(VALIDATION_LOG_HEADER.format(
        str(datetime.now()),
        flatpaths.__version__,
        graphfile.source,
        graph.name,
        graph.d,
        graph.nu,
        len(graph.edges)
    ), file=error_stout)

    report = validate_graph(graph)
    factors = None
    if report:
        print("Status: Contains Validation Errors", file=error_stout)
        print("Number Errors: {}\n".format(len(report)), file=error_stout)
        print("Error Log:\n" + "\n".join(violation.message for violation in report), file=error_stout)
        try:
            factors = minimal_assumption_refinement(graph, bound)
            print("\nSuggested refinement factors: {}".format(",".join(str(f) for f in factors)), file=error_stout)
        except (RefinementBoundError, GraphFormatError) as e:
            print("\nNo refinement suggested: {}".format(e), file=error_stout)
    else:
        print("Status: Passing", file=error_stout)

    if verbose:
        return report, factors, None
    else:
        return report, factors, error_stout.getvalue()
