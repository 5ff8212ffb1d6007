#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Routines for computing Floquet spectra of periodic discrete Schrödinger
operators on :math:`\\mathbb{Z}^d`-periodic graphs and for deciding, from the
cohomology of the potential's level sets, whether the spectral measure
vanishes at large coupling.

This package includes the following modules:

``lattice``
    This module provides the :class:`~flatpaths.lattice.PeriodicGraph` class that stores
    the quotient data of a periodic graph, together with period refinement, level sets
    of a potential and generators for standard lattices.

``validator``
    This module provides routines to check that quotient graphs are admissible
    (symmetric edges, no self-loops, at most one offset per vertex pair).

``graphfile``
    This module provides the :class:`~flatpaths.graphfile.GraphFile` class which is a python
    dictionary representation of a JSON graph file.

``fileio``
    This module provides the :func:`~flatpaths.fileio.read_files` generator
    to open graph files from different sources (single file, directory of files,
    compressed file).

``fpschema``
    This module provides schema definitions for graph files and for the run
    configuration.

``cohomology``
    This module provides 1-chains, loop sums, cycle bases with integer offsets,
    gauge potentials and the flat-path report.

``floquet``
    This module provides Floquet matrices, band functions and spectral measure estimates.

``sweep``
    This module provides coupling sweeps, decay fits, first-order coefficients and
    the separable lower bound.

``export``
    This module provides csv, JSON and text writers for computed results.

``cli``
    This module provides command-line interface for the ``flatpaths`` package.
"""

from logging import getLogger, NullHandler
from .fileio import read_files
from .lattice import PeriodicGraph, gen_lattice, level_sets, refine_period
from .validator import validate_graph, validate_file


__version__ = "0.1.0"


# Setting default logging handler
getLogger(__name__).addHandler(NullHandler())
