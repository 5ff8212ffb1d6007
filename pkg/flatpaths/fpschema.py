#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
flatpaths.fpschema
~~~~~~~~~~~~~~~~~~

This module provides schema definitions for graph files and for the run
configuration assembled from command-line options.
"""

import numpy as np
from schema import Schema, Optional, Or, And, Use, SchemaError


class ConfigError(ValueError):
    """Raised for malformed or inconsistent run options."""


offset_schema = Schema([int])

edge_schema = Schema(
    And(
        [Or(int, [int])],
        lambda edge: len(edge) == 3 and isinstance(edge[0], int) and isinstance(edge[1], int)
        and isinstance(edge[2], list),
        error="edge must have the form [u, v, [n_1, ..., n_d]]"
    )
)

label_schema = Schema(
    And([Or(int, [int])], lambda label: len(label) == 2 and isinstance(label[1], list),
        error="label must have the form [base_vertex, [r_1, ..., r_d]]")
)

graph_schema = Schema(
    {
        Optional("name"): str,
        "d": And(int, lambda d: d >= 1, error="d must be an integer >= 1"),
        "num_vertices": And(int, lambda nu: nu >= 1, error="num_vertices must be an integer >= 1"),
        "edges": [edge_schema],
        Optional("potential"): [Or(int, float)],
        Optional("periods"): [And(int, lambda p: p >= 1)],
        Optional("labels"): [label_schema],
        Optional("lattice"): Or(None, str)
    }
)


def parse_int_list(value):
    """Parse ``"3"`` or ``"3,3"`` into a tuple of integers."""
    return tuple(int(item) for item in value.split(","))


def parse_float_list(value):
    """Parse ``"0,1"`` into a tuple of floats."""
    return tuple(float(item) for item in value.split(","))


def parse_mu(value):
    """Parse a coupling schedule.

    :param str value: Comma-separated list or ``geometric:lo:hi:steps``.
    :return: Couplings.
    :rtype: :py:class:`tuple`
    """
    if value.startswith("geometric:"):
        _, low, high, steps = value.split(":")
        return tuple(float(mu) for mu in np.geomspace(float(low), float(high), int(steps)))
    return parse_float_list(value)


def parse_refine(value):
    """Parse a refinement policy: ``auto``, ``off`` or a factor list."""
    if value in ("auto", "off"):
        return value
    return parse_int_list(value)


def _ascending(mus):
    return len(mus) > 0 and all(mu > 0 for mu in mus) and all(a < b for a, b in zip(mus[:-1], mus[1:]))


run_config_schema = Schema(
    {
        "path": Or(None, str),
        "mu": Or(None, And(Use(parse_mu), _ascending,
                           error="--mu must be positive and strictly ascending")),
        "grid": Or(None, And(Use(parse_int_list), lambda grid: all(n >= 2 for n in grid),
                             error="--grid entries must be integers >= 2")),
        "tol_level": And(Use(float), lambda tol: tol >= 0, error="--tol-level must be >= 0"),
        "tol_eig": And(Use(float), lambda tol: tol > 0, error="--tol-eig must be > 0"),
        "refine": And(Use(parse_refine), lambda policy: policy in ("auto", "off") or all(f >= 1 for f in policy),
                      error="--refine must be auto, off or a comma-separated list of factors >= 1"),
        "max_factor": And(Use(int), lambda n: n >= 1, error="--max-factor must be >= 1"),
        "seed": Use(int, error="--seed must be an integer"),
        "format": Or("report", "csv", error="--format must be report or csv"),
        "out": Or(None, str),
        "golden": bool,
        "verbose": bool,
        Optional("periods"): Or(None, And(Use(parse_int_list), lambda periods: all(p >= 1 for p in periods),
                                          error="--periods entries must be integers >= 1")),
        Optional("values"): Or(None, Use(parse_float_list)),
        Optional("d"): Or(None, And(Use(int), lambda d: d >= 1, error="<d> must be an integer >= 1")),
    }
)


def run_config(cmdargs):
    """Build the run configuration from parsed command-line arguments.

    :param dict cmdargs: Command-line arguments as returned by :mod:`docopt`.
    :return: Validated configuration.
    :rtype: :py:class:`dict`
    """
    raw = {
        "path": cmdargs.get("<path>"),
        "mu": cmdargs.get("--mu"),
        "grid": cmdargs.get("--grid"),
        "tol_level": cmdargs.get("--tol-level") or "0",
        "tol_eig": cmdargs.get("--tol-eig") or "1e-9",
        "refine": cmdargs.get("--refine") or "auto",
        "max_factor": cmdargs.get("--max-factor") or "8",
        "seed": cmdargs.get("--seed") or "0",
        "format": cmdargs.get("--format") or "report",
        "out": cmdargs.get("--out"),
        "golden": not cmdargs.get("--no-golden", False),
        "verbose": bool(cmdargs.get("--verbose")),
        "periods": cmdargs.get("--periods"),
        "values": cmdargs.get("--values"),
        "d": cmdargs.get("<d>"),
    }
    try:
        return run_config_schema.validate(raw)
    except SchemaError as e:
        raise ConfigError(e.code)
