#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
The flatpaths command-line interface
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Usage:
    flatpaths -h | --help
    flatpaths --version
    flatpaths validate <path> [--fix] [--out=<path>] [--max-factor=<n>] [--verbose]
    flatpaths flat-paths <path> [--tol-level=<tol>] [--refine=<policy>] [--max-factor=<n>] [--seed=<seed>] [--out=<path>] [--format=<format>] [--verbose]
    flatpaths bands <path> [--mu=<mu>] [--grid=<grid>] [--tol-eig=<tol>] [--refine=<policy>] [--max-factor=<n>] [--no-golden] [--out=<path>] [--verbose]
    flatpaths measure <path> [--mu=<mu>] [--grid=<grid>] [--tol-eig=<tol>] [--refine=<policy>] [--max-factor=<n>] [--no-golden] [--out=<path>] [--format=<format>] [--verbose]
    flatpaths sweep <path> [--mu=<mu>] [--grid=<grid>] [--tol-level=<tol>] [--tol-eig=<tol>] [--refine=<policy>] [--max-factor=<n>] [--no-golden] [--out=<path>] [--format=<format>] [--verbose]
    flatpaths generate (hypercubic | stripe) <d> [--periods=<periods>] [--values=<values>] [--refine=<policy>] [--max-factor=<n>] [--out=<path>] [--verbose]

Options:
    -h, --help                  Show this screen.
    --version                   Show version.
    --verbose                   Print what files are processing and log progress.
    --fix                       Write the graph refined by the suggested factors.
    --out=<path>                Output file; "-" or no value writes to stdout.
    --mu=<mu>                   Coupling: comma-separated list or geometric:lo:hi:steps.
                                Defaults to 1 for bands/measure and geometric:10:1000:5 for sweep.
    --grid=<grid>               Quasi-momentum samples per axis, e.g. 64 or 48,48.
    --tol-level=<tol>           Level-set grouping tolerance [default: 0].
    --tol-eig=<tol>             Relative tolerance for joining touching bands [default: 1e-9].
    --refine=<policy>           Period refinement: auto, off or factors such as 3,3 [default: auto].
    --max-factor=<n>            Largest refinement factor tried per axis [default: 8].
    --no-golden                 Skip refinement of band extrema.
    --seed=<seed>               Seed for randomized consistency checks [default: 0].
    --format=<format>           Output format, available formats: report, csv [default: report].
    --periods=<periods>         Cell size per axis for generated lattices, e.g. 2,1.
    --values=<values>           Stripe potential values, e.g. 0,1.
"""

import logging

import numpy as np

from . import fileio
from .cohomology import flat_path_report, format_witness, witness_check
from .export import write_bands_csv, write_spectrum, write_sweep_csv, write_flat_path_csv, write_text
from .floquet import compute_bands, spectrum_measure, gauge_invariance_check
from .fpschema import ConfigError, run_config
from .graphfile import GraphFile
from .lattice import apply_refinement, gen_lattice, refine_period
from .sweep import DEFAULT_MUS, verify_criterion
from .validator import validate_file


VERBOSE = False

RANDOM_THETAS = 8


def check_dimension(config, d):
    """Check that per-axis options give one entry per axis (``--grid`` may give a single entry).

    :param dict config: Run configuration.
    :param int d: Spatial dimension.
    :return: None
    :rtype: :py:obj:`None`
    """
    if config["refine"] not in ("auto", "off") and len(config["refine"]) != d:
        raise ConfigError("--refine needs {} factors for d = {}, got {}.".format(d, d, len(config["refine"])))
    if config["grid"] and len(config["grid"]) not in (1, d):
        raise ConfigError("--grid needs 1 or {} sample counts for d = {}, got {}.".format(d, d, len(config["grid"])))
    if config.get("periods") and len(config["periods"]) != d:
        raise ConfigError("--periods needs {} entries for d = {}, got {}.".format(d, d, len(config["periods"])))


def load_graph(config):
    """Read the first graph file found at ``config["path"]`` and apply the refinement policy.

    :param dict config: Run configuration.
    :return: Graph and potential.
    :rtype: :py:class:`tuple`
    """
    graph, potential = next(fileio.read_files(config["path"])).to_graph()
    check_dimension(config, graph.d)
    return apply_refinement(graph, potential, config["refine"], config["max_factor"])


def summary(config, **values):
    """Format the run summary: computed values with 4 significant digits, then grid and tolerances."""
    parts = ["{} = {}".format(key, "{:#.4g}".format(value) if isinstance(value, float) else value)
             for key, value in values.items()]
    parts.append("grid = {}".format(",".join(str(n) for n in config["grid"]) if config["grid"] else "default"))
    parts.append("tol-level = {:g}".format(config["tol_level"]))
    parts.append("tol-eig = {:g}".format(config["tol_eig"]))
    return "; ".join(parts)


def _single_mu(config, command):
    mus = config["mu"] or (1.0,)
    if len(mus) != 1:
        raise ConfigError("{} takes a single --mu value, got {}.".format(command, len(mus)))
    return mus[0]


def _require_potential(potential, path):
    if potential is None:
        raise ConfigError("Graph file {} has no potential.".format(path))
    return potential


def cmd_validate(config):
    graphfile = next(fileio.read_files(config["path"]))
    report, factors, log = validate_file(graphfile, verbose=config["verbose"], bound=config["max_factor"])
    if log:
        print(log)
    if report.is_admissible:
        return 0
    if config["fix"] and factors is not None:
        graph, potential = graphfile.to_graph()
        refined, refined_potential = refine_period(graph, potential, factors)
        write_text(config["out"], GraphFile.from_graph(refined, refined_potential).writestr())
        return 0
    return 1


def cmd_flat_paths(config):
    graph, potential = load_graph(config)
    potential = _require_potential(potential, config["path"])
    report = flat_path_report(graph, potential, config["tol_level"])

    if config["format"] == "csv":
        write_flat_path_csv(config["out"], report)
        return 0

    rng = np.random.default_rng(config["seed"])
    thetas = rng.random((RANDOM_THETAS, graph.d))
    lines = [report.to_text(), "", "Randomized checks (seed {}, {} quasi-momenta):".format(config["seed"],
                                                                                            RANDOM_THETAS)]
    for result in report.results:
        value = result.level_set.value
        if result.trivial:
            eigenvalue_deviation, entry_deviation = gauge_invariance_check(graph, result.level_set.vertices, thetas)
            lines.append("a = {:.12g}: gauge eigenvalue deviation {:.3g}, entry deviation {:.3g}".format(
                value, eigenvalue_deviation, entry_deviation))
        else:
            lines.append("a = {:.12g}: witness {} loop-sum deviation {:.3g}".format(
                value, format_witness(result.witness), witness_check(result.witness, result.fragment, thetas)))
    write_text(config["out"], "\n".join(lines))
    return 0


def cmd_bands(config):
    graph, potential = load_graph(config)
    mu = _single_mu(config, "bands")
    bands = compute_bands(graph, potential, mu, config["grid"], config["golden"])
    write_bands_csv(config["out"], bands)
    print(summary(config, mu=mu, bands=bands.num_bands))
    return 0


def cmd_measure(config):
    graph, potential = load_graph(config)
    mu = _single_mu(config, "measure")
    bands = compute_bands(graph, potential, mu, config["grid"], config["golden"])
    estimate = spectrum_measure(bands, rel_tol=config["tol_eig"])
    write_spectrum(config["out"], estimate, config["format"], mu)
    print(summary(config, mu=mu, measure=estimate.measure, components=len(estimate.intervals)))
    return 0


def cmd_sweep(config):
    graph, potential = load_graph(config)
    potential = _require_potential(potential, config["path"])
    mus = config["mu"] or DEFAULT_MUS
    check = verify_criterion(graph, potential, mus, config["grid"], config["tol_level"], config["golden"],
                             config["tol_eig"])

    write_sweep_csv(config["out"], check.sweep, check.fit)
    if config["format"] == "csv":
        return 0
    print("Verdict: {}".format(check.report.verdict))
    if check.fit is not None:
        print(summary(config, slope=check.fit.slope, residual=check.fit.residual))
    else:
        print(summary(config, slope="n/a"))
    print("Sweep {} the verdict.".format("confirms" if check.consistent else "does not confirm"))
    for column, result in enumerate(check.report.results):
        print("Cluster a = {:.12g} ({}): length {:#.4g} at mu = {:#.4g}".format(
            result.level_set.value, "decays" if result.trivial else "bounded",
            check.sweep.cluster_lengths[-1, column], check.sweep.mus[-1]))

    final_mu, final_measure = check.sweep.mus[-1], check.sweep.measures[-1]
    if check.lower_bound is None:
        print("Lower bound 4mr: not applicable; observed measure at mu = {:#.4g}: {:#.4g}".format(
            final_mu, final_measure))
    else:
        print("Lower bound 4mr: {:#.4g}; observed measure at mu = {:#.4g}: {:#.4g}".format(
            check.lower_bound, final_mu, final_measure))
    return 0


def cmd_generate(config, kind):
    if config["d"] is None:
        raise ConfigError("generate needs a dimension <d>.")
    check_dimension(config, config["d"])
    if kind == "stripe" and config["d"] < 2:
        raise ConfigError("generate stripe needs d >= 2, got d = {}.".format(config["d"]))
    if kind == "stripe" and config["periods"] and config["periods"][0] % len(config["values"] or (0.0, 1.0)):
        raise ConfigError("First period {} is not a multiple of the number of stripe values.".format(
            config["periods"][0]))
    graph, potential = gen_lattice(kind, config["d"], config["periods"], config["values"], refine=config["refine"],
                                   bound=config["max_factor"])
    write_text(config["out"], GraphFile.from_graph(graph, potential).writestr())
    return 0


def cli(cmdargs):
    """Implements the command line interface.

    :param dict cmdargs: dictionary of command line arguments.
    :return: Exit status.
    :rtype: :py:class:`int`
    """
    global VERBOSE
    VERBOSE = cmdargs["--verbose"]
    fileio.VERBOSE = cmdargs["--verbose"]
    if VERBOSE:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

    config = run_config(cmdargs)
    config["fix"] = bool(cmdargs.get("--fix"))

    # flatpaths validate ...
    if cmdargs["validate"]:
        return cmd_validate(config)

    # flatpaths flat-paths ...
    elif cmdargs["flat-paths"]:
        return cmd_flat_paths(config)

    # flatpaths bands ...
    elif cmdargs["bands"]:
        return cmd_bands(config)

    # flatpaths measure ...
    elif cmdargs["measure"]:
        return cmd_measure(config)

    # flatpaths sweep ...
    elif cmdargs["sweep"]:
        return cmd_sweep(config)

    # flatpaths generate ...
    elif cmdargs["generate"]:
        return cmd_generate(config, "hypercubic" if cmdargs["hypercubic"] else "stripe")

    return 0
