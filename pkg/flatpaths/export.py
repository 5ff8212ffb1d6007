#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
flatpaths.export
~~~~~~~~~~~~~~~~

This module provides writers for computed results: band tables, spectrum
estimates, coupling sweeps and flat-path reports. Every writer takes a
destination path; ``"-"`` writes to standard output. Numbers are written
with 12 significant digits.
"""

from contextlib import contextmanager
import csv
import json
import os
import sys

import numpy as np


@contextmanager
def _open_output(to_path, extension):
    """Open ``to_path`` for writing, creating parent directories and adding ``extension`` when missing."""
    if to_path in (None, "-"):
        yield sys.stdout
        return

    if not os.path.exists(os.path.dirname(os.path.splitext(to_path)[0])):
        dirname = os.path.dirname(to_path)
        if dirname:
            os.makedirs(dirname)

    if not os.path.splitext(to_path)[1]:
        to_path += extension

    with open(to_path, "w", newline="") as outfile:
        yield outfile


def _number(value):
    return "{:.12g}".format(float(value))


class NumpyEncoder(json.JSONEncoder):
    """NumpyEncoder class for encoding numpy scalars and arrays into json serializable objects."""

    def default(self, obj):
        """Convert numpy arrays to lists and numpy scalars to Python numbers, or call base implementation.

        :param object obj: Python object to be json encoded.
        :return: JSON serializable object.
        """
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, np.generic):
            return obj.item()
        return json.JSONEncoder.default(self, obj)


def write_bands_csv(to_path, bands):
    """Write sampled band functions into csv file.

    Example:
    theta_1,lambda_1,lambda_2,lambda_3
    0,-1,-1,2
    ...

    :param str to_path: Path to output file or ``"-"``.
    :param bands: :class:`~flatpaths.floquet.BandStructure`.
    :return: None
    :rtype: :py:obj:`None`
    """
    d = bands.thetas.shape[1]
    with _open_output(to_path, ".csv") as outfile:
        wr = csv.writer(outfile, lineterminator="\n")
        wr.writerow(["theta_{}".format(i + 1) for i in range(d)] +
                    ["lambda_{}".format(j + 1) for j in range(bands.num_bands)])
        for theta, values in zip(bands.thetas, bands.eigenvalues):
            wr.writerow([_number(t) for t in theta] + [_number(value) for value in values])


def write_spectrum(to_path, estimate, file_format="report", mu=None):
    """Write a spectrum estimate as JSON (``report``) or csv.

    :param str to_path: Path to output file or ``"-"``.
    :param estimate: :class:`~flatpaths.floquet.SpectrumEstimate`.
    :param str file_format: ``report`` or ``csv``.
    :param float mu: Coupling the estimate was computed at.
    :return: None
    :rtype: :py:obj:`None`
    """
    if file_format == "csv":
        with _open_output(to_path, ".csv") as outfile:
            wr = csv.writer(outfile, lineterminator="\n")
            wr.writerow(["lo", "hi"])
            for low, high in estimate.intervals:
                wr.writerow([_number(low), _number(high)])
            outfile.write("# measure: {}\n".format(_number(estimate.measure)))
    else:
        document = {
            "mu": mu,
            "intervals": [[float(_number(low)), float(_number(high))] for low, high in estimate.intervals],
            "measure": float(_number(estimate.measure)),
            "grid": list(estimate.grid) if estimate.grid else None,
            "refinement_depth": estimate.refinement_depth,
        }
        with _open_output(to_path, ".json") as outfile:
            json.dump(document, outfile, indent=4, cls=NumpyEncoder)
            outfile.write("\n")


def write_sweep_csv(to_path, result, fit=None):
    """Write a coupling sweep into csv file; the decay fit is appended as comment lines.

    Example:
    mu,total_measure,cluster_0,cluster_1
    10,0.41,0.2,0.21
    ...
    # slope: -1.02

    :param str to_path: Path to output file or ``"-"``.
    :param result: :class:`~flatpaths.sweep.SweepResult`.
    :param fit: :class:`~flatpaths.sweep.DecayFit` or :py:obj:`None`.
    :return: None
    :rtype: :py:obj:`None`
    """
    with _open_output(to_path, ".csv") as outfile:
        wr = csv.writer(outfile, lineterminator="\n")
        wr.writerow(["mu", "total_measure"] + ["cluster_{}".format(_number(value)) for value in result.level_values])
        for row in result.rows():
            wr.writerow([_number(value) for value in row])
        if fit is not None:
            outfile.write("# slope: {}\n".format(_number(fit.slope)))
            outfile.write("# intercept: {}\n".format(_number(fit.intercept)))
            outfile.write("# residual: {}\n".format(_number(fit.residual)))


def write_flat_path_csv(to_path, report):
    """Write a flat-path report into csv file, one row per level set.

    :param str to_path: Path to output file or ``"-"``.
    :param report: :class:`~flatpaths.cohomology.FlatPathReport`.
    :return: None
    :rtype: :py:obj:`None`
    """
    with _open_output(to_path, ".csv") as outfile:
        wr = csv.writer(outfile, lineterminator="\n")
        wr.writerow(["value", "size", "beta0", "beta1", "h1_trivial", "witness"])
        for value, size, beta0, beta1, trivial, witness in report.rows():
            wr.writerow([_number(value), size, beta0, beta1, int(trivial), witness])


def write_text(to_path, text):
    """Write a text report."""
    with _open_output(to_path, ".txt") as outfile:
        outfile.write(text if text.endswith("\n") else text + "\n")
