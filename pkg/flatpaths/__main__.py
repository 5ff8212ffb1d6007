#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import sys

import docopt

from . import cli
from . import __version__
from .cohomology import NontrivialClassError
from .floquet import NumericalContractError
from .fpschema import ConfigError
from .lattice import GraphFormatError, RefinementBoundError, UnknownLatticeError
from .sweep import ClusterOverlapError, InsufficientDataError, NotHypercubicError


def main():

    try:
        args = docopt.docopt(cli.__doc__, version=__version__)
    except docopt.DocoptExit as e:
        print("flatpaths: error: unrecognized command line\n{}".format(e), file=sys.stderr)
        sys.exit(2)

    try:
        status = cli.cli(args)
    except (GraphFormatError, RefinementBoundError, UnknownLatticeError, ConfigError, FileNotFoundError,
            ClusterOverlapError, InsufficientDataError, NotHypercubicError, NontrivialClassError) as e:
        print("flatpaths: error: {}".format(e), file=sys.stderr)
        sys.exit(2)
    except NumericalContractError as e:
        print("flatpaths: numerical failure: {}".format(e), file=sys.stderr)
        sys.exit(3)
    sys.exit(status)


if __name__ == "__main__":
    main()
