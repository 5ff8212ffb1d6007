#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
flatpaths.fileio
~~~~~~~~~~~~~~~~

This module provides routines for reading graph files
from different kinds of sources:

   * Single JSON graph file on a local machine.
   * Directory containing multiple graph files.
   * gzip or bz2 compressed graph file.
"""

import os
import bz2
import gzip

from . import graphfile


VERBOSE = False

GRAPH_EXTENSIONS = {".json"}


def _generate_filenames(sources):
    """Generate filenames.

    :param tuple sources: Sequence of strings representing path to file(s).
    :return: Path to file(s).
    :rtype: :py:class:`str`
    """
    for source in sources:
        if os.path.isdir(source):
            for path, _, filelist in sorted(os.walk(source)):
                for fname in sorted(filelist):
                    stem = fname
                    if GenericFilePath.is_compressed(fname):
                        stem = os.path.splitext(fname)[0]
                    if os.path.splitext(stem)[1].lower() in GRAPH_EXTENSIONS:
                        yield os.path.join(path, fname)

        elif os.path.isfile(source):
            yield source

        else:
            raise FileNotFoundError("Unknown file source: {}".format(source))


def _generate_handles(filenames):
    """Open a sequence of filenames one at time producing file objects.
    The file is closed immediately when proceeding to the next iteration.

    :param generator filenames: Generator object that yields the path to each file, one at a time.
    :return: Filehandle to be processed into an instance.
    """
    for fname in filenames:
        path = GenericFilePath(fname)
        for filehandle, source in path.open():
            yield filehandle, source
            filehandle.close()


def read_files(*sources):
    """Construct a generator that yields :class:`~flatpaths.graphfile.GraphFile` instances.

    :param sources: One or more strings representing path to file(s).
    """
    filenames = _generate_filenames(sources)
    filehandles = _generate_handles(filenames)
    for fh, source in filehandles:
        try:
            f = graphfile.GraphFile(source)
            f.read(fh)

            if VERBOSE:
                print("Processed file: {}".format(os.path.abspath(source)))

            yield f

        except Exception as e:
            if VERBOSE:
                print("Error processing file: ", os.path.abspath(source), "\nReason:", e)
            raise e


class GenericFilePath(object):
    """`GenericFilePath` class knows how to open plain and compressed local files."""

    def __init__(self, path):
        """Initialize path.

        :param str path: String representing a path to a local file.
        """
        self.path = path

    def open(self):
        """Generator that opens and yields filehandles using appropriate facilities:
        test if the file is compressed or not.

        :return: Filehandle to be processed into an instance.
        """
        compression_type = self.is_compressed(self.path)

        if compression_type == "bz2":
            filehandle = bz2.open(self.path, "rt", encoding="utf-8")
        elif compression_type == "gz":
            filehandle = gzip.open(self.path, "rt", encoding="utf-8")
        else:
            filehandle = open(self.path, "r", encoding="utf-8")

        yield filehandle, self.path
        filehandle.close()

    @staticmethod
    def is_compressed(path):
        """Test if path represents a compressed file.

        :param str path: Path to file.
        :return: String specifying compression type if compressed, "" otherwise.
        :rtype: :py:class:`str`
        """
        if path.endswith(".gz"):
            return "gz"
        elif path.endswith(".bz2"):
            return "bz2"
        return ""
