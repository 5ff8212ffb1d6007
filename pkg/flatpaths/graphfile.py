#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
flatpaths.graphfile
~~~~~~~~~~~~~~~~~~~

This module provides the :class:`~flatpaths.graphfile.GraphFile` class
that stores the data from a single JSON graph file in the form of
:py:class:`collections.OrderedDict`. A graph file holds the quotient
data of a periodic graph and, optionally, a periodic potential::

    {
        "name": "z1-period-3",
        "d": 1,
        "num_vertices": 3,
        "edges": [[0, 1, [0]], [1, 2, [0]], [2, 0, [1]]],
        "potential": [0.0, 0.0, 0.0]
    }

Each edge is listed once; its reverse is implied.
"""

from collections import OrderedDict
import json

from schema import SchemaError

from .fpschema import graph_schema
from .lattice import PeriodicGraph, GraphFormatError, as_potential


class GraphFile(OrderedDict):
    """GraphFile class that stores data from a single graph file in
    the form of :py:class:`collections.OrderedDict`.
    """

    def __init__(self, source, *args, **kwds):
        """File initializer.

        :param str source: Source a `GraphFile` instance was created from.
        """
        super(GraphFile, self).__init__(*args, **kwds)
        self.source = source

    def read(self, filehandle):
        """Read data into a :class:`~flatpaths.graphfile.GraphFile` instance.

        :param filehandle: file-like object.
        :type filehandle: :py:class:`io.TextIOWrapper`, :py:class:`gzip.GzipFile`,
                          :py:class:`bz2.BZ2File`
        :return: None
        :rtype: :py:obj:`None`
        """
        input_str = filehandle.read()

        if not input_str:
            raise GraphFormatError("Blank input string retrieved from source {}.".format(self.source))

        json_obj = self._is_json(input_str)
        if json_obj is False:
            raise GraphFormatError("Unknown file format: {}.".format(self.source))

        try:
            self.update(graph_schema.validate(json_obj))
        except SchemaError as e:
            raise GraphFormatError("{}: {}".format(self.source, e.code))

        filehandle.close()

    def write(self, filehandle):
        """Write :class:`~flatpaths.graphfile.GraphFile` data into file.

        :param filehandle: file-like object.
        :type filehandle: :py:class:`io.TextIOWrapper`
        :return: None
        :rtype: :py:obj:`None`
        """
        try:
            filehandle.write(self.writestr())
        except IOError:
            raise IOError('"filehandle" parameter must be writable.')
        filehandle.close()

    def writestr(self):
        """Write :class:`~flatpaths.graphfile.GraphFile` data into a JSON string.

        Edges are written one per line.

        :return: String representing the :class:`~flatpaths.graphfile.GraphFile` instance.
        :rtype: :py:class:`str`
        """
        lines = ["{"]
        items = list(self.items())
        for position, (key, value) in enumerate(items):
            separator = "," if position < len(items) - 1 else ""
            if key in ("edges", "labels") and value:
                rows = ",\n".join("        " + json.dumps(row) for row in value)
                lines.append("    {}: [\n{}\n    ]{}".format(json.dumps(key), rows, separator))
            else:
                lines.append("    {}: {}{}".format(json.dumps(key), json.dumps(value), separator))
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_graph(self):
        """Build the periodic graph and potential stored in the file.

        :return: Graph and potential (:py:obj:`None` when the file has none).
        :rtype: :py:class:`tuple`
        """
        graph = PeriodicGraph(
            self["d"],
            self["num_vertices"],
            [(u, v, offset) for u, v, offset in self["edges"]],
            name=self.get("name", ""),
            periods=self.get("periods"),
            labels=self.get("labels"),
            lattice=self.get("lattice")
        )
        potential = self.get("potential")
        if potential is not None:
            potential = as_potential(potential, graph)
        return graph, potential

    @classmethod
    def from_graph(cls, graph, potential=None, source=""):
        """Create a :class:`~flatpaths.graphfile.GraphFile` from a periodic graph.

        :param graph: Instance of :class:`~flatpaths.lattice.PeriodicGraph`.
        :param potential: Potential values or :py:obj:`None`.
        :param str source: Source recorded on the new instance.
        :return: Graph file.
        :rtype: :class:`~flatpaths.graphfile.GraphFile`
        """
        graphfile = cls(source)
        graphfile["name"] = graph.name
        graphfile["d"] = graph.d
        graphfile["num_vertices"] = graph.nu
        graphfile["edges"] = [[u, v, list(offset)] for u, v, offset in graph.edges]
        if potential is not None:
            graphfile["potential"] = [float(value) for value in potential]
        graphfile["periods"] = list(graph.periods)
        graphfile["labels"] = [[base, list(residue)] for base, residue in graph.labels]
        if graph.lattice:
            graphfile["lattice"] = graph.lattice
        return graphfile

    @staticmethod
    def _is_json(string):
        """Test if input string is in JSON format.

        :param string: Input string.
        :type string: :py:class:`str` or :py:class:`bytes`
        :return: Parsed JSON object.
        :rtype: :py:class:`collections.OrderedDict` or :py:obj:`False`
        """
        if isinstance(string, bytes):
            string = string.decode("utf-8")
        elif not isinstance(string, str):
            raise TypeError("Expecting <class 'str'> or <class 'bytes'>, but {} was passed".format(type(string)))

        if not string.lstrip().startswith("{"):
            return False
        try:
            return json.loads(string, object_pairs_hook=OrderedDict)
        except json.JSONDecodeError as e:
            raise GraphFormatError("JSON parse error at line {}, column {}: {}".format(e.lineno, e.colno, e.msg))
