#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Serialized graph format handler.

Binary layout (all little endian)::

    offset  size  field
    0       4     magic number 0x53454544
    4       4     format version (1)
    8       4     node count n
    12      4     arc count m
    16      4     flags (bit 0: directed)
    20      8m    arc sources   (int32 pairs: source, target)
    20+8m   8m    probabilities (float64)
    20+16m  8n    costs         (float64)
    20+16m+8n 8n  original ids  (int64)
    ...     4     length L of the model block
    ...     L     UTF-8 JSON {"prob_model": ..., "cost_model": ...}

The JSON alternative stores the same fields in the fixed order of
``GRAPH_JSON_FIELDS``.
"""
# Import built-in modules
from collections import OrderedDict
import io
import json
import os
import struct

# Import third-party modules
import numpy as np

# Import local modules
from seedopt.api.graph import CostModel
from seedopt.api.graph import Graph
from seedopt.api.graph import ProbabilityModel
from seedopt.constants import GRAPH_FORMAT_VERSION
from seedopt.constants import GRAPH_HEADER_SIZE
from seedopt.constants import GRAPH_JSON_EXTENSION
from seedopt.constants import GRAPH_JSON_FIELDS
from seedopt.constants import GRAPH_MAGIC_NUMBER
from seedopt.exceptions import ConfigError
from seedopt.exceptions import DatasetNotFoundError
from seedopt.exceptions import GraphFormatError
from seedopt.internal.filesystem import read_file
from seedopt.internal.filesystem import write_binary_file
from seedopt.internal.filesystem import write_file


FLAG_DIRECTED = 0x1


def dumps_graph(g):
    """Encode a graph to the binary format.

    Returns:
        bytes: Encoded graph
    """
    output = io.BytesIO()
    flags = FLAG_DIRECTED if g.directed else 0
    output.write(struct.pack("<IIIII", GRAPH_MAGIC_NUMBER, GRAPH_FORMAT_VERSION, g.node_count, g.arc_count, flags))
    arcs = np.empty((g.arc_count, 2), dtype="<i4")
    arcs[:, 0] = g.sources
    arcs[:, 1] = g.targets
    output.write(arcs.tobytes())
    output.write(np.asarray(g.probabilities, dtype="<f8").tobytes())
    output.write(np.asarray(g.costs, dtype="<f8").tobytes())
    output.write(np.asarray(g.original_ids, dtype="<i8").tobytes())
    models = json.dumps({"prob_model": g.prob_model.to_dict(), "cost_model": g.cost_model.to_dict()},
                        sort_keys=True).encode("utf-8")
    output.write(struct.pack("<I", len(models)))
    output.write(models)
    return output.getvalue()


def loads_graph(data, source="<bytes>"):
    """Decode a graph from the binary format.

    Raises:
        GraphFormatError: On a bad magic number, version or truncated payload
    """
    if len(data) < GRAPH_HEADER_SIZE:
        raise GraphFormatError(source, reason="truncated header")
    magic, version, node_count, arc_count, flags = struct.unpack("<IIIII", data[:GRAPH_HEADER_SIZE])
    if magic != GRAPH_MAGIC_NUMBER:
        raise GraphFormatError(source, reason="bad magic number 0x%x" % magic)
    if version != GRAPH_FORMAT_VERSION:
        raise GraphFormatError(source, reason="unsupported version %d" % version)

    offset = GRAPH_HEADER_SIZE

    def take(dtype, count):
        nonlocal offset
        size = np.dtype(dtype).itemsize * count
        if offset + size > len(data):
            raise GraphFormatError(source, reason="truncated payload")
        array = np.frombuffer(data, dtype=dtype, count=count, offset=offset)
        offset += size
        return array

    arcs = take("<i4", 2 * arc_count).reshape(arc_count, 2)
    probabilities = take("<f8", arc_count)
    costs = take("<f8", node_count)
    original_ids = take("<i8", node_count)
    (length,) = take("<u4", 1)
    try:
        models = json.loads(bytes(take("u1", int(length))).decode("utf-8"))
    except ValueError:
        raise GraphFormatError(source, reason="malformed model block")

    try:
        return Graph(node_count, arcs[:, 0], arcs[:, 1], probabilities, costs, original_ids=original_ids,
                     directed=bool(flags & FLAG_DIRECTED),
                     prob_model=ProbabilityModel.from_dict(models["prob_model"]),
                     cost_model=CostModel.from_dict(models["cost_model"]))
    except (KeyError, ValueError, ConfigError) as e:
        raise GraphFormatError(source, reason=str(e))


def graph_to_json(g):
    """Encode a graph as JSON with the documented field order."""
    values = {
        "format": "seedopt-graph",
        "version": GRAPH_FORMAT_VERSION,
        "node_count": g.node_count,
        "directed": g.directed,
        "sources": g.sources.tolist(),
        "targets": g.targets.tolist(),
        "probabilities": g.probabilities.tolist(),
        "costs": g.costs.tolist(),
        "original_ids": g.original_ids.tolist(),
        "prob_model": g.prob_model.to_dict(),
        "cost_model": g.cost_model.to_dict(),
    }
    return json.dumps(OrderedDict((field, values[field]) for field in GRAPH_JSON_FIELDS)) + "\n"


def graph_from_json(text, source="<json>"):
    try:
        payload = json.loads(text)
    except ValueError as e:
        raise GraphFormatError(source, reason=str(e))
    if payload.get("format") != "seedopt-graph":
        raise GraphFormatError(source, reason="not a seedopt graph document")
    if payload.get("version") != GRAPH_FORMAT_VERSION:
        raise GraphFormatError(source, reason="unsupported version %r" % payload.get("version"))
    try:
        return Graph(payload["node_count"], payload["sources"], payload["targets"], payload["probabilities"],
                     payload["costs"], original_ids=payload["original_ids"], directed=payload["directed"],
                     prob_model=ProbabilityModel.from_dict(payload["prob_model"]),
                     cost_model=CostModel.from_dict(payload["cost_model"]))
    except (KeyError, ValueError, ConfigError) as e:
        raise GraphFormatError(source, reason=str(e))


def save_graph(g, path):
    """Save a graph; ``.json`` paths use JSON, anything else the binary format."""
    if path.endswith(GRAPH_JSON_EXTENSION):
        write_file(path, graph_to_json(g))
    else:
        write_binary_file(path, dumps_graph(g))


def load_graph(path):
    """Load a graph written by :func:`save_graph`."""
    if not os.path.isfile(path):
        raise DatasetNotFoundError(path)
    if path.endswith(GRAPH_JSON_EXTENSION):
        return graph_from_json(read_file(path), source=path)
    return loads_graph(read_file(path, binary=True), source=path)
