#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Tests for the serialized graph formats."""
# Import built-in modules
import json
import os
import struct

# Import third-party modules
import pytest

# Import local modules
from seedopt.api.graphfile import dumps_graph
from seedopt.api.graphfile import graph_to_json
from seedopt.api.graphfile import load_graph
from seedopt.api.graphfile import loads_graph
from seedopt.api.graphfile import save_graph
from seedopt.constants import GRAPH_JSON_FIELDS
from seedopt.exceptions import DatasetNotFoundError
from seedopt.exceptions import GraphFormatError


@pytest.mark.parametrize("name", ["graph.bin", "graph.json"])
def test_save_and_load(tmpdir, toy10, name):
    path = os.path.join(str(tmpdir), name)
    save_graph(toy10, path)
    loaded = load_graph(path)
    assert loaded == toy10
    assert loaded.fingerprint == toy10.fingerprint
    assert loaded.prob_model == toy10.prob_model
    assert loaded.cost_model == toy10.cost_model


def test_binary_header(toy10):
    data = dumps_graph(toy10)
    magic, version, nodes, arcs, flags = struct.unpack("<IIIII", data[:20])
    assert magic == 0x53454544
    assert version == 1
    assert (nodes, arcs) == (10, 12)
    assert flags == 1


def test_binary_output_is_stable(toy10):
    assert dumps_graph(toy10) == dumps_graph(toy10)


def test_bad_magic(toy10):
    data = bytearray(dumps_graph(toy10))
    data[0:4] = struct.pack("<I", 0xDEADBEEF)
    with pytest.raises(GraphFormatError) as excinfo:
        loads_graph(bytes(data))
    assert "magic" in str(excinfo.value)


def test_truncated_payload(toy10):
    data = dumps_graph(toy10)
    with pytest.raises(GraphFormatError):
        loads_graph(data[:40])
    with pytest.raises(GraphFormatError):
        loads_graph(data[:8])


def test_json_field_order(toy10):
    payload = json.loads(graph_to_json(toy10))
    assert tuple(payload) == GRAPH_JSON_FIELDS


def test_json_wrong_version(tmpdir, toy10):
    payload = json.loads(graph_to_json(toy10))
    payload["version"] = 99
    path = tmpdir.join("graph.json")
    path.write(json.dumps(payload))
    with pytest.raises(GraphFormatError):
        load_graph(str(path))


def test_missing_graph_file(tmpdir):
    with pytest.raises(DatasetNotFoundError):
        load_graph(str(tmpdir.join("none.bin")))
