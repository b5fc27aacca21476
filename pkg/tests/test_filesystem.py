"""Test filesystem module."""
# Import built-in modules
import os

# Import third-party modules
import pytest

# Import local modules
from seedopt.internal.filesystem import ensure_dir
from seedopt.internal.filesystem import read_csv
from seedopt.internal.filesystem import read_file
from seedopt.internal.filesystem import read_json
from seedopt.internal.filesystem import write_binary_file
from seedopt.internal.filesystem import write_csv
from seedopt.internal.filesystem import write_file
from seedopt.internal.filesystem import write_json


def test_write_creates_parent_directories(tmpdir):
    path = os.path.join(str(tmpdir), "nested", "deeper", "out.txt")
    write_file(path, "hello\n")
    assert read_file(path) == "hello\n"


def test_write_leaves_no_temporary_files(tmpdir):
    path = os.path.join(str(tmpdir), "out.txt")
    write_file(path, "first")
    write_file(path, "second")
    assert read_file(path) == "second"
    assert os.listdir(str(tmpdir)) == ["out.txt"]


def test_failed_write_keeps_previous_content(tmpdir, mocker):
    path = os.path.join(str(tmpdir), "out.txt")
    write_file(path, "original")
    mocker.patch("seedopt.internal.filesystem.os.replace", side_effect=OSError("disk full"))
    with pytest.raises(OSError):
        write_file(path, "replacement")
    assert read_file(path) == "original"
    assert os.listdir(str(tmpdir)) == ["out.txt"]


def test_binary_round_trip(tmpdir):
    path = os.path.join(str(tmpdir), "blob.bin")
    write_binary_file(path, b"\x00\x01SEED")
    assert read_file(path, binary=True) == b"\x00\x01SEED"


def test_json_is_sorted(tmpdir):
    path = os.path.join(str(tmpdir), "doc.json")
    write_json(path, {"b": 1, "a": [1, 2]})
    assert read_file(path).index('"a"') < read_file(path).index('"b"')
    assert read_json(path) == {"a": [1, 2], "b": 1}


def test_csv_with_comments(tmpdir):
    path = os.path.join(str(tmpdir), "table.csv")
    write_csv(path, ("generation", "hv"), [(0, 0.1), (1, 1.0 / 3)], comments=["seed=1"])
    text = read_file(path)
    assert text.splitlines()[0] == "# seed=1"
    assert "1,0.3333333333333333" in text
    comments, header, rows = read_csv(path)
    assert comments == ["seed=1"]
    assert header == ["generation", "hv"]
    assert rows == [["0", "0.1"], ["1", "0.3333333333333333"]]


def test_read_empty_csv(tmpdir):
    path = os.path.join(str(tmpdir), "empty.csv")
    write_file(path, "# only a comment\n")
    assert read_csv(path) == (["only a comment"], [], [])


def test_ensure_dir_is_idempotent(tmpdir):
    path = os.path.join(str(tmpdir), "a", "b")
    ensure_dir(path)
    ensure_dir(path)
    assert os.path.isdir(path)
