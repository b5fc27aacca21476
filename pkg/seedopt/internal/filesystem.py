"""File system utilities for seedopt.

All writers go through a temporary sibling file followed by ``os.replace`` so an
interrupted experiment never leaves a half-written result behind.
"""
# Import built-in modules
import csv
import io
import json
import os
import tempfile


def read_file(file_path, encoding="utf-8", binary=False):
    """Read file content with proper encoding handling.

    Args:
        file_path: Path to the file
        encoding: File encoding (default: 'utf-8')
        binary: If True, read file in binary mode (default: False)

    Returns:
        str or bytes: File content
    """
    if binary:
        with open(file_path, "rb") as f:
            return f.read()
    with io.open(file_path, "r", encoding=encoding) as f:
        return f.read()


def ensure_dir(path):
    """Ensure directory exists, create it if it doesn't exist."""
    if path and not os.path.isdir(path):
        os.makedirs(path, exist_ok=True)


def _atomic_write(file_path, data, binary):
    directory = os.path.dirname(os.path.abspath(file_path))
    ensure_dir(directory)
    fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        if binary:
            with os.fdopen(fd, "wb") as f:
                f.write(data)
        else:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                f.write(data)
        os.replace(tmp_path, file_path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def write_file(file_path, content):
    """Atomically write text content to a file.

    Args:
        file_path: Path to the file
        content: Text to write
    """
    _atomic_write(file_path, content, binary=False)


def write_binary_file(file_path, content):
    """Atomically write binary content to a file.

    Args:
        file_path: Path to the file
        content: Bytes to write
    """
    _atomic_write(file_path, content, binary=True)


def write_json(file_path, payload):
    """Atomically write a JSON document with sorted, stable formatting."""
    write_file(file_path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(file_path):
    return json.loads(read_file(file_path))


def write_csv(file_path, header, rows, comments=None):
    """Atomically write a CSV file.

    Args:
        file_path: Path to the file
        header: Column names
        rows: Iterable of row sequences
        comments: Optional lines written first, each prefixed with '# '
    """
    buffer = io.StringIO()
    for line in comments or []:
        buffer.write("# %s\n" % line)
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_cell(value) for value in row])
    write_file(file_path, buffer.getvalue())


def read_csv(file_path):
    """Read a CSV file written by :func:`write_csv`.

    Returns:
        tuple: (comments, header, rows) with rows as lists of strings
    """
    comments = []
    lines = []
    for line in read_file(file_path).splitlines():
        if line.startswith("#"):
            comments.append(line[1:].strip())
        elif line.strip():
            lines.append(line)
    reader = csv.reader(lines)
    rows = list(reader)
    if not rows:
        return comments, [], []
    return comments, rows[0], rows[1:]


def _format_cell(value):
    # repr keeps floats round-trippable and byte-stable across runs
    if isinstance(value, float):
        return repr(float(value))
    return str(value)
