"""
Plain-text tournament files.

    # optional comment lines
    3
    010
    001
    100

The header is the vertex count; row i, column j is '1' iff i→j. Row order is
the file's ordering, so parse() always returns the identity ordering and
serialize(T, σ) writes vertex σ[i] as row i.
"""

import logging
import re
import sys
from pathlib import Path

import numpy as np

from components.tournament import Ordering, Tournament
from utils.errors import TournamentFileError

logger = logging.getLogger(__name__)


def parse(text):
    """
    Parse a tournament file.

    Args:
        text (str): File contents

    Returns:
        tuple: (Tournament, Ordering) with the identity ordering of the rows

    Raises:
        TournamentFileError: With the 1-based line and column of the first problem
    """
    lines = text.splitlines()
    index = 0
    while index < len(lines) and lines[index].startswith("#"):
        index += 1
    if index == len(lines):
        raise TournamentFileError("missing header line", line=index + 1)
    header = lines[index].strip()
    if not re.fullmatch(r"[0-9]+", header):
        raise TournamentFileError(f"header must be a nonnegative integer, got {header!r}", line=index + 1, column=1)
    n = int(header)
    header_line = index + 1
    rows = lines[index + 1:index + 1 + n]
    if len(rows) < n:
        raise TournamentFileError(f"expected {n} rows, found {len(rows)}", line=header_line + len(rows) + 1)
    for extra, line in enumerate(lines[index + 1 + n:], start=header_line + n + 1):
        if line.strip():
            raise TournamentFileError("unexpected content after the last row", line=extra, column=1)

    adj = np.zeros((n, n), dtype=bool)
    for i, row in enumerate(rows):
        line_no = header_line + i + 1
        row = row.rstrip("\r")
        if len(row) != n:
            raise TournamentFileError(f"row has {len(row)} characters, expected {n}", line=line_no, column=min(len(row), n) + 1)
        for j, char in enumerate(row):
            if char not in "01":
                raise TournamentFileError(f"unexpected character {char!r}", line=line_no, column=j + 1)
            adj[i, j] = char == "1"
        if adj[i, i]:
            raise TournamentFileError(f"diagonal entry for vertex {i} must be 0", line=line_no, column=i + 1)
        for j in range(i):
            if adj[i, j] and adj[j, i]:
                raise TournamentFileError(f"pair {{{j},{i}}} assigned twice", line=line_no, column=j + 1)
            if not adj[i, j] and not adj[j, i]:
                raise TournamentFileError(f"pair {{{j},{i}}} unassigned", line=line_no, column=j + 1)
    return Tournament.from_matrix(adj), Ordering.identity(n)


def serialize(T, ordering=None, comments=()):
    """
    Write T with its rows in the given order.

    Args:
        T (Tournament): Tournament
        ordering (Ordering, optional): Row order, default identity
        comments (iterable of str): Lines written first, each prefixed with '# '

    Returns:
        str: File contents ending in a newline
    """
    seq = range(T.n) if ordering is None else ordering.seq
    lines = [f"# {comment}" for comment in comments]
    lines.append(str(T.n))
    for u in seq:
        lines.append("".join("1" if T.beats(u, v) else "0" for v in seq))
    return "\n".join(lines) + "\n"


def read_tournament(path):
    """
    Load a tournament file, '-' meaning standard input.

    Returns:
        tuple: (Tournament, Ordering)
    """
    if str(path) == "-":
        return parse(sys.stdin.read())
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as e:
        raise TournamentFileError(f"cannot read {file_path}: {e.strerror}")
    except UnicodeDecodeError as e:
        raise TournamentFileError(f"{file_path} is not UTF-8 text (bad byte at offset {e.start})")
    T, ordering = parse(text)
    logger.info("✓ Loaded %d-vertex tournament from %s", T.n, file_path)
    return T, ordering


def write_tournament(path, T, ordering=None, comments=()):
    """Write a tournament file, creating parent directories as needed."""
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(serialize(T, ordering, comments), encoding="utf-8")
    logger.info("✓ Wrote %d-vertex tournament to %s", T.n, file_path)
