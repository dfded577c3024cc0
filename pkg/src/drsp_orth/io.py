"""Reading and writing matrix files.

JSON format::

    {"n": 2, "mode": "special", "cells": [[1, 2, 3, 4], ...]}

where a cell ``v`` encodes parameter ``|v| - 1`` with sign ``sign(v)``.

Text format: whitespace separated tokens ``a3`` / ``-a3`` one matrix row
per line, optionally preceded by a ``# n=2 mode=special`` header.  Without
a header the mode is ``special`` iff some token is negative.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Optional, Union

from .core_types import SEMI, SPECIAL, SymbolicMatrix
from .errors import MalformedMatrix

PathLike = Union[str, Path]

_TOKEN = re.compile(r"^([+-]?)a(\d+)$")


def matrix_to_json(m: SymbolicMatrix) -> str:
    return json.dumps({"n": m.n, "mode": m.mode, "cells": m.to_cells()})


def matrix_from_json(text: str) -> SymbolicMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedMatrix(f"invalid JSON: {exc.msg}") from None
    if not isinstance(obj, dict) or not {"n", "mode", "cells"} <= obj.keys():
        raise MalformedMatrix("JSON matrix needs keys n, mode, cells")
    mode = obj["mode"]
    if mode not in (SEMI, SPECIAL):
        raise MalformedMatrix(f"unknown mode {mode!r}")
    cells = obj["cells"]
    if not isinstance(cells, list) or not all(isinstance(r, list) for r in cells):
        raise MalformedMatrix("cells must be a list of rows")
    if any(not isinstance(v, int) or isinstance(v, bool) for r in cells for v in r):
        raise MalformedMatrix("cells must be integers")
    if len({len(r) for r in cells}) > 1:
        raise MalformedMatrix("ragged cells")
    m = SymbolicMatrix.from_cells(cells, mode)
    if m.n != obj["n"]:
        raise MalformedMatrix(f"n={obj['n']} does not match a {m.order}x{m.order} grid")
    return m


def matrix_to_text(m: SymbolicMatrix) -> str:
    return f"# n={m.n} mode={m.mode}\n{m}\n"


def matrix_from_text(text: str) -> SymbolicMatrix:
    mode: Optional[str] = None
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            hit = re.search(r"mode=(\w+)", line)
            if hit:
                mode = hit.group(1)
            continue
        row = []
        for tok in line.split():
            hit = _TOKEN.match(tok)
            if hit is None:
                raise MalformedMatrix(f"bad cell token {tok!r}")
            v = int(hit.group(2)) + 1
            row.append(-v if hit.group(1) == "-" else v)
        rows.append(row)
    if not rows or len({len(r) for r in rows}) > 1:
        raise MalformedMatrix("text matrix is empty or ragged")
    if mode is not None and mode not in (SEMI, SPECIAL):
        raise MalformedMatrix(f"unknown mode {mode!r}")
    return SymbolicMatrix.from_cells(rows, mode)


def loads(text: str) -> SymbolicMatrix:
    """Parse either format, sniffing JSON by a leading ``{``."""
    if text.lstrip().startswith("{"):
        return matrix_from_json(text)
    return matrix_from_text(text)


def dumps(m: SymbolicMatrix, fmt: str = "json") -> str:
    if fmt == "json":
        return matrix_to_json(m) + "\n"
    if fmt == "text":
        return matrix_to_text(m)
    raise ValueError(f"unknown format {fmt!r}")


def read_matrix(path: PathLike) -> SymbolicMatrix:
    return loads(Path(path).read_text())


def write_matrix(m: SymbolicMatrix, path: PathLike, fmt: str = "json") -> None:
    Path(path).write_text(dumps(m, fmt))
