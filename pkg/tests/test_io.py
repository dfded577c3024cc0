from __future__ import annotations

import pytest

from drsp_orth import io
from drsp_orth.canonical import feasibility, generate_ordered_type
from drsp_orth.errors import MalformedMatrix


@pytest.mark.parametrize("fmt", ["json", "text"])
def test_round_trip(tmp_path, fmt):
    for m in (generate_ordered_type(3), feasibility(3).witness):
        path = tmp_path / f"m.{fmt}"
        io.write_matrix(m, path, fmt)
        assert io.read_matrix(path) == m
        assert io.loads(io.dumps(m, fmt)) == m


def test_text_without_header():
    m = io.loads("a0 a1\na1 -a0\n")
    assert m.is_special and m.order == 2


@pytest.mark.parametrize(
    "text",
    [
        '{"n": 1, "mode": "semi", "cells": [[1, 2], [1, 1]]}',
        '{"n": 2, "mode": "semi", "cells": [[1, 2], [2, 1]]}',
        '{"n": 1, "mode": "semi", "cells": [[1, -2], [2, 1]]}',
        "a0 b1\na1 a0\n",
        "a0 a1 a2\n",
        "not json {",
    ],
)
def test_malformed(text):
    with pytest.raises(MalformedMatrix):
        io.loads(text)
