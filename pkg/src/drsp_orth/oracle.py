"""Exhaustive ground-truth searches for small instances.

Assignments are enumerated as integers ``0 .. 2**V - 1`` in which variable
``v`` is bit ``V - 1 - v``; increasing integers therefore walk bit tuples
``(x_0, ..., x_{V-1})`` in lexicographic order.  Every check is a parity of
masked bits, evaluated over whole chunks of the search space with numpy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .core_types import SymbolicMatrix, as_symbolic
from .errors import TooLarge
from .gf2 import Gf2System
from .sign_solver import DivisionTable, assign_signs, compute_divisions

DEFAULT_SIGN_LIMIT = 28
DEFAULT_GF2_LIMIT = 20
CHUNK = 1 << 22


@dataclass(frozen=True)
class SignAssignment:
    """One value per couple variable, in variable-index order."""

    bits: tuple[int, ...]

    def as_int(self) -> int:
        return int("".join(map(str, self.bits)) or "0", 2)

    def to_division_json(self, table: DivisionTable) -> list:
        return table.with_solution(self.bits).to_json()


@dataclass
class SignSearch:
    count: int
    witnesses: list[SignAssignment]
    table: DivisionTable
    n_vars: int

    def materialize(self, m, w: SignAssignment) -> SymbolicMatrix:
        return assign_signs(m, self.table, w.bits)


@dataclass
class Gf2Search:
    consistent: bool
    all_solutions: list[tuple[int, ...]]


def _to_mask(vars_, V: int) -> int:
    mask = 0
    for v in vars_:
        mask ^= 1 << (V - 1 - v)
    return mask


def _chunks(V: int) -> Iterator[np.ndarray]:
    total = 1 << V
    for lo in range(0, total, CHUNK):
        yield np.arange(lo, min(total, lo + CHUNK), dtype=np.uint64)


def _filter(xs: np.ndarray, constraints) -> np.ndarray:
    for mask, const in constraints:
        if xs.size == 0:
            break
        par = np.bitwise_count(xs & np.uint64(mask)) & np.uint8(1)
        xs = xs[par == const]
    return xs


def _bits(x: int, V: int) -> tuple[int, ...]:
    return tuple((x >> (V - 1 - v)) & 1 for v in range(V))


def _search(V: int, constraints, max_witnesses: Optional[int]):
    count = 0
    found: list[int] = []
    for xs in _chunks(V):
        xs = _filter(xs, constraints)
        count += int(xs.size)
        if max_witnesses is None:
            found.extend(int(x) for x in xs)
        elif len(found) < max_witnesses:
            found.extend(int(x) for x in xs[: max_witnesses - len(found)])
    return count, found


def sign_constraints(m: SymbolicMatrix, table: DivisionTable) -> list[tuple[int, int]]:
    """Pairwise sign conditions of every column pair as ``(mask, parity)``.

    Column 0 is all positive; the sign bit of row ``r`` in column ``j`` is
    ``x_v`` if ``r`` is the ``hi`` row of its couple ``v`` and ``x_v XOR 1``
    if it is the ``lo`` row.  For rows ``k, l`` exchanged between columns
    ``i`` and ``j`` the four sign bits must XOR to 1.
    """
    N = m.order
    V = table.n_vars
    # sign bit of (row, col) as (variable or None, constant)
    bit = [[(None, 0)] * N for _ in range(N)]
    for jm, d in enumerate(table.divisions):
        for num, c in enumerate(d.couples):
            v = jm * table.half + num
            bit[c.lo][jm + 1] = (v, 1)
            bit[c.hi][jm + 1] = (v, 0)
    pos = np.empty((N, N), dtype=np.int64)
    for c in range(N):
        pos[m.indices[:, c], c] = np.arange(N)
    out = set()
    for i in range(N):
        for j in range(i + 1, N):
            for k in range(N):
                l = int(pos[m.indices[k, i], j])
                if l < k:
                    continue
                mask, const = 0, 1
                for r, c in ((k, i), (k, j), (l, i), (l, j)):
                    v, b = bit[r][c]
                    const ^= b
                    if v is not None:
                        mask ^= 1 << (V - 1 - v)
                if mask == 0:
                    if const:
                        return [(0, 1)]  # unsatisfiable independent of the variables
                    continue
                out.add((mask, const))
    return sorted(out)


def brute_force_signs(m, limit: int = DEFAULT_SIGN_LIMIT, max_witnesses: Optional[int] = None) -> SignSearch:
    """Count couple-value assignments under which every column pair is orthogonal."""
    m = as_symbolic(m)
    if m.is_special:
        m = m.strip_signs()
    table = compute_divisions(m)
    V = table.n_vars
    if V > limit:
        raise TooLarge(f"{V} sign variables exceed the limit of {limit}")
    constraints = sign_constraints(m, table)
    count, found = _search(V, constraints, max_witnesses)
    return SignSearch(count, [SignAssignment(_bits(x, V)) for x in found], table, V)


def brute_force_gf2(sys_: Gf2System, limit: int = DEFAULT_GF2_LIMIT) -> Gf2Search:
    """All solutions of an XOR system by enumerating every assignment."""
    V = sys_.n_vars
    if V > limit:
        raise TooLarge(f"{V} variables exceed the limit of {limit}")
    constraints = []
    for r in range(sys_.n_rows):
        mask = _to_mask(sys_.row_vars(r), V)
        const = sys_.get(r, V)
        if mask == 0:
            if const:
                return Gf2Search(False, [])
            continue
        constraints.append((mask, const))
    _, found = _search(V, constraints, None)
    sols = [_bits(x, V) for x in found]
    return Gf2Search(bool(sols), sols)
