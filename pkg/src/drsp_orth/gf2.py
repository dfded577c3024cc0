"""Bit-packed XOR Gaussian elimination.

Rows of the augmented matrix are packed little-endian into 64-bit words:
column ``j`` lives in word ``j // 64`` at bit ``j % 64``.  The constant
column is the last column.  Trailing bits of the last word are always zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import MalformedSystem

WORD = 64


def _n_words(n_cols: int) -> int:
    return max(1, (n_cols + WORD - 1) // WORD)


class Gf2System:
    """``R x C`` Boolean augmented matrix ``(A | c)``.

    ``n_cols`` counts the constant column, so there are ``n_cols - 1``
    variables.
    """

    __slots__ = ("n_rows", "n_cols", "words")

    def __init__(self, n_rows: int, n_cols: int, words: Optional[np.ndarray] = None):
        if n_cols < 1 or n_rows < 0:
            raise MalformedSystem(f"bad shape {n_rows}x{n_cols}")
        W = _n_words(n_cols)
        if words is None:
            words = np.zeros((n_rows, W), dtype=np.uint64)
        else:
            words = np.array(words, dtype=np.uint64, copy=True).reshape(n_rows, W)
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.words = words

    @property
    def n_vars(self) -> int:
        return self.n_cols - 1

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @classmethod
    def from_dense(cls, bits) -> "Gf2System":
        rows = [list(r) for r in bits]
        if not rows:
            raise MalformedSystem("cannot infer column count of an empty dense system")
        if len({len(r) for r in rows}) != 1:
            raise MalformedSystem("ragged rows")
        a = np.asarray(rows, dtype=np.uint8)
        if np.any(a > 1):
            raise MalformedSystem("entries must be 0 or 1")
        R, C = a.shape
        sys_ = cls(R, C)
        for j in range(C):
            hit = a[:, j].astype(bool)
            sys_.words[hit, j // WORD] |= np.uint64(1) << np.uint64(j % WORD)
        return sys_

    @classmethod
    def from_equations(cls, n_vars: int, equations: Iterable[tuple[Iterable[int], int]]) -> "Gf2System":
        """Build from ``(variables, constant)`` pairs; repeated variables cancel."""
        eqs = list(equations)
        sys_ = cls(len(eqs), n_vars + 1)
        for r, (vars_, const) in enumerate(eqs):
            for v in vars_:
                if not 0 <= v < n_vars:
                    raise MalformedSystem(f"variable {v} out of range")
                sys_.flip(r, v)
            if const & 1:
                sys_.flip(r, n_vars)
        return sys_

    def get(self, r: int, c: int) -> int:
        return int((self.words[r, c // WORD] >> np.uint64(c % WORD)) & np.uint64(1))

    def flip(self, r: int, c: int) -> None:
        self.words[r, c // WORD] ^= np.uint64(1) << np.uint64(c % WORD)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for j in range(self.n_cols):
            out[:, j] = (self.words[:, j // WORD] >> np.uint64(j % WORD)) & np.uint64(1)
        return out

    def row_vars(self, r: int) -> list[int]:
        return [j for j in range(self.n_vars) if self.get(r, j)]

    def copy(self) -> "Gf2System":
        return Gf2System(self.n_rows, self.n_cols, self.words)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gf2System):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __repr__(self) -> str:
        return f"Gf2System({self.n_rows}x{self.n_cols})"


def dump(sys_: Gf2System) -> str:
    """Rows of ``0``/``1`` characters with the constant column after ``|``."""
    dense = sys_.to_dense()
    lines = []
    for row in dense:
        bits = "".join(map(str, row[:-1]))
        lines.append(f"{bits}|{row[-1]}")
    return "\n".join(lines) + ("\n" if lines else "")


def satisfies(sys_: Gf2System, x: Sequence[int]) -> bool:
    """Substitute ``x`` into every equation."""
    dense = sys_.to_dense().astype(np.int64)
    if dense.shape[0] == 0:
        return True
    lhs = dense[:, :-1] @ np.asarray(x, dtype=np.int64) % 2
    return bool(np.all(lhs == dense[:, -1]))


@dataclass
class EliminationResult:
    consistent: bool
    rank_full: int
    rank_coeff: int
    solution: Optional[tuple[int, ...]]
    reduced: Gf2System
    pivots: tuple[int, ...]


def eliminate_and_solve(sys_: Gf2System) -> EliminationResult:
    """Reduce to row-simplest form and extract the special solution.

    Pivots are taken column by column, choosing the first row at or below
    the current rank with a 1.  Unconstrained variables are set to 0 and
    each pivot variable to its reduced row's constant.  Only row swaps and
    row XORs are used, so the solution set is unchanged.
    """
    a = sys_.words.copy()
    R, C = sys_.n_rows, sys_.n_cols
    k = 0
    pivots = []
    for j in range(C):
        if k == R:
            break
        w, b = j // WORD, np.uint64(1) << np.uint64(j % WORD)
        col = (a[k:, w] & b) != 0
        hits = np.flatnonzero(col)
        if hits.size == 0:
            continue
        p = k + int(hits[0])
        if p != k:
            a[[k, p]] = a[[p, k]]
        below = k + 1 + np.flatnonzero((a[k + 1:, w] & b) != 0)
        a[below] ^= a[k]
        pivots.append(j)
        k += 1
    # back substitution: clear every pivot column above its pivot row
    for i in range(k - 1, -1, -1):
        j = pivots[i]
        w, b = j // WORD, np.uint64(1) << np.uint64(j % WORD)
        above = np.flatnonzero((a[:i, w] & b) != 0)
        a[above] ^= a[i]

    reduced = Gf2System(R, C, a)
    rank_full = k
    rank_coeff = sum(1 for j in pivots if j < C - 1)
    consistent = rank_full == rank_coeff
    solution = None
    if consistent:
        x = [0] * (C - 1)
        for i, j in enumerate(pivots):
            x[j] = reduced.get(i, C - 1)
        solution = tuple(x)
        if not satisfies(sys_, solution):
            raise AssertionError("eliminated solution fails substitution check")
    return EliminationResult(consistent, rank_full, rank_coeff, solution, reduced, tuple(pivots))
