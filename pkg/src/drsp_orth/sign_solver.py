"""Turn a semi-orthogonal skeleton into a signed (special) matrix.

Pipeline: extract the division of every column's operator relative to
column 0, compile one XOR equation per 4-tuple per operator pair, eliminate,
and write the signs back.

Variable numbering: couple number ``num`` (position in its division, sorted
by ``lo``) of the operator for column ``m + 1`` is variable ``m * N/2 + num``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core_types import SymbolicMatrix, as_symbolic, validate_semi_orthogonal, validate_special_orthogonal
from .errors import BrokenPath, NotSemiOrthogonal, NotSpecialOrthogonal, SolutionMismatch
from .gf2 import EliminationResult, Gf2System, eliminate_and_solve
from .operators import Couple, Division


class DivisionTable:
    """Divisions of the ``N - 1`` column operators; entry ``m`` is column ``m + 1``."""

    __slots__ = ("divisions", "order")

    def __init__(self, divisions: Sequence[Division], order: int):
        divs = tuple(divisions)
        if len(divs) != order - 1:
            raise ValueError(f"expected {order - 1} divisions, got {len(divs)}")
        seen: set = set()
        for d in divs:
            if d.order != order:
                raise ValueError("division order mismatch")
            pairs = d.pairs()
            if seen & pairs:
                raise NotSemiOrthogonal("two column operators share a couple")
            seen |= pairs
        self.divisions = divs
        self.order = order

    @property
    def half(self) -> int:
        return self.order // 2

    @property
    def n_vars(self) -> int:
        return (self.order - 1) * self.half

    def __getitem__(self, m: int) -> Division:
        return self.divisions[m]

    def __len__(self) -> int:
        return len(self.divisions)

    def variable(self, m: int, row: int) -> int:
        """Column index of the couple holding ``row`` in operator ``m``."""
        return m * self.half + self.divisions[m].serial(row)

    def variable_info(self, v: int) -> tuple[int, int, int]:
        """``(operator, lo, hi)`` of variable ``v``."""
        m, num = divmod(v, self.half)
        c = self.divisions[m].couples[num]
        return m, c.lo, c.hi

    def values(self) -> tuple[Optional[int], ...]:
        return tuple(c.value for d in self.divisions for c in d.couples)

    def with_solution(self, x: Sequence[int]) -> "DivisionTable":
        h = self.half
        return DivisionTable(
            [d.with_values(x[m * h:(m + 1) * h]) for m, d in enumerate(self.divisions)],
            self.order,
        )

    def to_json(self) -> list:
        return [d.to_json() for d in self.divisions]

    def sidecar(self) -> str:
        """One line per variable: ``index operator lo hi``."""
        return "".join(f"{v} {' '.join(map(str, self.variable_info(v)))}\n" for v in range(self.n_vars))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DivisionTable):
            return NotImplemented
        return self.divisions == other.divisions

    def __repr__(self) -> str:
        return f"DivisionTable(order={self.order})"


def compute_divisions(m) -> DivisionTable:
    """Division of each column's operator relative to column 0.

    Column ``j`` is obtained from column 0 by exchanging the rows of each
    couple; row ``i`` of column ``j`` holds the parameter found at row
    ``t = H[index]`` of column 0.  For special matrices the couple value is
    recovered from which of the two rows ends up negated.
    """
    m = as_symbolic(m)
    N = m.order
    idx = m.indices
    sg = m.signs.astype(np.int64)
    H = np.empty(N, dtype=np.int64)
    H[idx[:, 0]] = np.arange(N)
    divisions = []
    for j in range(1, N):
        couples = []
        done = [False] * N
        for i in range(N):
            if done[i]:
                continue
            t = int(H[idx[i, j]])
            if t == i or int(H[idx[t, j]]) != i:
                raise NotSemiOrthogonal(f"column {j}: row {i} has no exchange partner")
            value = None
            if m.is_special:
                rel_i = sg[i, j] * sg[t, 0]
                rel_t = sg[t, j] * sg[i, 0]
                if rel_i == rel_t:
                    raise NotSpecialOrthogonal(f"column {j}: rows {i},{t} are not exchange-and-negate")
                value = 0 if rel_i == -1 else 1
            couples.append(Couple.between(i, t, value))
            done[i] = done[t] = True
        divisions.append(Division(couples, N))
    return DivisionTable(divisions, N)


def trace_equation(T: DivisionTable, a: int, b: int, start: int) -> tuple[tuple[int, ...], int]:
    """Matching equation of the 4-tuple through ``start`` for operators ``a``, ``b``.

    Follows ``i -> j -> k -> l -> i`` alternating couples of ``a`` and ``b``
    and returns ``(sorted variables, constant)``.  The constant starts at 1
    and flips once for every couple walked against its ``lo < hi`` storage.
    """
    A, B = T[a], T[b]
    i = start
    j = A.partner(i)
    k = B.partner(j)
    l = A.partner(k)
    back = B.partner(l)
    if back != i or len({i, j, k, l}) != 4:
        raise BrokenPath(f"operators {a},{b}: path from row {start} does not close into a 4-tuple")
    c = 1
    vars_ = []
    for m, x, y in ((a, i, j), (b, j, k), (a, k, l), (b, l, i)):
        if x > y:
            c ^= 1
        vars_.append(T.variable(m, x))
    return tuple(sorted(vars_)), c


def equation_rows(T: DivisionTable) -> list[tuple[tuple[int, ...], int, tuple[int, int, int]]]:
    """All matching equations as ``(variables, constant, (a, b, start))``."""
    N = T.order
    rows = []
    for a in range(N - 1):
        for b in range(a + 1, N - 1):
            visited: set[int] = set()
            for i in range(N):
                if i in visited:
                    continue
                vars_, c = trace_equation(T, a, b, i)
                rows.append((vars_, c, (a, b, i)))
                A, B = T[a], T[b]
                j = A.partner(i)
                k = B.partner(j)
                visited.update((i, j, k, A.partner(k)))
    return rows


def build_equations(T: DivisionTable) -> Gf2System:
    """Augmented matrix with ``N(N-1)(N-2)/8`` rows and ``N(N-1)/2 + 1`` columns."""
    rows = equation_rows(T)
    N = T.order
    expected = N * (N - 1) * (N - 2) // 8
    if len(rows) != expected:
        raise BrokenPath(f"got {len(rows)} equations, expected {expected}")
    return Gf2System.from_equations(T.n_vars, ((v, c) for v, c, _ in rows))


def assign_signs(m, T: DivisionTable, x: Sequence[int]) -> SymbolicMatrix:
    """Write signs for solution ``x``; column 0 is taken as all positive.

    For couple ``<lo, hi>`` of column ``j`` with value ``v``: row ``lo`` gets
    ``(-1)^(v^1)`` times column 0's row ``hi`` and row ``hi`` gets
    ``(-1)^v`` times column 0's row ``lo``.
    """
    m = as_symbolic(m)
    N = m.order
    if len(x) != T.n_vars:
        raise SolutionMismatch(f"solution has {len(x)} entries, expected {T.n_vars}")
    col0 = m.indices[:, 0]
    idx = np.empty((N, N), dtype=np.int64)
    sg = np.empty((N, N), dtype=np.int8)
    idx[:, 0] = col0
    sg[:, 0] = 1
    for jm, d in enumerate(T.divisions):
        j = jm + 1
        for num, c in enumerate(d.couples):
            v = int(x[jm * T.half + num]) & 1
            idx[c.lo, j] = col0[c.hi]
            sg[c.lo, j] = -1 if v == 0 else 1
            idx[c.hi, j] = col0[c.lo]
            sg[c.hi, j] = -1 if v == 1 else 1
    if not np.array_equal(idx, m.indices):
        raise SolutionMismatch("division table does not match the matrix layout")
    out = SymbolicMatrix.special(idx, sg)
    if not validate_special_orthogonal(out):
        raise SolutionMismatch("assigned signs do not give a special orthogonal matrix")
    return out


@dataclass
class SolveResult:
    found: bool
    matrix: Optional[SymbolicMatrix]
    rank_full: int
    rank_coeff: int
    table: DivisionTable = field(repr=False)
    system: Gf2System = field(repr=False)
    elimination: EliminationResult = field(repr=False)

    @property
    def solution(self) -> Optional[tuple[int, ...]]:
        return self.elimination.solution


def find_solution(m) -> SolveResult:
    """Decide whether a semi-orthogonal matrix has a signed solution and build one.

    Signs on the input, if any, are ignored: the skeleton is solved.
    """
    m = as_symbolic(m)
    if not validate_semi_orthogonal(m):
        raise NotSemiOrthogonal("input matrix is not semi-orthogonal")
    skeleton = m.strip_signs() if m.is_special else m
    T = compute_divisions(skeleton)
    system = build_equations(T)
    res = eliminate_and_solve(system)
    matrix = None
    if res.consistent:
        matrix = assign_signs(skeleton, T, res.solution)
    return SolveResult(res.consistent, matrix, res.rank_full, res.rank_coeff, T, system, res)
