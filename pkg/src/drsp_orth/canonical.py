"""Ordered type, mapping tables and reduction of semi-orthogonal matrices.

The ordered type of order ``N = 2**n`` has parameter index ``r XOR c`` in
cell ``(r, c)``; its column operators are ``i -> i XOR c`` and form an
elementary abelian group generated by ``XOR 1, XOR 2, ..., XOR 2**(n-1)``.
Every semi-orthogonal matrix is a row/column permutation of it, up to a
renaming of parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .core_types import SymbolicMatrix, as_symbolic, order_to_qubits, validate_semi_orthogonal
from .errors import NotCooperative, NotGeneratorSet, NotSemiOrthogonal
from .operators import SignedPermutation, compose, is_matching_operator
from .sign_solver import find_solution

#: Largest qubit count that is decided by actually solving.
SOLVED_UP_TO = 4


def generate_ordered_type(n: int) -> SymbolicMatrix:
    if n < 1:
        raise ValueError("n must be >= 1")
    r = np.arange(2 ** n)
    return SymbolicMatrix.semi(r[:, None] ^ r[None, :])


def column_operators(m) -> list[SignedPermutation]:
    """Sign-free operator ``M_c`` of every column, with ``col_c[r] = col_0[M_c(r)]``."""
    m = as_symbolic(m)
    N = m.order
    H = np.empty(N, dtype=np.int64)
    H[m.indices[:, 0]] = np.arange(N)
    return [SignedPermutation(H[m.indices[:, c]], None, False) for c in range(N)]


def ordered_generators(n: int) -> list[SignedPermutation]:
    N = 2 ** n
    r = np.arange(N)
    return [SignedPermutation(r ^ (1 << m), None, False) for m in range(n)]


def conjugate(op: SignedPermutation, pi: Sequence[int]) -> SignedPermutation:
    """``E M E^T`` for the relabelling ``pi``: maps ``pi[i]`` to ``pi[M(i)]``."""
    perm = [0] * op.order
    for i, j in enumerate(op.perm):
        perm[pi[i]] = pi[j]
    return SignedPermutation(perm, None, False)


# ---------------------------------------------------------------------------
# generator sets and mapping tables
# ---------------------------------------------------------------------------

def _check_generator_set(gens: Sequence[SignedPermutation]) -> int:
    if not gens:
        raise NotGeneratorSet("empty generator set")
    N = gens[0].order
    n = order_to_qubits(N)
    if len(gens) != n:
        raise NotGeneratorSet(f"order {N} needs {n} generators, got {len(gens)}")
    for g in gens:
        if g.order != N:
            raise NotGeneratorSet("generators differ in order")
        if g.signed or not is_matching_operator(g):
            raise NotGeneratorSet("generator is not a sign-free matching operator")
    for a in range(n):
        for b in range(a + 1, n):
            ab = compose(gens[a], gens[b])
            if ab != compose(gens[b], gens[a]) or not is_matching_operator(ab):
                raise NotCooperative(f"generators {a} and {b} are not semi-cooperative")
    # closure: every element must be fixed-point free apart from the identity
    group = {SignedPermutation.identity(N, signed=False)}
    for g in gens:
        grown = group | {compose(g, h) for h in group}
        if len(grown) != 2 * len(group):
            raise NotGeneratorSet("generator lies in the subgroup of the others")
        group = grown
    for h in group:
        if h.perm != tuple(range(N)) and not is_matching_operator(h):
            raise NotGeneratorSet("generated group has a non-identity element with a fixed point")
    return n


@dataclass(frozen=True)
class MappingTable:
    """Permutation ``t`` of ``[N]`` laying out the block structure of a generator set."""

    table: tuple[int, ...]

    def to_json(self) -> list[int]:
        return list(self.table)

    def position(self) -> list[int]:
        pos = [0] * len(self.table)
        for i, v in enumerate(self.table):
            pos[v] = i
        return pos

    def is_mapping_table(self, gens: Sequence[SignedPermutation]) -> bool:
        """For every ``m``, generator ``m`` swaps adjacent aligned blocks of size ``2**(m-1)``."""
        t = self.table
        pos = self.position()
        for m, g in enumerate(gens, start=1):
            b = 1 << (m - 1)
            for a in range(0, len(t), 2 * b):
                left = {t[p] for p in range(a, a + b)}
                right = {t[p] for p in range(a + b, a + 2 * b)}
                if {g.perm[x] for x in left} != right:
                    return False
        return True

    def is_ordered(self, gens: Sequence[SignedPermutation]) -> bool:
        """n-ordered: each generator maps the leftmost element of a block to that of its partner."""
        if not self.is_mapping_table(gens):
            return False
        t = self.table
        for m, g in enumerate(gens, start=1):
            b = 1 << (m - 1)
            for a in range(0, len(t), 2 * b):
                if g.perm[t[a]] != t[a + b]:
                    return False
        return True

    def is_strongly_ordered(self, gens: Sequence[SignedPermutation]) -> bool:
        """Generator ``m`` maps ``t_i`` to ``t_{i XOR 2**(m-1)}`` for every ``i``."""
        t = self.table
        return all(
            g.perm[t[i]] == t[i ^ (1 << m)] for m, g in enumerate(gens) for i in range(len(t))
        )


def order_mapping_table(gens: Sequence[SignedPermutation]) -> MappingTable:
    """Arrange ``[N]`` so that each generator acts by block exchange.

    Level ``m`` first makes the two ``2**(m-1)``-blocks exchanged by
    generator ``m`` adjacent, then, inside each right-hand block, swaps
    halves of sub-blocks (uniformly, largest first) until the image of the
    left block's first element sits first.
    """
    n = _check_generator_set(gens)
    N = 1 << n
    t = list(range(N))
    for m in range(1, n + 1):
        g = gens[m - 1].perm
        b = 1 << (m - 1)
        blocks = [t[a:a + b] for a in range(0, N, b)]
        block_of = {}
        for bi, blk in enumerate(blocks):
            for x in blk:
                block_of[x] = bi
        placed = [False] * len(blocks)
        arranged: list[int] = []
        for bi, blk in enumerate(blocks):
            if placed[bi]:
                continue
            partner = block_of[g[blk[0]]]
            if partner == bi or placed[partner] or {g[x] for x in blk} != set(blocks[partner]):
                raise NotGeneratorSet(f"generator {m} does not exchange whole {b}-blocks")
            arranged.extend(blk)
            arranged.extend(blocks[partner])
            placed[bi] = placed[partner] = True
        t = arranged
        for a in range(0, N, 2 * b):
            j = g[t[a]]
            start = a + b
            k = b
            while k > 1:
                half = k // 2
                if j in t[start + half:start + k]:
                    for y in range(start, start + b, k):
                        t[y:y + k] = t[y + half:y + k] + t[y:y + half]
                k = half
            if t[start] != j:
                raise NotGeneratorSet(f"could not align block at {start} for generator {m}")
    return MappingTable(tuple(t))


# ---------------------------------------------------------------------------
# simplification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Simplification:
    """Row order ``E``, column order ``F`` and parameter renaming reaching the ordered type.

    ``matrix.permuted(row_perm, col_perm).relabeled(relabel)`` equals
    ``generate_ordered_type(n)``: output row ``r`` is input row
    ``row_perm[r]`` and output column ``c`` is input column ``col_perm[c]``.
    """

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    relabel: tuple[int, ...]
    generators: tuple[SignedPermutation, ...]
    table: MappingTable

    def apply(self, m) -> SymbolicMatrix:
        return as_symbolic(m).permuted(self.row_perm, self.col_perm).relabeled(self.relabel)

    def row_matrix(self) -> np.ndarray:
        """Dense ``E`` with ``(E X)[r] = X[row_perm[r]]``."""
        N = len(self.row_perm)
        e = np.zeros((N, N), dtype=np.int64)
        e[np.arange(N), self.row_perm] = 1
        return e

    def col_matrix(self) -> np.ndarray:
        """Dense ``F`` with ``(X F)[:, c] = X[:, col_perm[c]]``."""
        N = len(self.col_perm)
        f = np.zeros((N, N), dtype=np.int64)
        f[self.col_perm, np.arange(N)] = 1
        return f


def _pick_generators(ops: Sequence[SignedPermutation]) -> list[SignedPermutation]:
    """Independent generators, each the column operator sending row 0 to the
    smallest row not yet reachable from row 0."""
    N = len(ops)
    by_image = {op.perm[0]: op for op in ops}
    orbit = {0}
    gens = []
    while len(orbit) < N:
        target = min(set(range(N)) - orbit)
        g = by_image[target]
        gens.append(g)
        orbit |= {g.perm[x] for x in orbit}
    return gens


def simplify_to_ordered(m) -> Simplification:
    """Row and column permutations carrying a semi-orthogonal matrix to the ordered type.

    Rows follow the ordered mapping table of a generator set of the column
    operators; columns are then sorted so that column ``c`` sends row 0 to
    row ``c``.
    """
    m = as_symbolic(m)
    if not validate_semi_orthogonal(m):
        raise NotSemiOrthogonal("input matrix is not semi-orthogonal")
    N = m.order
    ops = column_operators(m)
    gens = _pick_generators(ops)
    table = order_mapping_table(gens)
    t = table.table
    pi = table.position()
    col_perm = [0] * N
    for c, op in enumerate(ops):
        col_perm[pi[op.perm[t[0]]]] = c
    relabel = [0] * N
    for r in range(N):
        relabel[m.indices[t[r], col_perm[0]]] = r
    result = Simplification(tuple(t), tuple(col_perm), tuple(relabel), tuple(gens), table)
    if result.apply(m) != generate_ordered_type(m.n):
        raise NotSemiOrthogonal("reduction did not reach the ordered type")
    return result


# ---------------------------------------------------------------------------
# feasibility
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Feasibility:
    n: int
    feasible: bool
    witness: Optional[SymbolicMatrix]
    rank_full: Optional[int]
    rank_coeff: Optional[int]
    method: str  # "solved" or "nesting"


@lru_cache(maxsize=None)
def _solve_ordered(n: int) -> Feasibility:
    res = find_solution(generate_ordered_type(n))
    return Feasibility(n, res.found, res.matrix, res.rank_full, res.rank_coeff, "solved")


def feasibility(n: int) -> Feasibility:
    """Whether order ``2**n`` special orthogonal matrices exist.

    Up to ``n = 4`` the ordered type is solved directly.  Beyond that the
    answer follows without solving: the upper-left ``16 x 16`` block of a
    larger ordered type is itself the order-16 ordered type, so a solution
    at order ``2**n`` would restrict to one at order 16, which has none.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n <= SOLVED_UP_TO:
        return _solve_ordered(n)
    anchor = _solve_ordered(SOLVED_UP_TO)
    if anchor.feasible:
        raise RuntimeError("order-16 ordered type unexpectedly solvable; nesting shortcut invalid")
    return Feasibility(n, False, None, None, None, "nesting")
