"""Symbolic sign-permutation matrices and their orthogonality checks.

A matrix of order ``N = 2**n`` is stored as two ``N x N`` integer grids:
``indices[r, c]`` is the parameter index ``k`` of the cell (the cell holds
``+-a_k``) and ``signs[r, c]`` is ``+1``/``-1`` for a special matrix or ``0``
("unknown") for a semi-orthogonal skeleton.  All indices are 0-based.
"""

from __future__ import annotations

from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import MalformedMatrix, NonUnitParameters

#: Numeric tolerance for unit norm and orthogonality checks.
TOL = 1e-12

SEMI = "semi"
SPECIAL = "special"


class SignedEntry(NamedTuple):
    """One cell: parameter index and sign (``None`` when unknown)."""

    index: int
    sign: Optional[int]

    def __str__(self) -> str:
        return f"{'-' if self.sign == -1 else ''}a{self.index}"


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def order_to_qubits(order: int) -> int:
    """Return ``n`` with ``2**n == order``; raise for anything else."""
    if order < 2 or order & (order - 1):
        raise MalformedMatrix(f"order {order} is not a power of two >= 2")
    return order.bit_length() - 1


class SymbolicMatrix:
    """Immutable N x N grid of signed parameter indices.

    Construct through :meth:`semi`, :meth:`special` or :meth:`from_cells`;
    every constructor checks that each column is a permutation of ``[N]``
    and that signs agree with the mode.
    """

    __slots__ = ("indices", "signs", "mode", "n")

    def __init__(self, indices, signs=None, mode: Optional[str] = None):
        idx = np.array(indices, dtype=np.int64, copy=True)
        if idx.ndim != 2 or idx.shape[0] != idx.shape[1]:
            raise MalformedMatrix(f"expected a square grid, got shape {idx.shape}")
        N = idx.shape[0]
        n = order_to_qubits(N)
        if signs is None:
            sg = np.zeros((N, N), dtype=np.int8)
        else:
            sg = np.array(signs, dtype=np.int8, copy=True)
            if sg.shape != idx.shape:
                raise MalformedMatrix("signs and indices differ in shape")
        if mode is None:
            mode = SEMI if not sg.any() else SPECIAL
        if mode == SEMI:
            if sg.any():
                raise MalformedMatrix("semi matrices carry no signs")
        elif mode == SPECIAL:
            if not np.all(np.abs(sg) == 1):
                raise MalformedMatrix("special matrices need a +-1 sign in every cell")
        else:
            raise MalformedMatrix(f"unknown mode {mode!r}")
        expected = np.arange(N)
        cols = np.sort(idx, axis=0)
        bad = np.flatnonzero(~np.all(cols == expected[:, None], axis=0))
        if bad.size:
            raise MalformedMatrix(
                f"column {int(bad[0])} is not a permutation of [0, {N})"
            )
        self.indices = _readonly(idx)
        self.signs = _readonly(sg)
        self.mode = mode
        self.n = n

    # -- constructors -------------------------------------------------
    @classmethod
    def semi(cls, indices) -> "SymbolicMatrix":
        return cls(indices, None, SEMI)

    @classmethod
    def special(cls, indices, signs) -> "SymbolicMatrix":
        return cls(indices, signs, SPECIAL)

    @classmethod
    def from_cells(cls, cells, mode: Optional[str] = None) -> "SymbolicMatrix":
        """Build from the signed-integer cell encoding ``v = +-(k + 1)``."""
        c = np.asarray(cells, dtype=np.int64)
        if c.ndim != 2:
            raise MalformedMatrix("cells must be a 2-D grid")
        if np.any(c == 0):
            raise MalformedMatrix("cell value 0 is not allowed")
        if mode is None:
            mode = SPECIAL if np.any(c < 0) else SEMI
        if mode == SEMI:
            if np.any(c < 0):
                raise MalformedMatrix("semi mode requires all cells > 0")
            return cls(np.abs(c) - 1, None, SEMI)
        return cls(np.abs(c) - 1, np.sign(c), mode)

    # -- accessors ----------------------------------------------------
    @property
    def order(self) -> int:
        return self.indices.shape[0]

    @property
    def is_special(self) -> bool:
        return self.mode == SPECIAL

    def cell(self, r: int, c: int) -> SignedEntry:
        s = int(self.signs[r, c])
        return SignedEntry(int(self.indices[r, c]), s if s else None)

    def column(self, c: int) -> tuple[SignedEntry, ...]:
        return tuple(self.cell(r, c) for r in range(self.order))

    def to_cells(self) -> list[list[int]]:
        s = self.signs if self.is_special else 1
        return ((self.indices + 1) * s).tolist()

    def strip_signs(self) -> "SymbolicMatrix":
        return SymbolicMatrix.semi(self.indices)

    def permuted(self, rows: Sequence[int], cols: Sequence[int]) -> "SymbolicMatrix":
        """Matrix whose cell ``(r, c)`` is this matrix's ``(rows[r], cols[c])``."""
        rows = np.asarray(rows)
        cols = np.asarray(cols)
        idx = self.indices[np.ix_(rows, cols)]
        sg = self.signs[np.ix_(rows, cols)]
        return SymbolicMatrix(idx, sg if self.is_special else None, self.mode)

    def relabeled(self, mapping: Sequence[int]) -> "SymbolicMatrix":
        """Rename parameter ``k`` to ``mapping[k]`` everywhere."""
        mp = np.asarray(mapping, dtype=np.int64)
        return SymbolicMatrix(mp[self.indices], self.signs if self.is_special else None, self.mode)

    # -- dunder -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolicMatrix):
            return NotImplemented
        return (
            self.mode == other.mode
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.signs, other.signs)
        )

    def __hash__(self) -> int:
        return hash((self.mode, self.indices.tobytes(), self.signs.tobytes()))

    def __repr__(self) -> str:
        return f"SymbolicMatrix(n={self.n}, mode={self.mode!r})"

    def __str__(self) -> str:
        rows = []
        for r in range(self.order):
            rows.append(" ".join(str(self.cell(r, c)) for c in range(self.order)))
        return "\n".join(rows)


def as_symbolic(m, mode: Optional[str] = None) -> SymbolicMatrix:
    """Coerce ``m`` (a SymbolicMatrix or a grid of signed cells) to a SymbolicMatrix."""
    if isinstance(m, SymbolicMatrix):
        return m
    return SymbolicMatrix.from_cells(m, mode)


class ParameterVector:
    """Real parameters ``a_0 .. a_{N-1}`` with unit Euclidean norm."""

    __slots__ = ("values",)

    def __init__(self, values):
        v = np.array(values, dtype=np.float64, copy=True)
        if v.ndim != 1:
            raise NonUnitParameters("parameters must be a flat vector")
        norm2 = float(v @ v)
        if abs(norm2 - 1.0) > TOL:
            raise NonUnitParameters(f"sum of squares is {norm2!r}, expected 1")
        self.values = _readonly(v)

    @classmethod
    def random(cls, size: int, rng: Optional[np.random.Generator] = None) -> "ParameterVector":
        rng = np.random.default_rng() if rng is None else rng
        v = rng.standard_normal(size)
        v /= np.linalg.norm(v)
        # one renormalisation pass is not always enough to land within TOL
        v /= np.sqrt(v @ v)
        return cls(v)

    def __len__(self) -> int:
        return self.values.shape[0]


# ---------------------------------------------------------------------------
# orthogonality checks
# ---------------------------------------------------------------------------

def _positions(m: SymbolicMatrix) -> np.ndarray:
    """``pos[k, c]`` is the row of column ``c`` that holds parameter ``k``."""
    N = m.order
    pos = np.empty((N, N), dtype=np.int64)
    cols = np.broadcast_to(np.arange(N), (N, N))
    pos[m.indices, cols] = np.arange(N)[:, None]
    return pos


def exchange_partners(m: SymbolicMatrix, i: int, j: int, pos=None) -> Optional[np.ndarray]:
    """Rows paired by the 2-tuple exchange between columns ``i`` and ``j``.

    Returns ``partner`` with ``partner[k] = l`` when rows ``k`` and ``l``
    swap their entries between the two columns, or ``None`` when no such
    pairing exists.
    """
    if pos is None:
        pos = _positions(m)
    idx = m.indices
    k = np.arange(m.order)
    partner = pos[idx[:, i], j]
    if np.any(partner == k):
        return None
    if not np.array_equal(idx[partner, i], idx[:, j]):
        return None
    return partner


def validate_semi_orthogonal(m) -> bool:
    """True iff every column pair decomposes into exactly swapped 2-tuples.

    Signs, if present, are ignored.  Raises :class:`MalformedMatrix` when a
    column is not a permutation.
    """
    m = as_symbolic(m)
    pos = _positions(m)
    N = m.order
    for i in range(N):
        for j in range(i + 1, N):
            if exchange_partners(m, i, j, pos) is None:
                return False
    return True


def validate_special_orthogonal(m) -> bool:
    """True iff each column pair is an exchange-and-negate of the other.

    For paired rows ``(k, l)`` of columns ``(i, j)`` the sign bits must obey
    ``s_ki s_kj = -s_li s_lj``; together with the exchange structure this is
    exactly symbolic orthogonality of the two columns.
    """
    m = as_symbolic(m)
    if not m.is_special:
        raise MalformedMatrix("validate_special_orthogonal needs a special-mode matrix")
    pos = _positions(m)
    s = m.signs.astype(np.int64)
    N = m.order
    for i in range(N):
        for j in range(i + 1, N):
            partner = exchange_partners(m, i, j, pos)
            if partner is None:
                return False
            prod = s[:, i] * s[:, j]
            if not np.all(prod == -prod[partner]):
                return False
    return True


def instantiate_numeric(m, p) -> np.ndarray:
    """Numeric matrix with entry ``sign * p[index]``."""
    m = as_symbolic(m)
    if not m.is_special:
        raise MalformedMatrix("only special-mode matrices can be instantiated")
    if not isinstance(p, ParameterVector):
        p = ParameterVector(p)
    if len(p) != m.order:
        raise MalformedMatrix(f"need {m.order} parameters, got {len(p)}")
    return m.signs * p.values[m.indices]


def orthogonality_residual(g: np.ndarray) -> float:
    """``max |G^H G - I|`` for a numeric square matrix."""
    g = np.asarray(g)
    return float(np.max(np.abs(g.conj().T @ g - np.eye(g.shape[1]))))
