"""Couples, divisions and (semi-)matching operators.

A scattered matrix (one +-1 per row and column) is kept as a pair
``(perm, signs)`` meaning ``(X v)[i] = signs[i] * v[perm[i]]``, i.e. the
nonzero of row ``i`` sits in column ``perm[i]``.  Dense grids exist only
through :meth:`SignedPermutation.dense` for tests and debugging.

A couple ``<lo, hi>`` exchanges two rows and negates one of them; value 0
negates row ``lo`` after the exchange, value 1 negates row ``hi``.  Viewed
from the other end, ``<hi, lo> = <lo, hi> XOR 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidDivision, NotScattered


@dataclass(frozen=True, order=True)
class Couple:
    lo: int
    hi: int
    value: Optional[int] = None

    def __post_init__(self):
        if not 0 <= self.lo < self.hi:
            raise InvalidDivision(f"couple needs 0 <= lo < hi, got ({self.lo}, {self.hi})")
        if self.value not in (None, 0, 1):
            raise InvalidDivision(f"couple value must be 0, 1 or None, got {self.value!r}")

    @classmethod
    def between(cls, i: int, j: int, value: Optional[int] = None) -> "Couple":
        """Couple ``<i, j>`` with its value given in the ``i -> j`` orientation."""
        if i < j:
            return cls(i, j, value)
        return cls(j, i, None if value is None else value ^ 1)

    def value_from(self, i: int) -> Optional[int]:
        """Value of the couple read as ``<i, partner>``."""
        if self.value is None:
            return None
        if i == self.lo:
            return self.value
        if i == self.hi:
            return self.value ^ 1
        raise KeyError(i)

    def partner(self, i: int) -> int:
        if i == self.lo:
            return self.hi
        if i == self.hi:
            return self.lo
        raise KeyError(i)

    @property
    def negated_row(self) -> Optional[int]:
        if self.value is None:
            return None
        return self.hi if self.value else self.lo

    def with_value(self, value: Optional[int]) -> "Couple":
        return Couple(self.lo, self.hi, value)

    def to_json(self) -> list:
        return [self.lo, self.hi, self.value]


class Division:
    """``N/2`` disjoint couples covering ``[N]``, kept sorted by ``lo``.

    The position of a couple in :attr:`couples` is its serial number.
    """

    __slots__ = ("couples", "order", "_slot")

    def __init__(self, couples: Iterable[Couple], order: Optional[int] = None):
        cs = tuple(sorted(couples, key=lambda c: c.lo))
        N = 2 * len(cs) if order is None else order
        if 2 * len(cs) != N:
            raise InvalidDivision(f"{len(cs)} couples cannot cover {N} rows")
        slot = [-1] * N
        for num, c in enumerate(cs):
            for r in (c.lo, c.hi):
                if r >= N:
                    raise InvalidDivision(f"row {r} out of range for order {N}")
                if slot[r] != -1:
                    raise InvalidDivision(f"row {r} appears in two couples")
                slot[r] = num
        self.couples = cs
        self.order = N
        self._slot = tuple(slot)

    @classmethod
    def from_json(cls, triples: Sequence[Sequence], order: Optional[int] = None) -> "Division":
        return cls((Couple(int(lo), int(hi), v) for lo, hi, v in triples), order)

    def to_json(self) -> list:
        return [c.to_json() for c in self.couples]

    def serial(self, row: int) -> int:
        """Serial number of the couple containing ``row``."""
        return self._slot[row]

    def couple_of(self, row: int) -> Couple:
        return self.couples[self._slot[row]]

    def partner(self, row: int) -> int:
        return self.couple_of(row).partner(row)

    def pairs(self) -> set[frozenset]:
        return {frozenset((c.lo, c.hi)) for c in self.couples}

    @property
    def valued(self) -> bool:
        return all(c.value is not None for c in self.couples)

    def with_values(self, values: Sequence[Optional[int]]) -> "Division":
        return Division((c.with_value(v) for c, v in zip(self.couples, values)), self.order)

    def __iter__(self) -> Iterator[Couple]:
        return iter(self.couples)

    def __len__(self) -> int:
        return len(self.couples)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Division):
            return NotImplemented
        return self.couples == other.couples

    def __hash__(self) -> int:
        return hash(self.couples)

    def __repr__(self) -> str:
        body = ", ".join(
            f"<{c.lo},{c.hi}>" + ("" if c.value is None else f"={c.value}") for c in self.couples
        )
        return f"Division({{{body}}})"


class SignedPermutation:
    """Scattered matrix stored as ``(perm, signs)``.

    ``signed`` distinguishes sign-carrying operators from the sign-free
    (semi) family; the algebraic predicates differ between the two.
    """

    __slots__ = ("perm", "signs", "signed")

    def __init__(self, perm: Sequence[int], signs: Optional[Sequence[int]] = None, signed: Optional[bool] = None):
        p = tuple(int(x) for x in perm)
        if sorted(p) != list(range(len(p))):
            raise NotScattered("perm is not a permutation")
        if signs is None:
            s = (1,) * len(p)
            signed = False if signed is None else signed
        else:
            s = tuple(int(x) for x in signs)
            if len(s) != len(p) or any(x not in (1, -1) for x in s):
                raise NotScattered("signs must be +-1 per row")
            signed = True if signed is None else signed
        if not signed and any(x == -1 for x in s):
            raise NotScattered("sign-free operator with a negative entry")
        self.perm = p
        self.signs = s
        self.signed = signed

    @classmethod
    def from_dense(cls, x, signed: bool = True) -> "SignedPermutation":
        a = np.asarray(x)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NotScattered("not square")
        nz = a != 0
        if not (np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1)):
            raise NotScattered("need exactly one nonzero per row and column")
        perm = np.argmax(nz, axis=1)
        vals = a[np.arange(a.shape[0]), perm]
        if not np.all(np.abs(vals) == 1):
            raise NotScattered("scattered points must be +-1")
        return cls(perm, vals.astype(int), signed)

    @classmethod
    def identity(cls, order: int, signed: bool = True) -> "SignedPermutation":
        return cls(range(order), (1,) * order if signed else None, signed)

    @property
    def order(self) -> int:
        return len(self.perm)

    def dense(self) -> np.ndarray:
        N = self.order
        out = np.zeros((N, N), dtype=np.int64)
        out[np.arange(N), self.perm] = self.signs
        return out

    @property
    def T(self) -> "SignedPermutation":
        N = self.order
        perm = [0] * N
        signs = [1] * N
        for i, (j, s) in enumerate(zip(self.perm, self.signs)):
            perm[j] = i
            signs[j] = s
        return SignedPermutation(perm, signs if self.signed else None, self.signed)

    def __neg__(self) -> "SignedPermutation":
        if not self.signed:
            raise ValueError("negating a sign-free operator leaves the family")
        return SignedPermutation(self.perm, [-s for s in self.signs], True)

    def __matmul__(self, other: "SignedPermutation") -> "SignedPermutation":
        return compose(self, other)

    def __call__(self, v):
        return apply(self, v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignedPermutation):
            return NotImplemented
        return self.perm == other.perm and self.signs == other.signs

    def __hash__(self) -> int:
        return hash((self.perm, self.signs))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(perm={self.perm}, signs={self.signs}, signed={self.signed})"


class MatchingOperator(SignedPermutation):
    """A signed permutation that passes :func:`is_matching_operator`.

    Signed operators are fixed-point-free involutions up to sign with
    ``M.T == -M``; sign-free ones satisfy ``M.T == M``.
    """

    __slots__ = ()

    def __init__(self, perm, signs=None, signed=None):
        super().__init__(perm, signs, signed)
        if not is_matching_operator(self):
            raise InvalidDivision("not a matching operator")

    @property
    def division(self) -> Division:
        return division_of(self)


def operator_from_division(d: Division, order: Optional[int] = None) -> MatchingOperator:
    """Operator realising every couple of ``d``.

    If all couples carry values the result is signed; if none do it is a
    sign-free (semi) operator.  Mixed divisions are rejected.
    """
    N = d.order if order is None else order
    if d.order != N:
        raise InvalidDivision(f"division covers {d.order} rows, expected {N}")
    vals = {c.value is None for c in d.couples}
    if len(vals) > 1:
        raise InvalidDivision("division mixes valued and unvalued couples")
    perm = [0] * N
    signs = [1] * N
    for c in d.couples:
        perm[c.lo] = c.hi
        perm[c.hi] = c.lo
        if c.value is not None:
            signs[c.negated_row] = -1
    signed = not (vals == {True})
    return MatchingOperator(perm, signs if signed else None, signed)


def division_of(m: SignedPermutation) -> Division:
    couples = []
    for i, j in enumerate(m.perm):
        if i < j:
            if not m.signed:
                couples.append(Couple(i, j))
            else:
                couples.append(Couple(i, j, 0 if m.signs[i] == -1 else 1))
    return Division(couples, m.order)


def apply(m: SignedPermutation, v):
    """Apply ``m`` to a column: ``out[i] = signs[i] * v[perm[i]]``.

    ``v`` may be numeric or a sequence of :class:`SignedEntry`; unknown
    entry signs stay unknown under sign-free operators.
    """
    from .core_types import SignedEntry

    if len(v) != m.order:
        raise DimensionMismatch(f"operator of order {m.order} applied to length {len(v)}")
    if len(v) and isinstance(v[0], SignedEntry):
        out = []
        for i in range(m.order):
            e = v[m.perm[i]]
            if e.sign is None:
                if m.signed:
                    raise DimensionMismatch("signed operator applied to a sign-free column")
                out.append(e)
            else:
                out.append(SignedEntry(e.index, e.sign * m.signs[i]))
        return tuple(out)
    arr = np.asarray(v)
    return np.asarray(m.signs) * arr[list(m.perm)]


def compose(a: SignedPermutation, b: SignedPermutation) -> SignedPermutation:
    """Matrix product ``a @ b``; result is a :class:`MatchingOperator` when it qualifies."""
    if a.order != b.order:
        raise DimensionMismatch(f"orders {a.order} and {b.order} differ")
    perm = [b.perm[p] for p in a.perm]
    signs = [sa * b.signs[p] for sa, p in zip(a.signs, a.perm)]
    signed = a.signed or b.signed
    out = SignedPermutation(perm, signs if signed else None, signed)
    if is_matching_operator(out):
        return MatchingOperator(out.perm, out.signs if signed else None, signed)
    return out


def is_matching_operator(x) -> bool:
    """Signed: ``X.T == -X`` (forces a zero diagonal).  Sign-free: ``X.T == X`` with zero diagonal."""
    if not isinstance(x, SignedPermutation):
        x = SignedPermutation.from_dense(x)
    if any(i == j for i, j in enumerate(x.perm)):
        return False
    for i, j in enumerate(x.perm):
        if x.perm[j] != i:
            return False
        if x.signed and x.signs[i] != -x.signs[j]:
            return False
    return True


def cooperates(a: SignedPermutation, b: SignedPermutation) -> bool:
    """True iff ``b @ a`` is again a matching operator."""
    if a.order != b.order:
        raise DimensionMismatch(f"orders {a.order} and {b.order} differ")
    return is_matching_operator(compose(b, a))


def random_matching_operator(order: int, rng: np.random.Generator, signed: bool = True) -> MatchingOperator:
    """Uniform random pairing of ``[order]`` with random couple values."""
    rows = rng.permutation(order)
    couples = []
    for k in range(0, order, 2):
        i, j = int(rows[k]), int(rows[k + 1])
        couples.append(Couple.between(i, j, int(rng.integers(2)) if signed else None))
    return operator_from_division(Division(couples, order))
